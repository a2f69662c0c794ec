#ifndef FSP_EVOLVE_HPP
#define FSP_EVOLVE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsp/fraclap.hpp"
#include "fsp/grid.hpp"
#include "fsp/nonlinearity.hpp"
#include "fsp/params.hpp"

namespace fsp {

// Explicit Euler marching of dh/dt + (-Lap)^s Phi#(h) = 0 on a truncated
// domain with constant exterior data.

struct SolverConfig {
    UniformGrid grid;
    double cfl_safety = 0.4;  // lambda in (0, 0.9]
    double final_time = 1.0;
    bool use_regularized = false;
    double eps = 0.1;  // bridge width when use_regularized
    std::vector<double> record_times;  // within (0, T]; defaults to {T}
};

// Sorts record_times and applies the default; throws std::invalid_argument.
void validate_solver_config(SolverConfig& cfg);

struct EvolutionState {
    double time;
    Field h;
    double h_min = 0.0;
    double h_max = 0.0;
    double total_variation = 0.0;
    double interior_mass = 0.0;
};

EvolutionState make_state(double t, Field h);

// Step initial datum: L+P1 for x <= jump_location (left-continuous at the
// jump), 0 beyond; closures L+P1 / 0.
Field step_initial_field(const UniformGrid& g, const StefanParams& p,
                         double jump_location = 0.0);

// dt = lambda / (lip * D), D the row sum of positive update coefficients
// (2x the operator diagonal), so the explicit update stays a convex
// combination and hence order-preserving.
double cfl_dt(const SolverConfig& cfg, const OperatorWeights& w, double lip);

struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One explicit update h - dt*(-Lap)^s Phi#(h).  The result must stay inside
// the box spanned by the current values and closures; escapes beyond 1e-9
// signal a CFL violation and throw InstabilityError.
template <class NL>
EvolutionState step(const EvolutionState& st, const OperatorWeights& w, const NL& nl,
                    double dt) {
    const Field& h = st.h;
    const int n = h.grid.n;
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = nl.eval(h.values[i]);
    Field uf(h.grid, std::move(u),
             {nl.eval(h.closure.left_value), nl.eval(h.closure.right_value)});
    const std::vector<double> lap = apply(w, uf);

    const double lo =
        std::min(st.h_min, std::min(h.closure.left_value, h.closure.right_value));
    const double hi =
        std::max(st.h_max, std::max(h.closure.left_value, h.closure.right_value));

    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
        const double v = h.values[i] - dt * lap[i];
        if (v < lo - 1e-9 || v > hi + 1e-9)
            throw InstabilityError("explicit update left the invariant box: time step too large");
        next[i] = v;
    }
    return make_state(st.time + dt, Field(h.grid, std::move(next), h.closure));
}

// March from an arbitrary initial field, recording the states at
// cfg.record_times (hit exactly by clamping the last step of each leg).
template <class NL>
std::vector<EvolutionState> run_from(const SolverConfig& cfg, double s,
                                     const Field& initial, const NL& nl,
                                     bool check_monotone) {
    OperatorWeights w = build_weights(s, cfg.grid.dx(), cfg.grid.n);
    const double dt0 = cfl_dt(cfg, w, nl.lipschitz());
    EvolutionState st = make_state(0.0, initial);
    std::vector<EvolutionState> out;
    out.reserve(cfg.record_times.size());
    for (double target : cfg.record_times) {
        while (st.time < target) {
            const double dtk = std::min(dt0, target - st.time);
            st = step(st, w, nl, dtk);
            if (target - st.time <= 1e-12 * dt0) st.time = target;
        }
        if (check_monotone) {
            const double tol = 1e-12 * (std::abs(st.h_max) + 1.0);
            for (int i = 0; i + 1 < st.h.grid.n; ++i)
                if (st.h.values[i + 1] > st.h.values[i] + tol)
                    throw InstabilityError("monotonicity in x was lost");
        }
        out.push_back(st);
    }
    return out;
}

// Canonical run: step datum of the Stefan problem, monotone by construction.
template <class NL>
std::vector<EvolutionState> run_to_time(const SolverConfig& cfg, const StefanParams& p,
                                        const NL& nl) {
    return run_from(cfg, p.s, step_initial_field(cfg.grid, p), nl, true);
}

}  // namespace fsp

#endif
