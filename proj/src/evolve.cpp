#include "fsp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsp {

void validate_solver_config(SolverConfig& cfg) {
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 0.9))
        throw std::invalid_argument("cfl_safety must lie in (0, 0.9]");
    if (!(cfg.final_time > 0.0)) throw std::invalid_argument("final_time must be positive");
    if (cfg.record_times.empty()) cfg.record_times.push_back(cfg.final_time);
    std::sort(cfg.record_times.begin(), cfg.record_times.end());
    for (double t : cfg.record_times)
        if (!(t > 0.0 && t <= cfg.final_time * (1.0 + 1e-12)))
            throw std::invalid_argument("record_times must lie in (0, final_time]");
}

EvolutionState make_state(double t, Field h) {
    EvolutionState st{t, std::move(h)};
    const std::vector<double>& v = st.h.values;
    st.h_min = *std::min_element(v.begin(), v.end());
    st.h_max = *std::max_element(v.begin(), v.end());
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i + 1] - v[i]);
    st.total_variation = tv;
    const double dx = st.h.grid.dx();
    double mass = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) mass += v[i];
    st.interior_mass = mass * dx;
    return st;
}

Field step_initial_field(const UniformGrid& g, const StefanParams& p,
                         double jump_location) {
    const double top = p.h_left();
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = g.x(i) <= jump_location ? top : 0.0;
    return Field(g, std::move(v), {top, 0.0});
}

double cfl_dt(const SolverConfig& cfg, const OperatorWeights& w, double lip) {
    if (!(lip > 0.0)) throw std::invalid_argument("lipschitz constant must be positive");
    return cfg.cfl_safety / (lip * 2.0 * w.diag);
}

}  // namespace fsp
