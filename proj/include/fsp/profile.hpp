#ifndef FSP_PROFILE_HPP
#define FSP_PROFILE_HPP

#include <vector>

#include "fsp/evolve.hpp"
#include "fsp/grid.hpp"
#include "fsp/params.hpp"

namespace fsp {

// Linear-interpolation crossing of a nonincreasing table through `level`:
// the last node above the level starts the one-cell bracket.  Throws
// std::runtime_error when the table never crosses.
struct CrossingResult {
    double xi0;
    double lo, hi;  // bracket, one cell wide
    int index;      // node starting the bracket
};
CrossingResult detect_free_boundary(const std::vector<double>& xi,
                                    const std::vector<double>& H, double level);

// Self-similar view H(xi) = h(xi * t^{1/2s}, t) resampled onto the x-grid
// (identity at t = 1).  U applies the sharp phase cut, derivative tables are
// centered differences (one-sided at the ends).
struct SelfSimilarProfile {
    StefanParams params;
    double time = 1.0;
    std::vector<double> xi, H, U, dH, d2H;
    double xi0 = 0.0, xi0_lo = 0.0, xi0_hi = 0.0;
    double valid_lo = 0.0, valid_hi = 0.0;  // window resampled strictly inside the grid

    double dxi() const { return xi.size() > 1 ? xi[1] - xi[0] : 0.0; }
};

SelfSimilarProfile extract_profile(const EvolutionState& st, const StefanParams& p);

// Sup distance over the common valid window; profiles must share the grid.
double collapse_error(const SelfSimilarProfile& a, const SelfSimilarProfile& b);

// Solve with (s, L, P1) and (s, L/A, P1/A); the rescaled pair must coincide.
struct ScalingReport {
    double max_H_discrepancy;
    double xi0_discrepancy;
    double xi0_reference;
};
ScalingReport scaling_check(const SolverConfig& cfg, const StefanParams& p, double A);

// Runs the regularized solver for each bridge width (sorted decreasing) at
// the same discretization, plus the sharp-nonlinearity reference.
struct EpsSweepResult {
    std::vector<double> eps;
    std::vector<SelfSimilarProfile> profiles;
    std::vector<double> xi_eps;          // sup{xi : H_eps > L} per eps
    std::vector<double> dist_to_exact;   // ||H_eps - H||_inf per eps
    std::vector<double> successive;      // ||H_eps_k - H_eps_{k+1}||_inf
    std::vector<double> lipschitz;       // max |dH/dxi| per eps
    SelfSimilarProfile exact;
};
EpsSweepResult eps_sweep(const SolverConfig& cfg, const StefanParams& p,
                         std::vector<double> eps_list);

}  // namespace fsp

#endif
