#ifndef FSP_ANALYSIS_HPP
#define FSP_ANALYSIS_HPP

#include <vector>

#include "fsp/grid.hpp"
#include "fsp/params.hpp"
#include "fsp/profile.hpp"

namespace fsp {

enum class FitModel { kPowerLaw, kLogLaw };

// Least-squares exponent estimate over a fixed window.  For power laws the
// model is y = prefactor * d^slope (fit in log-log); for log laws it is
// y = intercept + slope * |log d|.  liminf_constant carries the per-fit
// floor estimate min(y_i * d_i^{-target}) where the caller's target applies.
struct ExponentFit {
    double window_lo = 0.0;  // distance interval, or |xi| interval for tails
    double window_hi = 0.0;
    FitModel model = FitModel::kPowerLaw;
    double slope = 0.0;
    double intercept = 0.0;   // log-prefactor (power) or additive term (log law)
    double prefactor = 0.0;   // exp(intercept); tail fits override it with the
                              // in-window amplitude at the expected exponent
    double stderr_slope = 0.0;
    double residual_rms = 0.0;
    int count = 0;
    double liminf_constant = 0.0;
};

// y = prefactor * x^slope on positive samples.
ExponentFit power_law_fit(const std::vector<double>& x, const std::vector<double>& y);

// y = intercept + slope * |log d| on positive distances.
ExponentFit log_law_fit(const std::vector<double>& d, const std::vector<double>& y);

// y = A + B * d^alpha; golden-section over alpha with linear least squares
// for (A, B) at each trial exponent.  Returns {A, B, alpha}.
struct OffsetPowerFit {
    double offset = 0.0;
    double scale = 0.0;
    double exponent = 0.0;
};
OffsetPowerFit offset_power_fit(const std::vector<double>& d, const std::vector<double>& y);

// Window rules around the free boundary.  Distances are measured from xi0;
// every fit excludes 4 cells on each side of the bracket.  The near window
// is [4 dxi, max(near_frac * xi0, 16 dxi)], the tail window [0.3 R, 0.8 R].
struct FitWindows {
    double near_cells = 4.0;
    double near_frac = 0.2;
    double near_min_cells = 16.0;
    double tail_lo_frac = 0.3;
    double tail_hi_frac = 0.8;
};

// -H'(xi0) as the kernel-weighted integral of U below the free boundary,
// (2s/xi0) * integral_{-inf}^{xi0} U(eta) (xi0-eta)^{-1-2s} deta, split at
// xi0 - 10 dxi: closed-form linear model inside, grid trapezoid outside,
// analytic exterior tail with U -> P1 beyond the window.
struct StefanFormulaReport {
    double value = 0.0;        // finite part of the scaled integral
    double fd_left = 0.0;      // one-sided -H' limits: cusp-extrapolated from
    double fd_right = 0.0;     // finite differences for s < 1/2, plain secants
                               // one bracket away otherwise (diagnostic only)
    double mismatch_left = 0.0;   // |value - fd| / max(|value|, |fd|)
    double mismatch_right = 0.0;
    bool diverges = false;     // s >= 1/2 with a nondegenerate near slope
};
StefanFormulaReport stefan_formula_rhs(const SelfSimilarProfile& profile, double s);

// Slope of log|H'(xi) - H'(xi0+)| vs log(xi - xi0) over [4 dxi, 0.2 xi0];
// the H'(xi0+) limit is estimated by an offset-power fit on the same window.
// Expected slope 1 - 2s for s < 1/2.
ExponentFit holder_fit_right(const SelfSimilarProfile& profile, double s,
                             const FitWindows& w = {});

// Slope of log H'' vs log(xi - xi0) on the near-right window; expected -2s.
// liminf_constant = min H'' * (xi - xi0)^{2s}.  Throws when H'' is not
// positive across the window.
ExponentFit second_derivative_blowup_fit(const SelfSimilarProfile& profile, double s,
                                         const FitWindows& w = {});

// |H'| =~ a + b |log(xi - xi0)| on the near-right window at s = 1/2;
// slope = b, stderr_slope its standard error.
ExponentFit critical_log_fit(const SelfSimilarProfile& profile, const FitWindows& w = {});

// Slope of log|H'| vs log(xi - xi0) on the near-right window; expected
// 1 - 2s < 0.  liminf_constant = min |H'| * (xi - xi0)^{2s-1}.
ExponentFit supercritical_power_fit(const SelfSimilarProfile& profile, double s,
                                    const FitWindows& w = {});

enum class TailSide { kLeft, kRight };

// Far-field decay on |xi| in [0.3 R, 0.8 R]: fits H (right) or L + P1 - H
// (left); expected slope -2s with prefactor P1/(2s).
ExponentFit tail_fit(const SelfSimilarProfile& profile, TailSide side,
                     const StefanParams& p, const FitWindows& w = {});

// Same window on |H'|; expected slope -(1 + 2s) with prefactor P1.
ExponentFit tail_derivative_fit(const SelfSimilarProfile& profile, TailSide side,
                                const StefanParams& p, const FitWindows& w = {});

// Positive parts of H - upper everywhere and lower - H on x < 0 only.
struct SandwichReport {
    double upper_violation = 0.0;
    double lower_violation = 0.0;
};
SandwichReport sandwich_check(const SelfSimilarProfile& profile, const Field& upper,
                              const Field& lower);

// Linear wedge V: C xi0 on eta <= 0, C (xi0 - eta) on [0, xi0], 0 beyond.
// Closed forms of the four pieces of (-Delta)^s V at xi = xi0 - k and the
// subsolution combination -xi V'(xi) + 2s (I + II + III + IV), each piece
// cross-checked against independent adaptive quadrature and the total
// against the generic operator oracle on a gridded V.
struct WedgeRow {
    double xi = 0.0;
    double k = 0.0;
    double I = 0.0;
    double II = 0.0;
    double III = 0.0;
    double IV = 0.0;
    double combined = 0.0;
    double disc_I = 0.0;   // relative cross-check discrepancies
    double disc_II = 0.0;
    double disc_IV = 0.0;
    double disc_total = 0.0;
};
WedgeRow wedge_integrals(double s, double C, double a, double xi0, double xi);

struct WedgeReport {
    double s = 0.0;
    double C = 0.0;
    double a = 0.0;
    bool found = false;
    double max_combined = 0.0;    // over the sampled interval, for the found pair
    double support_margin = 0.0;  // min of U - V over (0, xi0 - a]
    double min_ratio = 0.0;       // s = 1/2 conclusion: min U(eta)/(xi0 - eta)
    std::vector<WedgeRow> rows;
};

// Coarse search for (C, a) with V <= U on (0, xi0 - a] and the combined
// inequality <= 0 at 64 samples of (xi0 - a, xi0).  At s = 1/2 the closed
// forms degenerate; only the positive-linear-lower-bound conclusion is
// checked on the near-left window.
WedgeReport wedge_verify(const SelfSimilarProfile& profile, double s,
                         const FitWindows& w = {});

// U(xi) =~ c (xi0 - xi)^alpha on the near-left window; alpha is checked
// against [s - tol, 1 + tol] and gamma = 1 + alpha - 2s reported with its
// bracket [1 - s, 2 - 2s].
struct LateralBoundReport {
    ExponentFit fit;
    double alpha = 0.0;
    double gamma = 0.0;
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    bool within_bracket = false;  // alpha in [s - 0.1, 1 + 0.1]
};
LateralBoundReport lateral_bound_check(const SelfSimilarProfile& profile, double s,
                                       const FitWindows& w = {});

// alpha <- (1 + alpha - 2s)/(1 + alpha) iterated to |delta| <= 1e-12; the
// fixed point is sqrt(1 - 2s), strictly inside (1 - 2s, 1 - s) for s < 1/2.
struct AlphaStarResult {
    double alpha_star = 0.0;
    int iterations = 0;
    std::vector<double> trajectory;
};
double alpha_star_map(double s, double alpha);
AlphaStarResult alpha_star_iteration(double s, double alpha0);

// Trapezoid masses of L + P1 - H on [x_min, 0] and H on [0, x_max], with
// power-law tail continuations beyond the window fitted by tail_fit.  The
// left continuation converges only for s > 1/2; for s <= 1/2 the half-window
// growth ratio documents the divergence (2^{1-2s} in the limit).
struct MassTransferReport {
    double left_truncated = 0.0;
    double right_truncated = 0.0;
    double left_tail = 0.0;
    double right_tail = 0.0;
    double left_total = 0.0;
    double right_total = 0.0;
    double relative_mismatch = 0.0;
    bool left_divergent = false;
    double left_half_window_ratio = 0.0;  // mass on [-R,0] / mass on [-R/2,0]
};
MassTransferReport mass_transfer_report(const SelfSimilarProfile& profile,
                                        const StefanParams& p);

}  // namespace fsp

#endif
