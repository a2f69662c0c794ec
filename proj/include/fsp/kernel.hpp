#ifndef FSP_KERNEL_HPP
#define FSP_KERNEL_HPP

#include <vector>

#include "fsp/grid.hpp"
#include "fsp/params.hpp"

namespace fsp {

// Fundamental solution B(x,t) of dv/dt + (-Delta)^s v = 0 under the
// |z|^{-1-2s} kernel normalization, so the Fourier symbol is A(s)|k|^{2s}:
//   B(x,t) = (1/pi) * integral_0^inf exp(-t A(s) k^{2s}) cos(kx) dk,
//   B(x,t) = t^{-1/2s} B(x t^{-1/2s}, 1).
struct KernelTable {
    double s;
    double t;
    UniformGrid grid;
    std::vector<double> B;    // B(x_i, t)
    std::vector<double> cdf;  // integral_{-inf}^{x_i} B(y,t) dy
    double total_mass;        // cdf.back() + right tail mass; 1 in the limit
};

// Pointwise evaluation: Fourier quadrature for moderate |x| t^{-1/2s},
// large-argument series beyond.  Requires t > 0.
double kernel_point(double s, double x, double t = 1.0);

// Large-argument expansion of B(x,1):
//   (1/pi) sum_{m>=1} (-1)^{m+1} (A^m/m!) Gamma(1+2sm) sin(pi s m) x^{-1-2sm},
// convergent for 2s <= 1, asymptotic (truncated at the smallest term) for
// 2s > 1.  The leading coefficient A Gamma(1+2s) sin(pi s)/pi equals 1, so
// B(x,1) ~ |x|^{-1-2s} exactly.  Requires |x| >= 40 to keep the truncation
// error near 1e-12.
double kernel_point_series(double s, double x);

// Right tail mass integral_x^inf B(y,1) dy, any x, via the inversion
//   1/2 - (1/pi) integral_0^inf sin(kx)/k exp(-A(s) k^{2s}) dk  (x >= 0)
// and the reflection 1 - mass(-x) for x < 0.
double kernel_tail_mass(double s, double x);

// Same mass by termwise integration of the large-argument series; x >= 40.
double kernel_tail_mass_series(double s, double x);

// Table on a grid: B column pointwise, cdf column by trapezoid anchored at
// the exact mass below the left edge, total_mass adds the right tail.
KernelTable kernel_build(double s, double t, const UniformGrid& grid);

// L + P1 - P1 * cdf(x): upper envelope for the step-data enthalpy profile.
Field envelope_upper(const StefanParams& p, const KernelTable& table);

// L + P1 - 2 P1 * cdf(x): lower envelope, valid as a bound on x < 0 only;
// its continuation to x > 0 undershoots L and is kept for completeness.
Field envelope_lower(const StefanParams& p, const KernelTable& table);

}  // namespace fsp

#endif
