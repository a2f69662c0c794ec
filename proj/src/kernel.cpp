#include "fsp/kernel.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "fsp/fraclap.hpp"
#include "fsp/quadrature.hpp"

namespace fsp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesSwitch = 64.0;  // Fourier below, series at and above
constexpr double kSeriesFloor = 40.0;   // series truncation error ~1e-12 here
constexpr double kLogCutoff = 32.2;     // exp(-32.2) ~ 1e-14 spectral tail

// 7-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlX[7] = {0.0,
                            0.4058451513773972,  -0.4058451513773972,
                            0.7415311855993945,  -0.7415311855993945,
                            0.9491079123427585,  -0.9491079123427585};
constexpr double kGlW[7] = {0.4179591836734694,
                            0.3818300505051189,  0.3818300505051189,
                            0.2797053914892766,  0.2797053914892766,
                            0.1294849661688697,  0.1294849661688697};

// Fixed-width panels, each at most a quarter oscillation of the integrand.
double panel_integral(const std::function<double(double)>& f, double a, double b,
                      double width) {
    if (!(b > a)) return 0.0;
    const int np = static_cast<int>(std::ceil((b - a) / width));
    const double h = (b - a) / np;
    double total = 0.0;
    for (int p = 0; p < np; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (int q = 0; q < 7; ++q) acc += kGlW[q] * f(mid + 0.5 * h * kGlX[q]);
        total += 0.5 * h * acc;
    }
    return total;
}

// Spectral cutoff K with exp(-A K^{2s}) below the 1e-14 truncation level.
double spectral_cutoff(double s, double A) { return std::pow(kLogCutoff / A, 1.0 / (2.0 * s)); }

// (1/pi) integral_0^K exp(-A k^{2s}) cos(kx) dk; adaptive near the k=0
// kink, quarter-period Gauss panels across the oscillatory range.
double fourier_point(double s, double x) {
    const double A = symbol_constant(s);
    const double K = spectral_cutoff(s, A);
    const double ax = std::abs(x);
    auto f = [&](double k) {
        return std::exp(-A * std::pow(k, 2.0 * s)) * std::cos(k * ax);
    };
    const double split = std::min(1.0, K);
    double v = integrate_adaptive(f, 0.0, split, 5e-14, 40000);
    if (K > split) {
        const double width = std::min(0.25, 0.5 * kPi / std::max(ax, 1.0));
        v += panel_integral(f, split, K, width);
    }
    return v / kPi;
}

}  // namespace

double kernel_point_series(double s, double x) {
    const double ax = std::abs(x);
    if (!(ax >= kSeriesFloor))
        throw std::invalid_argument("kernel series needs |x| >= 40");
    const double A = symbol_constant(s);
    const double ln_a = std::log(A);
    const double ln_x = std::log(ax);
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 200; ++m) {
        const double mag =
            std::exp(m * ln_a - std::lgamma(m + 1.0) + std::lgamma(1.0 + 2.0 * s * m) -
                     (1.0 + 2.0 * s * m) * ln_x);
        if (mag > prev) break;  // asymptotic regime: stop at the smallest term
        sum += mag * std::sin(kPi * s * m) * ((m % 2) ? 1.0 : -1.0);
        if (mag < 1e-17 + 1e-16 * std::abs(sum)) break;
        prev = mag;
    }
    return sum / kPi;
}

double kernel_tail_mass_series(double s, double x) {
    if (!(x >= kSeriesFloor))
        throw std::invalid_argument("kernel mass series needs x >= 40");
    const double A = symbol_constant(s);
    const double ln_a = std::log(A);
    const double ln_x = std::log(x);
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 200; ++m) {
        const double mag =
            std::exp(m * ln_a - std::lgamma(m + 1.0) + std::lgamma(1.0 + 2.0 * s * m) -
                     2.0 * s * m * ln_x) /
            (2.0 * s * m);
        if (mag > prev) break;
        sum += mag * std::sin(kPi * s * m) * ((m % 2) ? 1.0 : -1.0);
        if (mag < 1e-17 + 1e-16 * std::abs(sum)) break;
        prev = mag;
    }
    return sum / kPi;
}

double kernel_point(double s, double x, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel needs t > 0");
    const double stretch = std::pow(t, -1.0 / (2.0 * s));
    const double xi = std::abs(x) * stretch;
    const double b1 = (xi < kSeriesSwitch) ? fourier_point(s, xi) : kernel_point_series(s, xi);
    return stretch * b1;
}

double kernel_tail_mass(double s, double x) {
    if (x < 0.0) return 1.0 - kernel_tail_mass(s, -x);
    const double A = symbol_constant(s);
    const double K = spectral_cutoff(s, A);
    auto f = [&](double k) {
        if (k == 0.0) return x;
        return std::sin(k * x) / k * std::exp(-A * std::pow(k, 2.0 * s));
    };
    const double split = std::min(1.0, K);
    double v = integrate_adaptive(f, 0.0, split, 5e-14, 40000);
    if (K > split) {
        const double width = std::min(0.25, 0.5 * kPi / std::max(x, 1.0));
        v += panel_integral(f, split, K, width);
    }
    return 0.5 - v / kPi;
}

KernelTable kernel_build(double s, double t, const UniformGrid& grid) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel table needs t > 0");
    const double stretch = std::pow(t, -1.0 / (2.0 * s));
    KernelTable tab{s, t, grid, {}, {}, 0.0};
    tab.B.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) tab.B[i] = kernel_point(s, grid.x(i), t);
    tab.cdf.resize(grid.n);
    // mass below the left edge, exact up to quadrature tolerance
    tab.cdf[0] = 1.0 - kernel_tail_mass(s, grid.x_min * stretch);
    const double dx = grid.dx();
    for (int i = 1; i < grid.n; ++i)
        tab.cdf[i] = tab.cdf[i - 1] + 0.5 * (tab.B[i] + tab.B[i - 1]) * dx;
    tab.total_mass = tab.cdf[grid.n - 1] + kernel_tail_mass(s, grid.x_max * stretch);
    return tab;
}

namespace {

void check_envelope_table(const StefanParams& p, const KernelTable& tab) {
    if (std::abs(tab.t - 1.0) > 1e-12)
        throw std::invalid_argument("envelopes need a t = 1 kernel table");
    if (std::abs(tab.s - p.s) > 1e-12)
        throw std::invalid_argument("kernel table order does not match parameters");
}

}  // namespace

Field envelope_upper(const StefanParams& p, const KernelTable& tab) {
    check_envelope_table(p, tab);
    std::vector<double> v(tab.cdf.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = p.L + p.P1 * (1.0 - tab.cdf[i]);
    return Field(tab.grid, std::move(v), ExteriorClosure{p.h_left(), p.L});
}

Field envelope_lower(const StefanParams& p, const KernelTable& tab) {
    check_envelope_table(p, tab);
    std::vector<double> v(tab.cdf.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = p.L + p.P1 * (1.0 - 2.0 * tab.cdf[i]);
    return Field(tab.grid, std::move(v), ExteriorClosure{p.h_left(), p.L - p.P1});
}

}  // namespace fsp
