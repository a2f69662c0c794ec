#include "fsp/fraclap.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fsp/quadrature.hpp"

namespace fsp {

namespace {

void check_match(const OperatorWeights& w, const Field& f) {
    if (f.grid.n != w.n) throw std::invalid_argument("field/operator size mismatch");
    if (std::abs(f.grid.dx() - w.dx) > 1e-12 * w.dx)
        throw std::invalid_argument("field/operator spacing mismatch");
}

// correlation weights: band plus the singular-cell coefficient folded
// into offset 1
std::vector<double> corr_weights(const OperatorWeights& w) {
    std::vector<double> wc(w.band);
    wc[1] += w.w0;
    return wc;
}

std::vector<double> extended_values(const Field& f, int n) {
    std::vector<double> V(3 * n);
    std::fill(V.begin(), V.begin() + n, f.closure.left_value);
    std::copy(f.values.begin(), f.values.end(), V.begin() + n);
    std::fill(V.begin() + 2 * n, V.end(), f.closure.right_value);
    return V;
}

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

PlanPair get_plans(int P) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    static std::map<int, PlanPair> cache;
    auto it = cache.find(P);
    if (it != cache.end()) return it->second;
    std::vector<double> r(P, 0.0);
    std::vector<std::complex<double>> c(P / 2 + 1);
    PlanPair pp;
    pp.fwd = fftw_plan_dft_r2c_1d(P, r.data(), reinterpret_cast<fftw_complex*>(c.data()),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_c2r_1d(P, reinterpret_cast<fftw_complex*>(c.data()), r.data(),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[P] = pp;
    return pp;
}

}  // namespace

OperatorWeights build_weights(double s, double dx, int n) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    if (!(dx > 0.0)) throw std::invalid_argument("dx must be positive");
    if (n < 2) throw std::invalid_argument("band length must be at least 2");
    const double p = 2.0 * s;
    const double scale = std::pow(dx, -p);

    OperatorWeights w;
    w.s = s;
    w.dx = dx;
    w.n = n;
    w.w0 = scale / (2.0 - p);
    w.band.assign(n + 1, 0.0);

    // cell m of the hat-function interpolant, in units of dx:
    //   e_m = int_m^{m+1} t^{-1-p} dt          (total mass)
    //   d_m = int_m^{m+1} (t-m) t^{-1-p} dt    (linear part, hits offset m+1)
    //   c_m = e_m - d_m                        (hits offset m)
    double d_prev = 0.0;
    double band_sum = 0.0;
    for (int m = 1; m <= n; ++m) {
        const double lg = std::log1p(1.0 / m);
        const double e = -std::pow(double(m), -p) * std::expm1(-p * lg) / p;
        double d;
        if (std::abs(1.0 - p) < 1e-9) {
            d = lg - m * e;
        } else {
            const double q = 1.0 - p;
            d = std::pow(double(m), q) * std::expm1(q * lg) / q - m * e;
        }
        const double c = e - d;
        w.band[m] = scale * ((m == 1) ? c : c + d_prev);
        band_sum += w.band[m];
        d_prev = d;
    }
    // beyond offset n the extension is exactly constant, so the remainder
    // integrates in closed form
    w.tail = std::pow((n + 1.0) * dx, -p) / p + scale * d_prev;
    w.diag = w.w0 + band_sum + w.tail;
    return w;
}

std::vector<double> apply_direct(const OperatorWeights& w, const Field& f) {
    check_match(w, f);
    const int n = w.n;
    const double cl = f.closure.left_value;
    const double cr = f.closure.right_value;
    const std::vector<double> V = extended_values(f, n);
    const std::vector<double> wc = corr_weights(w);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double* vp = V.data() + n + i;
        double acc = 0.0;
        for (int m = 1; m <= n; ++m) acc += wc[m] * (vp[m] + vp[-m]);
        out[i] = 2.0 * w.diag * f.values[i] - acc - w.tail * (cl + cr);
    }
    return out;
}

std::vector<double> apply_fft(const OperatorWeights& w, const Field& f) {
    check_match(w, f);
    const int n = w.n;
    const int P = 4 * n;  // support of the correlation never aliases at 4n
    const int nh = P / 2 + 1;
    PlanPair pp = get_plans(P);

    if (w.khat.empty()) {
        const std::vector<double> wc = corr_weights(w);
        std::vector<double> K(P, 0.0);
        for (int m = 1; m <= n; ++m) {
            K[n + m] = wc[m];
            K[n - m] = wc[m];
        }
        w.khat.resize(nh);
        fftw_execute_dft_r2c(pp.fwd, K.data(),
                             reinterpret_cast<fftw_complex*>(w.khat.data()));
    }

    std::vector<double> V(P, 0.0);
    {
        const std::vector<double> ext = extended_values(f, n);
        std::copy(ext.begin(), ext.end(), V.begin());
    }
    std::vector<std::complex<double>> vhat(nh);
    fftw_execute_dft_r2c(pp.fwd, V.data(), reinterpret_cast<fftw_complex*>(vhat.data()));
    for (int k = 0; k < nh; ++k) vhat[k] *= std::conj(w.khat[k]);
    std::vector<double> corr(P);
    fftw_execute_dft_c2r(pp.bwd, reinterpret_cast<fftw_complex*>(vhat.data()), corr.data());

    const double cl = f.closure.left_value;
    const double cr = f.closure.right_value;
    const double inv = 1.0 / P;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = 2.0 * w.diag * f.values[i] - corr[i] * inv - w.tail * (cl + cr);
    return out;
}

std::vector<double> apply(const OperatorWeights& w, const Field& f) {
    if (w.n >= 1024) return apply_fft(w, f);
    return apply_direct(w, f);
}

double oracle_quadrature_point(const Field& f, double s, double x, double abs_tol) {
    const UniformGrid& g = f.grid;
    const double dx = g.dx();
    const double p = 2.0 * s;
    const double cl = f.closure.left_value;
    const double cr = f.closure.right_value;
    const double fx = f.interp_extended(x);

    // kinks of the extended interpolant: every node plus one ghost node
    // per side; beyond the ghosts it is constant
    std::vector<double> zs;
    zs.reserve(g.n + 2);
    for (int j = 0; j < g.n; ++j) zs.push_back(std::abs(x - g.x(j)));
    zs.push_back(std::abs(x - (g.x_min - dx)));
    zs.push_back(std::abs(x - (g.x_max + dx)));
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end(),
                         [dx](double a, double b) { return std::abs(a - b) < 1e-12 * dx; }),
             zs.end());

    const double z_edge = std::max(x - (g.x_min - dx), (g.x_max + dx) - x);

    double total = 0.0;
    double z_start;
    const double jr = (x - g.x_min) / dx;
    const int j_near = static_cast<int>(std::lround(jr));
    const bool on_node =
        j_near >= 0 && j_near < g.n && std::abs(x - g.x(j_near)) < 1e-9 * dx;
    if (on_node) {
        // local parabolic model on |z| < dx, same regularization as the
        // discrete weights; closed form
        const double delta2 =
            2.0 * fx - f.interp_extended(x + dx) - f.interp_extended(x - dx);
        total += delta2 * std::pow(dx, -p) / (2.0 - p);
        z_start = dx;
    } else {
        // both legs stay inside the linear piece containing x, so the
        // integrand vanishes identically below the first kink
        z_start = zs.front();
        if (z_start < 1e-12 * dx) z_start = dx;  // degenerate, treat as node spacing
    }

    auto integrand = [&](double z) {
        return (2.0 * fx - f.interp_extended(x + z) - f.interp_extended(x - z)) *
               std::pow(z, -1.0 - p);
    };

    std::vector<double> cuts;
    cuts.push_back(z_start);
    for (double z : zs)
        if (z > z_start * (1.0 + 1e-14) && z < z_edge) cuts.push_back(z);
    cuts.push_back(z_edge);

    const double tol_panel = abs_tol / static_cast<double>(cuts.size());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        if (b - a < 1e-14 * dx) continue;
        QuadResult est = gk15(integrand, a, b);
        const double tol_eff = std::max(tol_panel, 5e-14 * (std::abs(est.value) + 1.0));
        if (est.error <= tol_eff)
            total += est.value;
        else
            total += integrate_adaptive(integrand, a, b, tol_eff, 4000);
    }

    // beyond z_edge both legs sit in the constant closures
    total += (2.0 * fx - cl - cr) * std::pow(z_edge, -p) / p;
    return total;
}

double symbol_constant(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    const double p = 2.0 * s;

    // [0,1]: series of 1-cos
    double i1 = 0.0;
    double fact = 1.0;
    double sign = 1.0;
    for (int m = 1; m <= 40; ++m) {
        fact *= (2.0 * m - 1.0) * (2.0 * m);
        const double term = 1.0 / (fact * (2.0 * m - p));
        i1 += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }

    // [1,A]: adaptive quadrature
    const double A = 1000.0;
    auto g = [p](double w) { return (1.0 - std::cos(w)) * std::pow(w, -1.0 - p); };
    const double i2 = integrate_adaptive(g, 1.0, A, 1e-12, 200000);

    // [A,inf): power part exact, cosine part by repeated integration by parts
    const double sA = std::sin(A);
    const double cA = std::cos(A);
    double coef = 1.0;
    double qk = 1.0 + p;
    double sgn = 1.0;
    double cospart = 0.0;
    for (int k = 0; k < 10; ++k) {
        cospart += sgn * coef *
                   (-sA * std::pow(A, -qk) + qk * cA * std::pow(A, -qk - 1.0));
        coef *= qk * (qk + 1.0);
        qk += 2.0;
        sgn = -sgn;
        if (coef * std::pow(A, -qk) < 1e-20) break;
    }
    const double i3 = std::pow(A, -p) / p - cospart;

    return 2.0 * (i1 + i2 + i3);
}

}  // namespace fsp
