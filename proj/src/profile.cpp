#include "fsp/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsp {

CrossingResult detect_free_boundary(const std::vector<double>& xi,
                                    const std::vector<double>& H, double level) {
    const int n = static_cast<int>(H.size());
    if (n < 2 || xi.size() != H.size())
        throw std::invalid_argument("crossing needs matching tables of length >= 2");
    int j = -1;
    for (int i = 0; i < n; ++i)
        if (H[i] > level) j = i;
    if (j < 0 || j == n - 1) throw std::runtime_error("no free-boundary crossing found");
    const double drop = H[j] - H[j + 1];
    const double t = drop > 0.0 ? (H[j] - level) / drop : 1.0;
    CrossingResult r;
    r.index = j;
    r.lo = xi[j];
    r.hi = xi[j + 1];
    r.xi0 = xi[j] + t * (xi[j + 1] - xi[j]);
    return r;
}

SelfSimilarProfile extract_profile(const EvolutionState& st, const StefanParams& p) {
    if (!(st.time > 0.0)) throw std::invalid_argument("profile extraction needs t > 0");
    const UniformGrid& g = st.h.grid;
    const double stretch = std::pow(st.time, 1.0 / (2.0 * p.s));

    SelfSimilarProfile pr;
    pr.params = p;
    pr.time = st.time;
    pr.xi.resize(g.n);
    pr.H.resize(g.n);
    pr.U.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double xi = g.x(i);
        pr.xi[i] = xi;
        pr.H[i] = st.h.interp_extended(xi * stretch);
        pr.U[i] = std::max(pr.H[i] - p.L, 0.0);
    }
    pr.valid_lo = std::max(g.x_min, g.x_min / stretch);
    pr.valid_hi = std::min(g.x_max, g.x_max / stretch);

    const double dxi = g.dx();
    pr.dH.resize(g.n);
    pr.d2H.resize(g.n);
    for (int i = 1; i + 1 < g.n; ++i) {
        pr.dH[i] = (pr.H[i + 1] - pr.H[i - 1]) / (2.0 * dxi);
        pr.d2H[i] = (pr.H[i + 1] - 2.0 * pr.H[i] + pr.H[i - 1]) / (dxi * dxi);
    }
    pr.dH[0] = (pr.H[1] - pr.H[0]) / dxi;
    pr.dH[g.n - 1] = (pr.H[g.n - 1] - pr.H[g.n - 2]) / dxi;
    pr.d2H[0] = pr.d2H[1];
    pr.d2H[g.n - 1] = pr.d2H[g.n - 2];

    const CrossingResult c = detect_free_boundary(pr.xi, pr.H, p.L);
    pr.xi0 = c.xi0;
    pr.xi0_lo = c.lo;
    pr.xi0_hi = c.hi;
    return pr;
}

double collapse_error(const SelfSimilarProfile& a, const SelfSimilarProfile& b) {
    if (a.xi.size() != b.xi.size())
        throw std::invalid_argument("profiles live on different grids");
    const double lo = std::max(a.valid_lo, b.valid_lo);
    const double hi = std::min(a.valid_hi, b.valid_hi);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.xi.size(); ++i) {
        if (a.xi[i] < lo || a.xi[i] > hi) continue;
        if (std::abs(a.xi[i] - b.xi[i]) > 1e-12)
            throw std::invalid_argument("profiles live on different grids");
        worst = std::max(worst, std::abs(a.H[i] - b.H[i]));
    }
    return worst;
}

ScalingReport scaling_check(const SolverConfig& cfg, const StefanParams& p, double A) {
    if (!(A > 0.0)) throw std::invalid_argument("scale factor must be positive");
    SolverConfig c = cfg;
    validate_solver_config(c);
    const StefanParams scaled{p.s, p.L / A, p.P1 / A};
    auto base = run_to_time(c, p, ExactNonlinearity(p.L));
    auto hat = run_to_time(c, scaled, ExactNonlinearity(scaled.L));
    SelfSimilarProfile pb = extract_profile(base.back(), p);
    SelfSimilarProfile ph = extract_profile(hat.back(), scaled);
    ScalingReport rep{0.0, std::abs(pb.xi0 - ph.xi0), pb.xi0};
    for (std::size_t i = 0; i < pb.H.size(); ++i)
        rep.max_H_discrepancy = std::max(rep.max_H_discrepancy,
                                         std::abs(pb.H[i] - A * ph.H[i]));
    return rep;
}

EpsSweepResult eps_sweep(const SolverConfig& cfg, const StefanParams& p,
                         std::vector<double> eps_list) {
    if (eps_list.empty()) throw std::invalid_argument("eps sweep needs at least one value");
    std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());
    SolverConfig c = cfg;
    validate_solver_config(c);

    EpsSweepResult out;
    out.eps = eps_list;
    out.exact =
        extract_profile(run_to_time(c, p, ExactNonlinearity(p.L)).back(), p);

    for (double eps : eps_list) {
        RegularizedNonlinearity nl(p.L, eps);  // validates eps < min(1, L)
        auto states = run_to_time(c, p, nl);
        SelfSimilarProfile pr = extract_profile(states.back(), p);
        out.xi_eps.push_back(pr.xi0);
        out.dist_to_exact.push_back(collapse_error(pr, out.exact));
        double lip = 0.0;
        const double dxi = pr.dxi();
        for (std::size_t i = 0; i + 1 < pr.H.size(); ++i)
            lip = std::max(lip, std::abs(pr.H[i + 1] - pr.H[i]) / dxi);
        out.lipschitz.push_back(lip);
        out.profiles.push_back(std::move(pr));
    }
    for (std::size_t k = 0; k + 1 < out.profiles.size(); ++k)
        out.successive.push_back(collapse_error(out.profiles[k], out.profiles[k + 1]));
    return out;
}

}  // namespace fsp
