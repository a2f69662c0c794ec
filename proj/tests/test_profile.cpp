#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsp/evolve.hpp"
#include "fsp/profile.hpp"

using namespace fsp;

namespace {

SolverConfig make_config(double R, int n, double T) {
    SolverConfig cfg{UniformGrid{-R, R, n}};
    cfg.final_time = T;
    cfg.record_times = {T};
    validate_solver_config(cfg);
    return cfg;
}

SelfSimilarProfile solve_profile(const StefanParams& p, double R, int n, double T) {
    SolverConfig cfg = make_config(R, n, T);
    auto states = run_to_time(cfg, p, ExactNonlinearity(p.L));
    return extract_profile(states.back(), p);
}

}  // namespace

TEST_CASE("crossing detection on synthetic tables") {
    const int n = 41;
    std::vector<double> xi(n), H(n);
    for (int i = 0; i < n; ++i) {
        xi[i] = -2.0 + 0.1 * i;
        H[i] = 1.0 - 0.25 * xi[i];  // crosses level 1 exactly at xi = 0
    }
    CrossingResult c = detect_free_boundary(xi, H, 1.0);
    CHECK(std::abs(c.xi0) <= 1e-12);
    CHECK(c.lo <= c.xi0);
    CHECK(c.xi0 <= c.hi);
    CHECK(c.hi - c.lo == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(xi[c.index] == doctest::Approx(c.lo));

    // off-node crossing: level 1.06 sits 0.24 cells left of node xi = -0.2
    CrossingResult c2 = detect_free_boundary(xi, H, 1.06);
    CHECK(c2.xi0 == doctest::Approx(-0.24).epsilon(1e-9));

    std::vector<double> flat(n, 2.0);
    CHECK_THROWS_AS(detect_free_boundary(xi, flat, 1.0), std::runtime_error);
    std::vector<double> below(n, 0.5);
    CHECK_THROWS_AS(detect_free_boundary(xi, below, 1.0), std::runtime_error);
    CHECK_THROWS_AS(detect_free_boundary({0.0}, {1.0}, 0.5), std::invalid_argument);
}

TEST_CASE("extraction at t = 1 is the identity resample") {
    const StefanParams p{0.25, 1.0, 1.0};
    SolverConfig cfg = make_config(20.0, 512, 1.0);
    auto states = run_to_time(cfg, p, ExactNonlinearity(p.L));
    const EvolutionState& st = states.back();
    SelfSimilarProfile pr = extract_profile(st, p);

    REQUIRE(static_cast<int>(pr.H.size()) == cfg.grid.n);
    for (int i = 0; i < cfg.grid.n; ++i) {
        CHECK(pr.xi[i] == doctest::Approx(cfg.grid.x(i)).epsilon(1e-14));
        CHECK(std::abs(pr.H[i] - st.h.values[i]) <= 1e-14);
        CHECK(pr.U[i] == std::max(pr.H[i] - p.L, 0.0));
    }
    CHECK(pr.valid_lo == doctest::Approx(-20.0));
    CHECK(pr.valid_hi == doctest::Approx(20.0));

    // tails: truncated ends stay within twice the analytic tail size
    const double tail = (p.P1 / (2.0 * p.s)) * std::pow(20.0, -2.0 * p.s);
    CHECK(std::abs(pr.H.front() - p.h_left()) <= 2.0 * tail);
    CHECK(std::abs(pr.H.back()) <= 2.0 * tail);

    // free boundary: positive, bracketed by one cell, H(xi0) = L by interpolation
    CHECK(pr.xi0 > 0.0);
    CHECK(pr.xi0_hi - pr.xi0_lo == doctest::Approx(cfg.grid.dx()).epsilon(1e-9));
    CHECK(pr.xi0_lo <= pr.xi0);
    CHECK(pr.xi0 <= pr.xi0_hi);
    const int j = static_cast<int>((pr.xi0_lo - pr.xi[0]) / pr.dxi() + 0.5);
    const double t = (pr.xi0 - pr.xi[j]) / pr.dxi();
    CHECK(pr.H[j] + t * (pr.H[j + 1] - pr.H[j]) == doctest::Approx(p.L).epsilon(1e-12));

    // U vanishes identically beyond the bracket
    for (int i = j + 1; i < cfg.grid.n; ++i) CHECK(pr.U[i] == 0.0);

    EvolutionState bad = st;
    bad.time = 0.0;
    CHECK_THROWS_AS(extract_profile(bad, p), std::invalid_argument);
}

TEST_CASE("profile bounds and monotonicity across regimes") {
    for (double s : {0.25, 0.5, 0.75}) {
        const StefanParams p{s, 1.0, 1.0};
        SelfSimilarProfile pr = solve_profile(p, 20.0, 512, 0.5);
        for (std::size_t i = 0; i < pr.H.size(); ++i) {
            CHECK(pr.H[i] >= -1e-9);
            CHECK(pr.H[i] <= p.h_left() + 1e-9);
        }
        for (std::size_t i = 0; i + 1 < pr.H.size(); ++i)
            CHECK(pr.H[i + 1] <= pr.H[i] + 1e-12);
        CHECK(pr.xi0 > 0.0);
    }
}

TEST_CASE("derivative tables are centered differences of H") {
    const StefanParams p{0.5, 1.0, 1.0};
    SelfSimilarProfile pr = solve_profile(p, 20.0, 256, 0.5);
    const double dxi = pr.dxi();
    for (std::size_t i = 1; i + 1 < pr.H.size(); ++i) {
        const double d = (pr.H[i + 1] - pr.H[i - 1]) / (2.0 * dxi);
        const double d2 = (pr.H[i + 1] - 2.0 * pr.H[i] + pr.H[i - 1]) / (dxi * dxi);
        CHECK(pr.dH[i] == doctest::Approx(d).epsilon(1e-13));
        CHECK(pr.d2H[i] == doctest::Approx(d2).epsilon(1e-13));
        CHECK(pr.dH[i] <= 1e-12);  // nonincreasing profile
    }
    CHECK(pr.d2H[0] == pr.d2H[1]);
}

TEST_CASE("self-similar collapse between extraction times") {
    const StefanParams p{0.5, 1.0, 1.0};
    SolverConfig cfg = make_config(100.0, 4096, 2.0);
    cfg.record_times = {0.5, 2.0};
    validate_solver_config(cfg);
    auto states = run_to_time(cfg, p, ExactNonlinearity(p.L));
    SelfSimilarProfile early = extract_profile(states[0], p);
    SelfSimilarProfile late = extract_profile(states[1], p);

    // t = 2 narrows the trusted window by the stretch factor t^{1/2s} = 2
    CHECK(late.valid_hi == doctest::Approx(50.0));
    const double err = collapse_error(early, late);
    CHECK(err <= 1e-2 * p.h_left());

    // identical profiles collapse to zero
    CHECK(collapse_error(late, late) == 0.0);

    // a coarse grid collapses strictly worse
    SolverConfig coarse = make_config(100.0, 512, 2.0);
    coarse.record_times = {0.5, 2.0};
    validate_solver_config(coarse);
    auto cs = run_to_time(coarse, p, ExactNonlinearity(p.L));
    const double cerr =
        collapse_error(extract_profile(cs[0], p), extract_profile(cs[1], p));
    CHECK(cerr > err);

    CHECK_THROWS_AS(collapse_error(early, extract_profile(cs[0], p)),
                    std::invalid_argument);
}

TEST_CASE("collapse quality across regimes reflects domain truncation and front steepness") {
    // Collapse error on a truncated domain is not uniform in s.  At s = 0.25
    // the constant far-field closure over-weights the fat |x|^{-2s} tail and
    // lifts later rescalings globally, by O(R^{-2s} * t) near the window edge
    // and O(1/R) at the center; the floor does not shrink with n.  At s = 0.75
    // the profile leaves the free boundary with a vertical tangent, so a
    // front-position mismatch delta between two rescalings costs O(sqrt(delta))
    // in sup norm, a phase-sensitive wobble.  Only the balanced s = 0.5 regime
    // collapses to the 1e-2 * (L + P1) scale at this resolution.
    const double tight[3] = {0.30, 0.02, 0.06};
    const double regimes[3] = {0.25, 0.5, 0.75};
    for (int r = 0; r < 3; ++r) {
        const StefanParams p{regimes[r], 1.0, 1.0};
        SolverConfig cfg = make_config(100.0, 4096, 2.0);
        cfg.record_times = {0.5, 1.0, 2.0};
        validate_solver_config(cfg);
        auto states = run_to_time(cfg, p, ExactNonlinearity(p.L));
        std::vector<SelfSimilarProfile> prs;
        for (const auto& st : states) prs.push_back(extract_profile(st, p));
        double worst = 0.0;
        for (std::size_t a = 0; a < prs.size(); ++a)
            for (std::size_t b = a + 1; b < prs.size(); ++b)
                worst = std::max(worst, collapse_error(prs[a], prs[b]));
        CHECK(worst <= tight[r] * p.h_left());
        // away from the window edge and the front the rescalings agree tightly
        const auto& g = cfg.grid;
        const std::size_t mid = g.n / 2;
        double center = 0.0;
        for (std::size_t a = 0; a < prs.size(); ++a)
            for (std::size_t b = a + 1; b < prs.size(); ++b)
                center = std::max(center,
                                  std::abs(prs[a].H[mid] - prs[b].H[mid]));
        CHECK(center <= (r == 0 ? 3e-2 : 1e-3) * p.h_left());
    }
}

TEST_CASE("free boundary stable under grid refinement") {
    const StefanParams p{0.25, 1.0, 1.0};
    SelfSimilarProfile a = solve_profile(p, 100.0, 4096, 1.0);
    SelfSimilarProfile b = solve_profile(p, 100.0, 8192, 1.0);
    CHECK(a.xi0 > 0.0);
    CHECK(b.xi0 > 0.0);
    CHECK(std::abs(a.xi0 - b.xi0) <= 0.02 * b.xi0);
}

TEST_CASE("profiles are equivariant under the latent-heat scaling") {
    const StefanParams p{0.25, 1.0, 1.0};
    SolverConfig cfg = make_config(40.0, 1024, 1.0);

    ScalingReport same = scaling_check(cfg, p, 1.0);
    CHECK(same.max_H_discrepancy <= 1e-13);
    CHECK(same.xi0_discrepancy <= 1e-13);

    // halving (L, P1) is exact in binary arithmetic
    ScalingReport half = scaling_check(cfg, p, 2.0);
    CHECK(half.xi0_reference > 0.0);
    CHECK(half.max_H_discrepancy <= 1e-12);
    CHECK(half.xi0_discrepancy <= 1e-12);
    CHECK(half.max_H_discrepancy <= 1e-2 * p.h_left());
    CHECK(half.xi0_discrepancy <= 1e-2 * half.xi0_reference);

    CHECK_THROWS_AS(scaling_check(cfg, p, 0.0), std::invalid_argument);
}

TEST_CASE("bridge-width sweep approaches the sharp profile") {
    const StefanParams p{0.25, 1.0, 1.0};
    SolverConfig cfg = make_config(40.0, 1024, 1.0);
    EpsSweepResult sw = eps_sweep(cfg, p, {0.05, 0.2, 0.025, 0.1});

    REQUIRE(sw.eps.size() == 4);
    CHECK(sw.eps[0] == 0.2);  // sorted decreasing
    CHECK(sw.eps[3] == 0.025);

    for (std::size_t k = 0; k + 1 < sw.eps.size(); ++k) {
        CHECK(sw.dist_to_exact[k + 1] < sw.dist_to_exact[k]);
        if (k + 2 < sw.eps.size()) CHECK(sw.successive[k + 1] <= sw.successive[k]);
    }

    // fronts of the regularized runs never fall behind by more than 5 cells
    const double dxi = sw.exact.dxi();
    for (double xe : sw.xi_eps) CHECK(xe >= sw.exact.xi0 - 5.0 * dxi);

    // uniform discrete Lipschitz bound across the sweep
    double lip_exact = 0.0;
    for (std::size_t i = 0; i + 1 < sw.exact.H.size(); ++i)
        lip_exact = std::max(lip_exact,
                             std::abs(sw.exact.H[i + 1] - sw.exact.H[i]) / dxi);
    for (double lip : sw.lipschitz) CHECK(lip <= 2.0 * lip_exact);

    CHECK_THROWS_AS(eps_sweep(cfg, p, {}), std::invalid_argument);
    CHECK_THROWS_AS(eps_sweep(cfg, p, {1.5}), std::invalid_argument);
}
