#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsp/grid.hpp"
#include "fsp/nonlinearity.hpp"
#include "fsp/params.hpp"
#include "fsp/quadrature.hpp"

using namespace fsp;

TEST_CASE("parameter validation") {
    StefanParams p{0.5, 1.0, 1.0};
    CHECK_NOTHROW(validate_params(p));
    CHECK(p.h_left() == doctest::Approx(2.0));
    CHECK(p.ratio() == doctest::Approx(1.0));
    CHECK_THROWS_AS(validate_params({0.01, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_params({0.99, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_params({0.5, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_params({0.5, 1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("exact nonlinearity") {
    ExactNonlinearity phi(1.0);
    CHECK(phi.eval(0.3) == 0.0);
    CHECK(phi.eval(1.0) == 0.0);
    CHECK(phi.eval(1.7) == doctest::Approx(0.7));
    CHECK(phi.derivative(0.3) == 0.0);
    CHECK(phi.derivative(1.7) == 1.0);
    CHECK(phi.lipschitz() == 1.0);
}

TEST_CASE("regularized nonlinearity: joints and derivative range") {
    const double L = 1.0;
    for (double eps : {0.2, 0.1, 0.05}) {
        RegularizedNonlinearity phi(L, eps);
        // upper joint at x = L: value 0, slope 1 from both sides
        CHECK(std::abs(phi.eval(L)) <= 1e-14);
        CHECK(phi.eval(L + 0.5) == doctest::Approx(0.5));
        CHECK(phi.derivative(L - 1e-13) == doctest::Approx(1.0).epsilon(1e-10));
        // lower joint at x = L - eps
        const double lo = L - eps;
        CHECK(phi.eval(lo) == doctest::Approx(-eps * (1.0 + eps) / 2.0));
        CHECK(phi.derivative(lo) == doctest::Approx(eps));
        CHECK(phi.derivative(lo - 0.1) == doctest::Approx(eps));
        // continuity across the lower joint
        CHECK(phi.eval(lo - 1e-12) == doctest::Approx(phi.eval(lo)).epsilon(1e-9));
        // derivative stays in [eps, 1] and increases across the bridge
        double prev = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double x = lo + eps * k / 200.0;
            const double d = phi.derivative(x);
            CHECK(d >= eps - 1e-12);
            CHECK(d <= 1.0 + 1e-12);
            if (k > 0) CHECK(d >= prev - 1e-12);
            prev = d;
        }
    }
    CHECK_THROWS_AS(RegularizedNonlinearity(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RegularizedNonlinearity(0.5, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(RegularizedNonlinearity(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("regularized nonlinearity: uniform distance to the exact one") {
    const double L = 1.0, P1 = 1.0;
    double prev_sup = 1e9;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
        ExactNonlinearity phi(L);
        RegularizedNonlinearity phie(L, eps);
        double sup = 0.0;
        for (int k = 0; k <= 4000; ++k) {
            const double x = (L + P1) * k / 4000.0;
            const double diff = phie.eval(x) - phi.eval(x);
            CHECK(diff <= 1e-14);  // regularization sits below the exact graph
            sup = std::max(sup, std::abs(diff));
        }
        // max gap is at x = 0 where the linear branch has dropped the most
        const double predicted = eps * (L + 0.5 - eps / 2.0);
        CHECK(sup == doctest::Approx(predicted).epsilon(1e-6));
        CHECK(sup <= eps * (L + 2.0));
        CHECK(sup < prev_sup);
        prev_sup = sup;
    }
}

TEST_CASE("uniform grid and extended interpolant") {
    UniformGrid g(-2.0, 2.0, 17);
    CHECK(g.dx() == doctest::Approx(0.25));
    CHECK(g.x(0) == doctest::Approx(-2.0));
    CHECK(g.x(16) == doctest::Approx(2.0));
    CHECK_THROWS_AS(UniformGrid(0.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(UniformGrid(1.0, 0.0, 32), std::invalid_argument);

    std::vector<double> v(17);
    for (int i = 0; i < 17; ++i) v[i] = g.x(i) * g.x(i);
    Field f(g, v, {5.0, 7.0});
    CHECK(f.interp_extended(g.x(4)) == doctest::Approx(v[4]));
    CHECK(f.interp_extended(0.5 * (g.x(4) + g.x(5))) == doctest::Approx(0.5 * (v[4] + v[5])));
    // ghost transitions
    CHECK(f.interp_extended(-2.0 - 0.25) == doctest::Approx(5.0));
    CHECK(f.interp_extended(-3.0) == doctest::Approx(5.0));
    CHECK(f.interp_extended(-2.0 - 0.125) == doctest::Approx(0.5 * (5.0 + v[0])));
    CHECK(f.interp_extended(2.0 + 0.25) == doctest::Approx(7.0));
    CHECK(f.interp_extended(2.0 + 0.125) == doctest::Approx(0.5 * (7.0 + v[16])));
    CHECK(f.interp_extended(100.0) == doctest::Approx(7.0));

    CHECK_THROWS_AS(Field(g, std::vector<double>(5, 0.0), {0.0, 0.0}), std::invalid_argument);
    std::vector<double> bad(17, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(Field(g, bad, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("gauss-kronrod rule") {
    auto sq = [](double x) { return x * x; };
    QuadResult r = gk15(sq, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r.error <= 1e-12);

    auto osc = [](double x) { return std::sin(x); };
    r = gk15(osc, 0.0, M_PI);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adaptive integration") {
    auto invsqrt = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK(integrate_adaptive(invsqrt, 0.0, 1.0, 1e-9, 200000) ==
          doctest::Approx(2.0).epsilon(1e-8));

    auto osc = [](double x) { return std::cos(x); };
    CHECK(std::abs(integrate_adaptive(osc, 0.0, 20.0 * M_PI, 1e-11)) <= 1e-9);

    auto decay = [](double x) { return std::exp(-x); };
    CHECK(integrate_adaptive(decay, 0.0, 40.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-11));

    // budget exhaustion reports rather than spinning
    CHECK_THROWS_AS(integrate_adaptive(invsqrt, 0.0, 1.0, 1e-300, 50), std::runtime_error);
}

TEST_CASE("alternating series acceleration") {
    std::vector<double> log_terms, pi_terms;
    for (int k = 0; k < 30; ++k) {
        log_terms.push_back(1.0 / (k + 1.0));
        pi_terms.push_back(1.0 / (2.0 * k + 1.0));
    }
    CHECK(alternating_sum(log_terms) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(alternating_sum(pi_terms) == doctest::Approx(M_PI / 4.0).epsilon(1e-9));
}
