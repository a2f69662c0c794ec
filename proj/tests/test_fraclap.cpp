#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "fsp/fraclap.hpp"
#include "fsp/grid.hpp"
#include "fsp/quadrature.hpp"

using namespace fsp;

namespace {

Field smooth_test_field(const UniformGrid& g) {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        v[i] = 0.5 * (1.0 - std::tanh(0.5 * x)) + 0.3 * std::exp(-x * x);
    }
    return Field(g, v, {1.0, 0.0});
}

}  // namespace

TEST_CASE("weights: positivity and exact diagonal sum") {
    for (double s : {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}) {
        const double dx = 0.05;
        OperatorWeights w = build_weights(s, dx, 512);
        CHECK(w.w0 > 0.0);
        CHECK(w.tail > 0.0);
        for (int m = 1; m <= w.n; ++m) CHECK(w.band[m] > 0.0);
        // telescoping: total weight equals the full integral of the kernel
        const double p = 2.0 * s;
        const double expected = std::pow(dx, -p) * (1.0 / (2.0 - p) + 1.0 / p);
        CHECK(w.diag == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("weights: band decays monotonically") {
    OperatorWeights w = build_weights(0.6, 0.1, 256);
    for (int m = 2; m <= w.n; ++m) CHECK(w.band[m] < w.band[m - 1]);
}

TEST_CASE("constants are annihilated") {
    UniformGrid g(-1.0, 1.0, 128);
    Field f(g, std::vector<double>(128, 3.7), {3.7, 3.7});
    for (double s : {0.25, 0.5, 0.75}) {
        OperatorWeights w = build_weights(s, g.dx(), g.n);
        const double scale = w.diag * 3.7;
        for (double v : apply_direct(w, f)) CHECK(std::abs(v) <= 1e-12 * scale);
        for (double v : apply_fft(w, f)) CHECK(std::abs(v) <= 1e-12 * scale);
    }
}

TEST_CASE("dense and fft paths agree") {
    UniformGrid g(-10.0, 10.0, 2048);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> un(-0.1, 0.1);
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        v[i] = std::sin(x) * std::exp(-0.05 * x * x) + un(rng);
    }
    Field f(g, v, {0.3, -0.2});
    for (double s : {0.25, 0.5, 0.75}) {
        OperatorWeights w = build_weights(s, g.dx(), g.n);
        const std::vector<double> a = apply_direct(w, f);
        const std::vector<double> b = apply_fft(w, f);
        double scale = 1.0;
        for (double x : a) scale = std::max(scale, std::abs(x));
        for (int i = 0; i < g.n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10 * scale);
    }
}

TEST_CASE("operator matches adaptive quadrature on a smooth field") {
    UniformGrid g(-40.0, 40.0, 1024);
    Field f = smooth_test_field(g);
    const int idx[10] = {64, 200, 340, 430, 480, 512, 540, 590, 700, 940};
    for (double s : {0.25, 0.5, 0.75}) {
        OperatorWeights w = build_weights(s, g.dx(), g.n);
        const std::vector<double> a = apply(w, f);
        for (int j : idx) {
            const double o = oracle_quadrature_point(f, s, g.x(j), 1e-8);
            CHECK(std::abs(a[j] - o) <= 1e-4 * std::max(1.0, std::abs(o)));
        }
    }
}

TEST_CASE("oracle far field of a narrow bump follows the kernel power law") {
    UniformGrid g(-1.0, 1.0, 64);
    std::vector<double> v(g.n, 0.0);
    const int j0 = 32;
    v[j0] = 1.0;
    Field f(g, v, {0.0, 0.0});
    const double dx = g.dx();
    const double x0 = g.x(j0);
    for (double s : {0.3, 0.75}) {
        CHECK(oracle_quadrature_point(f, s, x0, 1e-10) > 0.0);
        const double dist = 20.5 * dx;
        const double o = oracle_quadrature_point(f, s, x0 + dist, 1e-12);
        // tent mass dx concentrated at x0
        const double predicted = -dx * std::pow(dist, -1.0 - 2.0 * s);
        CHECK(o == doctest::Approx(predicted).epsilon(0.03));
    }
}

TEST_CASE("step field sign pattern") {
    UniformGrid g(-5.0, 5.0, 256);
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = g.x(i) <= 0.0 ? 2.0 : 0.0;
    Field f(g, v, {2.0, 0.0});
    for (double s : {0.25, 0.5, 0.75}) {
        OperatorWeights w = build_weights(s, g.dx(), g.n);
        const std::vector<double> a = apply_direct(w, f);
        const double scale = 2.0 * w.diag;
        for (int i = 0; i < g.n; ++i) {
            if (g.x(i) <= 0.0)
                CHECK(a[i] >= -1e-12 * scale);
            else
                CHECK(a[i] <= 1e-12 * scale);
        }
    }
}

TEST_CASE("quadratic form is nonnegative with zero closures") {
    UniformGrid g(-1.0, 1.0, 64);
    OperatorWeights w = build_weights(0.6, g.dx(), g.n);
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(g.n);
        double norm2 = 0.0;
        for (double& x : v) {
            x = un(rng);
            norm2 += x * x;
        }
        Field f(g, v, {0.0, 0.0});
        const std::vector<double> a = apply_direct(w, f);
        double quad = 0.0;
        for (int i = 0; i < g.n; ++i) quad += v[i] * a[i];
        CHECK(quad >= -1e-12 * w.diag * norm2);
    }
}

TEST_CASE("plane waves reproduce the symbol") {
    struct Setup {
        double s, R;
        int n;
    };
    const Setup setups[3] = {{0.25, 3500.0, 65536}, {0.5, 300.0, 8192}, {0.75, 100.0, 4096}};
    for (const Setup& su : setups) {
        UniformGrid g(-su.R, su.R, su.n);
        const double A = symbol_constant(su.s);
        OperatorWeights w = build_weights(su.s, g.dx(), g.n);
        for (double k : {0.5, 1.0, 2.0}) {
            CHECK(k * g.dx() <= 0.3);
            std::vector<double> v(g.n);
            for (int i = 0; i < g.n; ++i) v[i] = std::cos(k * g.x(i));
            // far-field mean of the wave is the honest closure constant;
            // the truncated oscillatory tail then cancels to O(R^{-1-2s})
            Field f(g, v, {0.0, 0.0});
            const std::vector<double> a = apply(w, f);
            const double amp = A * std::pow(k, 2.0 * su.s);
            double worst = 0.0;
            for (int i = 0; i < g.n; ++i) {
                if (std::abs(g.x(i)) > su.R / 3.0) continue;
                worst = std::max(worst, std::abs(a[i] - amp * v[i]));
            }
            CHECK(worst <= 1e-2 * amp);
        }
    }
}

TEST_CASE("symbol constant: exact value at s = 1/2 and gamma identity") {
    CHECK(symbol_constant(0.5) == doctest::Approx(M_PI).epsilon(1e-9));
    for (double s : {0.25, 0.3, 0.6, 0.75}) {
        const double ref = -2.0 * std::tgamma(-2.0 * s) * std::cos(M_PI * s);
        CHECK(symbol_constant(s) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("symbol constant: independent sine-integral route") {
    for (double s : {0.3, 0.6}) {
        const double p = 2.0 * s;
        auto f0 = [p](double w) { return std::sin(w) * std::pow(w, -p); };
        const double head = integrate_adaptive(f0, 0.0, M_PI, 1e-12, 100000);
        std::vector<double> terms;
        auto fa = [p](double w) { return std::abs(std::sin(w)) * std::pow(w, -p); };
        for (int k = 1; k <= 40; ++k)
            terms.push_back(integrate_adaptive(fa, k * M_PI, (k + 1) * M_PI, 1e-13));
        const double total = head - alternating_sum(terms);
        CHECK(symbol_constant(s) == doctest::Approx(total / s).epsilon(1e-6));
    }
}

TEST_CASE("weights vary continuously across s = 1/2") {
    const double dx = 0.05;
    const int n = 64;
    OperatorWeights mid = build_weights(0.5, dx, n);
    for (double s : {0.5 - 1e-7, 0.5 + 1e-7}) {
        OperatorWeights w = build_weights(s, dx, n);
        for (int m = 1; m <= n; ++m)
            CHECK(w.band[m] == doctest::Approx(mid.band[m]).epsilon(1e-4));
        CHECK(w.tail == doctest::Approx(mid.tail).epsilon(1e-4));
        CHECK(symbol_constant(s) == doctest::Approx(M_PI).epsilon(1e-4));
    }
}
