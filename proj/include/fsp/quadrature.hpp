#ifndef FSP_QUADRATURE_HPP
#define FSP_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace fsp {

struct QuadResult {
    double value;
    double error;
};

// 15-point Gauss-Kronrod rule with embedded 7-point Gauss error estimate.
QuadResult gk15(const std::function<double(double)>& f, double a, double b);

// Globally adaptive bisection on [a, b] until the summed error estimate is
// below abs_tol. Throws std::runtime_error when the interval budget runs out.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_intervals = 20000);

// Sum of a convergent alternating series a0 - a1 + a2 - ... by van
// Wijngaarden iterated averaging of partial sums; terms[] holds |a_k|.
double alternating_sum(const std::vector<double>& terms);

}  // namespace fsp

#endif
