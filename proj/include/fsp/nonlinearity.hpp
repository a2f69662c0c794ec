#ifndef FSP_NONLINEARITY_HPP
#define FSP_NONLINEARITY_HPP

#include <algorithm>
#include <stdexcept>

namespace fsp {

// Exact Stefan nonlinearity Phi(h) = (h - L)_+ mapping enthalpy to temperature.
class ExactNonlinearity {
  public:
    explicit ExactNonlinearity(double L) : L_(L) {}

    double eval(double x) const { return std::max(x - L_, 0.0); }
    double derivative(double x) const { return x > L_ ? 1.0 : 0.0; }
    double lipschitz() const { return 1.0; }
    double latent_heat() const { return L_; }

  private:
    double L_;
};

inline double phi_eval(const ExactNonlinearity& nl, double x) { return nl.eval(x); }

// Smooth nondegenerate regularization Phi_eps of Phi:
//   x - L                        for x >= L
//   psi(x - L)                   for L - eps <= x < L   (cubic bridge)
//   eps*(x - (L-eps)) + psi(-eps) for x < L - eps
// with psi(0) = 0, psi'(0) = 1, psi(-eps) = -eps(1+eps)/2, psi'(-eps) = eps.
// C^1 everywhere, strictly increasing, agrees with Phi above L.
class RegularizedNonlinearity {
  public:
    RegularizedNonlinearity(double L, double eps) : L_(L), eps_(eps) {
        if (!(eps > 0.0 && eps < std::min(1.0, L)))
            throw std::invalid_argument("eps must satisfy 0 < eps < min(1, L)");
        // Hermite cubic in u = (x - L) + eps on [0, eps]:
        //   psi = A + B u + C u^2 + D u^3
        const double pa = -eps * (1.0 + eps) / 2.0;  // value at the lower joint
        const double pb = 0.0;
        const double ma = eps;
        const double mb = 1.0;
        const double h = eps;
        const double r1 = pb - pa - ma * h;
        const double r2 = mb - ma;
        A_ = pa;
        B_ = ma;
        C_ = (3.0 * r1 - r2 * h) / (h * h);
        D_ = (r2 * h - 2.0 * r1) / (h * h * h);
    }

    double eval(double x) const {
        const double y = x - L_;
        if (y >= 0.0) return y;
        if (y >= -eps_) {
            const double u = y + eps_;
            return A_ + u * (B_ + u * (C_ + u * D_));
        }
        return eps_ * (y + eps_) + A_;
    }

    double derivative(double x) const {
        const double y = x - L_;
        if (y >= 0.0) return 1.0;
        if (y >= -eps_) {
            const double u = y + eps_;
            return B_ + u * (2.0 * C_ + u * 3.0 * D_);
        }
        return eps_;
    }

    double lipschitz() const { return 1.0; }
    double latent_heat() const { return L_; }
    double eps() const { return eps_; }

  private:
    double L_, eps_;
    double A_, B_, C_, D_;  // bridge cubic coefficients
};

inline double phi_eps_eval(const RegularizedNonlinearity& nl, double x) { return nl.eval(x); }
inline double phi_eps_derivative(const RegularizedNonlinearity& nl, double x) {
    return nl.derivative(x);
}

}  // namespace fsp

#endif
