#ifndef FSP_PARAMS_HPP
#define FSP_PARAMS_HPP

#include <stdexcept>
#include <string>

namespace fsp {

// Problem data for the one-phase fractional Stefan problem
//   dh/dt + (-Lap)^s Phi(h) = 0,  Phi(h) = (h - L)_+,
// with step initial data h0 = L + P1 on x <= 0 and h0 = 0 on x > 0.
// The ratio P1/L is the only essential parameter besides s.
struct StefanParams {
    double s;   // fractional order, practical solver range [0.05, 0.95]
    double L;   // latent heat (> 0)
    double P1;  // left excess enthalpy (> 0)

    double h_left() const { return L + P1; }
    double ratio() const { return P1 / L; }
};

inline StefanParams validate_params(const StefanParams& p) {
    if (!(p.s >= 0.05 && p.s <= 0.95))
        throw std::invalid_argument("s out of range: " + std::to_string(p.s) +
                                    " (need 0.05 <= s <= 0.95)");
    if (!(p.L > 0.0))
        throw std::invalid_argument("L must be positive");
    if (!(p.P1 > 0.0))
        throw std::invalid_argument("P1 must be positive");
    return p;
}

}  // namespace fsp

#endif
