#ifndef FSP_FRACLAP_HPP
#define FSP_FRACLAP_HPP

#include <complex>
#include <vector>

#include "fsp/grid.hpp"

namespace fsp {

// Discrete (-Delta)^s on a uniform grid, kernel |z|^{-1-2s} without
// normalizing constant.  Symmetrized form: integral over z>0 of
// (2u(x)-u(x+z)-u(x-z)) z^{-1-2s} dz against the piecewise-linear
// interpolant, except the cell |z|<dx which uses the local parabolic
// model (2u_i-u_{i+1}-u_{i-1})(z/dx)^2 so the integral stays finite
// for s >= 1/2.
struct OperatorWeights {
    double s = 0.0;
    double dx = 0.0;
    int n = 0;                 // band length == grid size
    double w0 = 0.0;           // singular cell coefficient, dx^{-2s}/(2-2s)
    std::vector<double> band;  // band[m] for offsets m = 1..n; band[0] unused
    double tail = 0.0;         // exact remainder coefficient beyond offset n
    double diag = 0.0;         // w0 + sum(band) + tail
    mutable std::vector<std::complex<double>> khat;  // cached kernel spectrum
};

OperatorWeights build_weights(double s, double dx, int n);

// apply dispatches to the FFT path for large n, dense otherwise.
std::vector<double> apply(const OperatorWeights& w, const Field& f);
std::vector<double> apply_direct(const OperatorWeights& w, const Field& f);
std::vector<double> apply_fft(const OperatorWeights& w, const Field& f);

// Adaptive-quadrature evaluation of the same integral against the
// extended interpolant of f, panels split at every kink distance.
// Shares only the parabolic singular-cell model when x sits on a node.
double oracle_quadrature_point(const Field& f, double s, double x,
                               double abs_tol = 1e-9);

// A(s) = 2 * integral_0^inf (1-cos w) w^{-1-2s} dw, so that
// (-Delta)^s e^{ikx} = A(s)|k|^{2s} e^{ikx}.  A(1/2) = pi.
double symbol_constant(double s);

}  // namespace fsp

#endif
