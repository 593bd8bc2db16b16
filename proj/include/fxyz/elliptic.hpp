#ifndef FXYZ_ELLIPTIC_HPP
#define FXYZ_ELLIPTIC_HPP

// Jacobi theta functions with half-integer characteristics and the scalar
// weight functions of the eight-vertex R matrix and the Sklyanin L operator.

#include <complex>

#include "fxyz/errors.hpp"

namespace fxyz::elliptic {

using cplx = std::complex<double>;

// Modular and anisotropy data of the model: tau = i/t, eta = r'/r.
struct EllipticParams {
    double t = 2.0;     // tau = i/t, t > 0
    int eta_num = 1;    // r', odd
    int eta_den = 6;    // r, even
    double tail_tol = 1e-14;

    EllipticParams() = default;
    EllipticParams(double t_, int num, int den, double tol = 1e-14);

    double eta() const { return static_cast<double>(eta_num) / eta_den; }
    cplx tau() const { return cplx(0.0, 1.0 / t); }
};

// Characteristic pair (a b), a,b in {0,1}.
struct ThetaChar {
    int a = 0;
    int b = 0;
};

// g_0 = (11), g_1 = (10), g_2 = (00), g_3 = (01)
ThetaChar pauli_char(int a);

// theta_{ab}(z; tau) = sum_n exp(i pi (n + a/2)^2 tau + 2 pi i (n + a/2)(z + b/2)),
// truncated symmetrically with tail bound < tol.
cplx theta(ThetaChar c, cplx z, cplx tau, double tol = 1e-14);

// d/dz of the series above, same truncation contract.
cplx theta_deriv(ThetaChar c, cplx z, cplx tau, double tol = 1e-14);

// Shorthands for theta_11 at the model's tau.
cplx theta11(cplx z, const EllipticParams& p);
cplx theta11_deriv(cplx z, const EllipticParams& p);

// Distance from z to the zero lattice of theta_11, Z + tau Z (tau pure imaginary).
double lattice_distance(cplx z, const EllipticParams& p);

// W_a(u) = theta_{g_a}(u+eta) theta_11(2 eta) / (2 theta_{g_a}(eta) theta_11(u+2 eta)).
// The shifted numerator argument is what makes R(0) the permutation operator;
// see fusion tests for the property suite that pins this down.
cplx weight_w(int a, cplx u, const EllipticParams& p);

// W^L_a(u) = theta_{g_a}(u) / (2 theta_11(2 eta) theta_{g_a}(eta)).
cplx weight_wl(int a, cplx u, const EllipticParams& p);

} // namespace fxyz::elliptic

#endif
