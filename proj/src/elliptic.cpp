#include "fxyz/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace fxyz::elliptic {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kNCap = 64; // hard cap on the truncation index
} // namespace

EllipticParams::EllipticParams(double t_, int num, int den, double tol)
    : t(t_), eta_num(num), eta_den(den), tail_tol(tol) {
    if (t <= 0.0)
        throw parameter_error("EllipticParams: t must be positive");
    if (den <= 0 || den % 2 != 0)
        throw parameter_error("EllipticParams: eta denominator r must be positive and even");
    if (num % 2 == 0)
        throw parameter_error("EllipticParams: eta numerator r' must be odd");
    if (std::gcd(num, den) != 1)
        throw parameter_error("EllipticParams: eta = r'/r must be in lowest terms");
    if (num <= 0 || num >= den)
        throw parameter_error("EllipticParams: require 0 < eta < 1");
    if (tail_tol <= 0.0)
        throw parameter_error("EllipticParams: tail_tol must be positive");
}

ThetaChar pauli_char(int a) {
    switch (a) {
    case 0: return {1, 1};
    case 1: return {1, 0};
    case 2: return {0, 0};
    case 3: return {0, 1};
    default: throw parameter_error("pauli_char: index must be 0..3");
    }
}

namespace {

// log-magnitude of the series term at index n
double term_log_mag(int n, double alpha, double im_tau, double im_z) {
    const double m = n + alpha;
    return -kPi * im_tau * m * m - 2.0 * kPi * m * im_z;
}

// Smallest symmetric window |n| <= N whose two geometric tail bounds are < tol.
int truncation_index(double alpha, double im_tau, double im_z, double tol) {
    for (int N = 2; N <= kNCap; ++N) {
        bool ok = true;
        for (int dir : {+1, -1}) {
            const int n1 = dir > 0 ? N + 1 : -(N + 1);
            const int n2 = dir > 0 ? N + 2 : -(N + 2);
            const double l1 = term_log_mag(n1, alpha, im_tau, im_z);
            const double ratio = std::exp(term_log_mag(n2, alpha, im_tau, im_z) - l1);
            if (ratio >= 1.0 || std::exp(l1) / (1.0 - ratio) >= tol) {
                ok = false;
                break;
            }
        }
        if (ok)
            return N;
    }
    throw numeric_error("theta: truncation index exceeds the configured cap (tol too small "
                        "or Im tau too small)");
}

cplx series(ThetaChar c, cplx z, cplx tau, double tol, bool deriv) {
    if (!(tau.imag() > 0.0))
        throw parameter_error("theta: Im tau must be positive");
    if (!(tol > 0.0))
        throw parameter_error("theta: tol must be positive");
    const double alpha = 0.5 * c.a;
    const int N = truncation_index(alpha, tau.imag(), z.imag(), tol);
    const cplx ipi(0.0, kPi);
    cplx s = 0.0;
    // sum small-magnitude ends first
    for (int n = -N; n <= N; ++n) {
        const double m = n + alpha;
        cplx term = std::exp(ipi * (m * m) * tau + 2.0 * ipi * m * (z + 0.5 * c.b));
        if (deriv)
            term *= cplx(0.0, 2.0 * kPi * m);
        s += term;
    }
    return s;
}

} // namespace

cplx theta(ThetaChar c, cplx z, cplx tau, double tol) { return series(c, z, tau, tol, false); }

cplx theta_deriv(ThetaChar c, cplx z, cplx tau, double tol) { return series(c, z, tau, tol, true); }

cplx theta11(cplx z, const EllipticParams& p) { return theta({1, 1}, z, p.tau(), p.tail_tol); }

cplx theta11_deriv(cplx z, const EllipticParams& p) {
    return theta_deriv({1, 1}, z, p.tau(), p.tail_tol);
}

double lattice_distance(cplx z, const EllipticParams& p) {
    const double im_tau = 1.0 / p.t;
    const double dx = z.real() - std::round(z.real());
    const double dy = z.imag() - std::round(z.imag() / im_tau) * im_tau;
    return std::hypot(dx, dy);
}

namespace {
cplx require_nonzero(cplx v, const char* what) {
    if (std::abs(v) < 1e-13)
        throw singular_error(std::string("vanishing theta factor: ") + what);
    return v;
}
} // namespace

cplx weight_w(int a, cplx u, const EllipticParams& p) {
    const ThetaChar g = pauli_char(a);
    const cplx tau = p.tau();
    const double eta = p.eta();
    const cplx num = theta(g, u + eta, tau, p.tail_tol) * theta({1, 1}, 2.0 * eta, tau, p.tail_tol);
    const cplx d1 = require_nonzero(theta(g, eta, tau, p.tail_tol), "theta_{g_a}(eta)");
    const cplx d2 = require_nonzero(theta({1, 1}, u + 2.0 * eta, tau, p.tail_tol),
                                    "theta_11(u + 2 eta)");
    return num / (2.0 * d1 * d2);
}

cplx weight_wl(int a, cplx u, const EllipticParams& p) {
    const ThetaChar g = pauli_char(a);
    const cplx tau = p.tau();
    const double eta = p.eta();
    const cplx d1 = require_nonzero(theta({1, 1}, 2.0 * eta, tau, p.tail_tol), "theta_11(2 eta)");
    const cplx d2 = require_nonzero(theta(g, eta, tau, p.tail_tol), "theta_{g_a}(eta)");
    return theta(g, u, tau, p.tail_tol) / (2.0 * d1 * d2);
}

} // namespace fxyz::elliptic
