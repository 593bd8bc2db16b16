#ifndef FXYZ_THERMO_HPP
#define FXYZ_THERMO_HPP

// String configurations, solver seeds, the thermodynamic-limit series for the
// ground state, the excitation shift, and the two-particle dispersion.

#include <string>
#include <vector>

#include "fxyz/bethe.hpp"

namespace fxyz::thermo {

using bethe::BetheState;
using chain::ChainParams;
using elliptic::EllipticParams;
using elliptic::cplx;

enum class Parity { plus, minus };
enum class CenterVariant { half_sum, half_sum_shifted };
enum class ExcitedKind { one, two };

struct StringEntry {
    int length = 1;       // A
    Parity parity = Parity::plus;
    double center = 0.0;  // x, real; the it/2 offset of minus parity is applied
                          // at root conversion
};

struct StringConfig {
    std::vector<StringEntry> entries;
    std::vector<double> holes;
    CenterVariant variant = CenterVariant::half_sum;

    int total_roots() const;
};

// gate 2(2l+1) eta < 1 required by the string classification
bool string_gate_holds(const ChainParams& cp);

// N/2 strings of length 2l, parity +, centers equally spaced over the full
// period (-1/2,1/2), symmetric about 0.  The solver owns the final positions.
StringConfig ground_state_config(const ChainParams& cp);

// Excited state I: #(2l,+) = N/2-2 plus a (2l-1)- and a (2l+1)-string.
// Excited state II: #(2l,+) = N/2-1 plus a (2l-1)-string and a minus-parity
// 1-string.  Holes at x1, x2; auxiliary centers (x1+x2)/2 or (x1+x2+1)/2.
StringConfig excited_config(ExcitedKind kind, double x1, double x2, CenterVariant variant,
                            const ChainParams& cp);

// w-roots of a configuration: x_{j,alpha} = x_j + 2 i eta t alpha (+ it/2 for
// minus parity), alpha = (-A+1)/2 .. (A-1)/2, converted by w = x/(it).
std::vector<cplx> config_to_roots(const StringConfig& c, const EllipticParams& p);

// seeded Bethe state for a configuration (deviations zero; solve() nudges)
BetheState config_state(const StringConfig& c, int nu, const ChainParams& cp);

struct GsSeries {
    double value = 0.0; // N * (pi l + 2 pi l x (1-4l eta) + series)
    int terms = 0;
};

// (1/i) log of the largest eigenvalue of t^{l,l} for large N, at rescaled
// rapidity x = i t u
GsSeries gs_log_eigenvalue(double x, const ChainParams& cp);

// log tau(x) = -pi/2 - pi x - sum sin(2 pi n x)/(n ch(2 pi n eta t))
double log_tau(double x, const EllipticParams& p);

// log tau(x-x1) + log tau(x-x2)
double excitation_shift(double x, double x1, double x2, const EllipticParams& p);

// p_i(x) = -pi/2 + pi x + sum sin(2 pi n x)/(n ch(2 pi n eta t))
double particle_momentum(double x, const EllipticParams& p);

// H_i(x) = coupling * (-pi - 2 pi sum cos(2 pi n x)/ch(2 pi n eta t))
double particle_energy(double x, double coupling, const EllipticParams& p);

struct FiniteSizeEntry {
    int n_sites = 0;
    bool converged = false;
    double per_site = 0.0; // (1/(iN)) log eigenvalue, unwrapped from u=0
    double delta = 0.0;    // |per_site - series per-site|
    std::string message;
};

struct FiniteSizeReport {
    std::vector<FiniteSizeEntry> entries;
    double series_per_site = 0.0;
    bool non_increasing = false;
};

// Ground-state ladder over increasing even N at fixed l, t, eta: solves the
// Bethe system (seeds continued from the previous rung), evaluates the fused
// eigenvalue at u = x/(it) with a path-unwrapped logarithm anchored at
// N pi l, and compares per-site values against gs_log_eigenvalue.
FiniteSizeReport finite_size_check(const std::vector<ChainParams>& ladder, double x);

} // namespace fxyz::thermo

#endif
