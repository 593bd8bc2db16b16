#ifndef FXYZ_BETHE_HPP
#define FXYZ_BETHE_HPP

// Bethe equations in logarithmic form, a damped Newton solver, closed-form
// transfer-matrix eigenvalues, and matching against exact spectra.

#include <optional>
#include <vector>

#include "fxyz/chain.hpp"

namespace fxyz::bethe {

using chain::ChainParams;
using elliptic::cplx;

struct BetheState {
    int nu = 0;
    std::vector<cplx> roots;   // w_1..w_M
    std::vector<int> branch;   // logarithm winding integers
    double residual_norm = -1.0;
    ChainParams params;
    bool solved = false;
    int iterations = 0;
};

// F_j = N [log th(w_j+2l eta) - log th(w_j-2l eta)] + 4 pi i nu eta
//       - sum_{k != j} [log th(w_j-w_k+2 eta) - log th(w_j-w_k-2 eta)]
//       - 2 pi i branch_j
std::vector<cplx> bethe_residual(const BetheState& s);

// winding integers that put every Im F_j into (-pi, pi] at the current roots
std::vector<int> nearest_branch(const BetheState& s);

struct SolveOptions {
    double tol = 1e-12;
    int max_iter = 50;
    double trust_radius = 0.08; // cap on a single Newton step per root
    double string_nudge = 0.02; // stretch applied to exact-string seeds
};

// Damped Newton with the windings re-snapped each iteration (frozen windings
// lose string states whose pair terms sit on a branch cut; see tests).
// Exact-string seeds are stretched by `string_nudge` before iterating.
BetheState solve(const BetheState& initial, const SolveOptions& opt = {});

// Q(u) = e^{-pi i nu u} prod th(u - w_j + eta);
// h(u) = (th(u+(1-2l)eta)/th(u+(1+2l)eta))^N
cplx q_function(cplx u, const BetheState& s);
cplx h_function(cplx u, const BetheState& s);

// t^{1/2,l}(u) = Q(u-2eta)/Q(u) + h(u) Q(u+2eta)/Q(u)
cplx eigenvalue_half(cplx u, const BetheState& s);

// t^{l',l}(u) by the fused closed form (reduces to eigenvalue_half at l'=1/2)
cplx eigenvalue_fused(cplx u, double lprime, const BetheState& s);

struct MatchReport {
    cplx formula_value;
    cplx nearest_exact;
    std::size_t index = 0;
    double distance = 0.0;
    bool success = false;
};

// distance of the formula value to the exact spectrum of transfer(u, l');
// success when below 1e-6 * max(1, |formula|)
MatchReport match_spectrum(const BetheState& s, cplx u, double lprime, const ChainParams& cp);

// |t(u0+eps) - t(u0-eps)| * eps / 2 at the apparent pole u0 = w_j - eta;
// vanishes (like eps^2) iff the Bethe equations hold
double residue_estimate(const BetheState& s, std::size_t j, double eps = 1e-5);

// Curated seed states known to converge to genuine transfer-matrix eigenstates
// at desk scale; used by the verification suites and the CLI.
std::vector<BetheState> seed_library(const ChainParams& cp);

} // namespace fxyz::bethe

#endif
