#ifndef FXYZ_CHAIN_HPP
#define FXYZ_CHAIN_HPP

// The N-site higher-spin transfer matrix, momentum and Hamiltonian, exact
// spectra, and the transfer-matrix recurrence check.

#include <vector>

#include "fxyz/elliptic.hpp"
#include "fxyz/tensor.hpp"

namespace fxyz::chain {

using elliptic::EllipticParams;
using elliptic::cplx;
using tensor::CTensor;

struct ChainParams {
    double l = 0.5;   // local spin
    int n_sites = 2;  // N
    EllipticParams p;
    double coupling = 1.0;

    std::size_t local_dim() const;
    std::size_t state_dim() const; // (2l+1)^N, guarded at 4096
    // M = N*l must be an integer for Bethe-facing operations
    int magnon_count() const;
};

// T^{l',l}(u) = tr_{V^{l'}} R_{aux,N}(u) ... R_{aux,1}(u), built by contracting
// one auxiliary index pair at a time.
CTensor transfer(cplx u, double lprime, const ChainParams& cp);

// p = (1/i) log T^{l,l}(0); eigenvalue phases in (-pi, pi].
CTensor momentum(const ChainParams& cp);

// H = coupling * T'(0) T(0)^{-1}, derivative by central differences with one
// Richardson step.
CTensor hamiltonian(const ChainParams& cp, double step = 1e-5);

// Eigenvalues of transfer(u, l', cp); abs(sum - trace) checked to 1e-8 scale.
std::vector<cplx> spectrum(cplx u, double lprime, const ChainParams& cp);

// Residual of T^{l'+1/2,l}(u) = T^{l',l}(u+eta) T^{1/2,l}(u-2l'eta)
//            - h-ratio * T^{l'-1/2,l}(u+2eta),
// with T^{0,l} := Id.  The theta-ratio coefficient enters at the N-th power:
// it is the per-site quantum determinant, one factor per site.
double check_recurrence_t(cplx u, double lprime, const ChainParams& cp);

// One-site cyclic shift implemented by T^{l,l}(0): site j -> j+1 (the content
// of the last site wraps to the first slot); fixed by an N=3 experiment.
CTensor cyclic_shift(const ChainParams& cp);

} // namespace fxyz::chain

#endif
