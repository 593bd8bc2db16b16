#ifndef FXYZ_SKLYANIN_HPP
#define FXYZ_SKLYANIN_HPP

// The theta-function representation space of the Sklyanin algebra, its
// identification with symmetric tensors, the L operator, and extraction of
// the four generators.

#include <array>
#include <vector>

#include "fxyz/elliptic.hpp"
#include "fxyz/tensor.hpp"

namespace fxyz::sklyanin {

using elliptic::EllipticParams;
using elliptic::cplx;
using tensor::CTensor;

// f_-(y) = theta_00(2y;2tau) - theta_10(2y;2tau),
// f_+(y) = theta_00(2y;2tau) + theta_10(2y;2tau).
cplx f_minus(cplx y, const EllipticParams& p);
cplx f_plus(cplx y, const EllipticParams& p);

// Basis f_-^{2l-k} f_+^k (k = 0..2l) of the weight-2l space, with a seeded
// generic sample grid and its evaluation matrix.
struct ThetaBasis {
    ThetaBasis(double l, const EllipticParams& p);

    double l;
    std::size_t dim; // 2l+1
    EllipticParams params;
    std::vector<cplx> grid;    // sample points y_i
    CTensor eval_matrix;       // E(i,k) = basis_k(y_i)
    std::uint32_t grid_seed;   // seed that produced an acceptably conditioned grid

    cplx basis_function(std::size_t k, cplx y) const;
    // coordinates of a function given its values on the grid
    CTensor coordinates(const std::vector<cplx>& values) const;
};

// Matrix of the map from SpinSpace symmetric-tensor coordinates to ThetaBasis
// coordinates; identity at l = 1/2.
CTensor iso_sym_to_theta(double l, const EllipticParams& p);

// rho^(l)(L(u)) on C^2 (x) V^l in ThetaBasis coordinates on the quantum slot:
// (theta_11(u + 2l eta)/theta_11(2 eta)) * conjugated R^{1/2,l}(u - eta).
CTensor l_operator(cplx u, double l, const EllipticParams& p);

struct SklyaninGenerators {
    double l;
    std::array<CTensor, 4> s;  // S^0..S^3, (2l+1) square
    double deviation = 0.0;    // max entry difference between the two extractions
};

// S^a = tr_aux((sigma^a (x) Id) rho(L(u))) / (2 W^L_a(u)), extracted at two
// generic points and averaged; the two extractions must agree to 1e-9.
SklyaninGenerators extract_generators(double l, const EllipticParams& p);

} // namespace fxyz::sklyanin

#endif
