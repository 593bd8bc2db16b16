#ifndef FXYZ_FUSION_HPP
#define FXYZ_FUSION_HPP

// Baxter's R matrix and its fusion to higher spins, the quantum determinant,
// and residual evaluators for the R-matrix identities.

#include <vector>

#include "fxyz/elliptic.hpp"
#include "fxyz/tensor.hpp"

namespace fxyz::fusion {

using elliptic::EllipticParams;
using elliptic::cplx;
using tensor::CTensor;

// R^{l,l'}(u) on V^l (x) V^{l'}; meromorphic in u.  Construction-path
// singularities (zeros of inner weight denominators) are removable and are
// handled by contour averaging; genuine poles of the unitary normalization
// are rejected when closer than 1e-10.
struct RMatrix {
    double l;
    double lprime;
    cplx u;
    CTensor op; // (2l+1)(2l'+1) square
    EllipticParams params;
};

// R(u) = sum_a W_a(u) sigma^a (x) sigma^a on C^2 (x) C^2.
RMatrix baxter_r(cplx u, const EllipticParams& p);

// R^{1/2,l'}(u): ordered product of 2l' Baxter factors at shifted arguments,
// symmetrized on the fused slot and compressed to V^{l'}.
RMatrix fuse_half(cplx u, double lprime, const EllipticParams& p);

// R^{l,l'}(u): ordered product of fuse_half factors, symmetrized and
// compressed on the first slot.  Guard: 2l, 2l' <= 6.
RMatrix fuse(cplx u, double l, double lprime, const EllipticParams& p);

struct QdetCheck {
    cplx trace_value;   // scalar extracted from the trace formula
    cplx closed_value;  // theta_11(u-2l'eta)/theta_11(u+2l'eta)
    double off_scalar;  // off-scalar residual of the traced matrix
};

// Both evaluations of the quantum determinant side by side.
QdetCheck qdet_check(cplx u, double lprime, const EllipticParams& p);

// Quantum determinant of R^{1/2,l'}: checks the trace formula
// tr_{01} P^-_{01} R^{1/2,l'}(u+eta) R^{1/2,l'}(u-eta) against the closed form
// theta_11(u-2l'eta)/theta_11(u+2l'eta) and returns the closed form.
cplx qdet(cplx u, double lprime, const EllipticParams& p);

// Residuals of the auxiliary-spin recurrence
//   R^{l,l'}(u+eta) R^{1/2,l'}(u-2l eta) =
//     [ R^{l+1/2,l'}(u)   0                                        ]
//     [ *                 qdet(u-(2l-1)eta) R^{l-1/2,l'}(u+2eta)  ]
// measured in the Young-projector block basis.
struct RecurrenceRResidual {
    double upper_left;  // block vs R^{l+1/2,l'}(u)
    double upper_right; // block vs 0
    double lower_right; // block vs qdet * R^{l-1/2,l'}(u+2eta)
};

RecurrenceRResidual check_recurrence_r(cplx u, double l, double lprime, const EllipticParams& p);

// Helpers shared with other modules
namespace detail {
// all Baxter arguments in the recursive expansion of R^{l,l'}(u)
std::vector<cplx> inner_arguments(cplx u, double l, double lprime, const EllipticParams& p);
// smallest lattice distance of v + 2 eta over inner arguments v
double min_inner_distance(cplx u, double l, double lprime, const EllipticParams& p);
// smallest lattice distance over the unitary-normalization pole arguments
double min_true_pole_distance(cplx u, double l, double lprime, const EllipticParams& p);
} // namespace detail

} // namespace fxyz::fusion

#endif
