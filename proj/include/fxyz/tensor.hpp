#ifndef FXYZ_TENSOR_HPP
#define FXYZ_TENSOR_HPP

// Dense complex multilinear algebra: tensor products, factor permutations,
// symmetrizers, symmetric-subspace embeddings, a Schur-based eigensolver and
// the principal matrix logarithm. No external linear-algebra dependency.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "fxyz/errors.hpp"

namespace fxyz::tensor {

using cplx = std::complex<double>;

// Dense complex multi-index array, row-major.  A matrix is the dims = {rows,
// cols} special case; operators on tensor-product spaces are stored as
// matrices and the factor structure is passed alongside where it matters.
class CTensor {
public:
    CTensor() = default;
    explicit CTensor(std::vector<std::size_t> dims);
    static CTensor matrix(std::size_t rows, std::size_t cols);
    static CTensor identity(std::size_t n);
    static CTensor zeros_like(const CTensor& other);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }
    std::size_t rows() const { return dims_.at(0); }
    std::size_t cols() const { return dims_.at(1); }
    bool is_square() const { return dims_.size() == 2 && dims_[0] == dims_[1]; }

    cplx& operator()(std::size_t i) { return data_[i]; }
    cplx operator()(std::size_t i) const { return data_[i]; }
    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dims_[1] + c]; }
    cplx operator()(std::size_t r, std::size_t c) const { return data_[r * dims_[1] + c]; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    // reshape never reorders data
    CTensor reshaped(std::vector<std::size_t> dims) const;

    CTensor& operator+=(const CTensor& o);
    CTensor& operator-=(const CTensor& o);
    CTensor& operator*=(cplx s);

private:
    std::vector<std::size_t> dims_;
    std::vector<cplx> data_;
};

CTensor operator+(CTensor a, const CTensor& b);
CTensor operator-(CTensor a, const CTensor& b);
CTensor operator*(cplx s, CTensor a);

CTensor matmul(const CTensor& a, const CTensor& b);
CTensor adjoint(const CTensor& m);
CTensor transpose(const CTensor& m);
CTensor kron(const CTensor& a, const CTensor& b);
cplx trace(const CTensor& m);
double frobenius_norm(const CTensor& m);
double max_abs(const CTensor& m);

// Solve A X = B (A square) by Gaussian elimination with partial pivoting.
CTensor solve(const CTensor& a, const CTensor& b);
CTensor inverse(const CTensor& a);

// ||A||_inf * ||A^{-1}||_inf
double condition_inf(const CTensor& a);

// Permutation matrix of SWAP: V (x) W -> W (x) V with dim V = d1, dim W = d2.
CTensor swap_matrix(std::size_t d1, std::size_t d2);

// Operator `op` (square, acting on the listed factors in the given order)
// embedded as identity elsewhere into the product of `factor_dims`.
CTensor embed_operator(const CTensor& op, const std::vector<std::size_t>& factors,
                       const std::vector<std::size_t>& factor_dims);

// Apply `op` on the named factors of a state tensor (dims = factor dims).
CTensor apply_on_factors(const CTensor& op, const std::vector<std::size_t>& factors,
                         const CTensor& state);

// Orthogonal projector onto the symmetric subspace of (C^2)^(x)m,
// equal to (1/m!) sum_{sigma} P_sigma.  Guarded at m <= 8.
CTensor symmetrizer(std::size_t m);

// (Id - SWAP)/2 on C^2 (x) C^2.
CTensor antisymmetrizer2();

// V^l inside (C^2)^(x)2l.  Columns of embed: normalized symmetrized elementary
// tensors ordered by ascending "+"-count; compress is the conjugate transpose.
struct SpinSpace {
    explicit SpinSpace(double l);
    double l;
    std::size_t dim;          // 2l+1
    std::size_t ambient_dim;  // 2^(2l)
    CTensor embed;            // ambient_dim x dim, isometry
    CTensor compress() const { return adjoint(embed); }
};

// Eigenvalues of a general complex square matrix via Hessenberg reduction and
// shifted QR. Iteration cap 100*dim.
std::vector<cplx> eigenvalues(const CTensor& m);

struct EigenSystem {
    std::vector<cplx> values;
    CTensor vectors; // columns
};

// Full eigen-decomposition through the Schur form (triangular back-substitution
// for the vectors).
EigenSystem eigensystem(const CTensor& m);

struct LogResult {
    CTensor log;
    bool boundary_phase = false; // an eigenvalue sat on the negative real axis
};

// Principal matrix logarithm: eigenvalue phases in (-pi, pi], the phase of a
// negative real eigenvalue resolved to +pi and flagged.  Refuses defective
// input (eigenvector condition number > 1e10).
LogResult principal_log(const CTensor& m);

} // namespace fxyz::tensor

#endif
