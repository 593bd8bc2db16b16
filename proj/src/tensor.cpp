#include "fxyz/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fxyz::tensor {

namespace {
std::size_t product(const std::vector<std::size_t>& dims) {
    std::size_t p = 1;
    for (auto d : dims)
        p *= d;
    return p;
}
} // namespace

CTensor::CTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    data_.assign(product(dims_), cplx(0.0));
}

CTensor CTensor::matrix(std::size_t rows, std::size_t cols) { return CTensor({rows, cols}); }

CTensor CTensor::identity(std::size_t n) {
    CTensor m({n, n});
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CTensor CTensor::zeros_like(const CTensor& other) { return CTensor(other.dims_); }

CTensor CTensor::reshaped(std::vector<std::size_t> dims) const {
    if (product(dims) != data_.size())
        throw parameter_error("reshape: element count mismatch");
    CTensor out;
    out.dims_ = std::move(dims);
    out.data_ = data_;
    return out;
}

CTensor& CTensor::operator+=(const CTensor& o) {
    if (o.size() != size())
        throw parameter_error("tensor add: size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

CTensor& CTensor::operator-=(const CTensor& o) {
    if (o.size() != size())
        throw parameter_error("tensor sub: size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

CTensor& CTensor::operator*=(cplx s) {
    for (auto& v : data_)
        v *= s;
    return *this;
}

CTensor operator+(CTensor a, const CTensor& b) { return a += b; }
CTensor operator-(CTensor a, const CTensor& b) { return a -= b; }
CTensor operator*(cplx s, CTensor a) { return a *= s; }

CTensor matmul(const CTensor& a, const CTensor& b) {
    if (a.cols() != b.rows())
        throw parameter_error("matmul: inner dimension mismatch");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    CTensor c = CTensor::matrix(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = a(i, p);
            if (aip == cplx(0.0))
                continue;
            for (std::size_t j = 0; j < m; ++j)
                c(i, j) += aip * b(p, j);
        }
    return c;
}

CTensor adjoint(const CTensor& m) {
    CTensor out = CTensor::matrix(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(j, i) = std::conj(m(i, j));
    return out;
}

CTensor transpose(const CTensor& m) {
    CTensor out = CTensor::matrix(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(j, i) = m(i, j);
    return out;
}

CTensor kron(const CTensor& a, const CTensor& b) {
    CTensor out = CTensor::matrix(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0))
                continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

cplx trace(const CTensor& m) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        s += m(i, i);
    return s;
}

double frobenius_norm(const CTensor& m) {
    double s = 0.0;
    for (const auto& v : m.data())
        s += std::norm(v);
    return std::sqrt(s);
}

double max_abs(const CTensor& m) {
    double s = 0.0;
    for (const auto& v : m.data())
        s = std::max(s, std::abs(v));
    return s;
}

CTensor solve(const CTensor& a, const CTensor& b) {
    if (!a.is_square() || a.rows() != b.rows())
        throw parameter_error("solve: shape mismatch");
    const std::size_t n = a.rows(), m = b.cols();
    CTensor lu = a, x = b;
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                p = i;
            }
        if (best == 0.0)
            throw numeric_error("solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(lu(k, j), lu(p, j));
            for (std::size_t j = 0; j < m; ++j)
                std::swap(x(k, j), x(p, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j)
                lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < m; ++j)
                x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            cplx s = x(kk, j);
            for (std::size_t i = kk + 1; i < n; ++i)
                s -= lu(kk, i) * x(i, j);
            x(kk, j) = s / lu(kk, kk);
        }
    }
    return x;
}

CTensor inverse(const CTensor& a) { return solve(a, CTensor::identity(a.rows())); }

double condition_inf(const CTensor& a) {
    auto inf_norm = [](const CTensor& m) {
        double best = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m.cols(); ++j)
                s += std::abs(m(i, j));
            best = std::max(best, s);
        }
        return best;
    };
    return inf_norm(a) * inf_norm(inverse(a));
}

CTensor swap_matrix(std::size_t d1, std::size_t d2) {
    CTensor s = CTensor::matrix(d1 * d2, d1 * d2);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            s(j * d1 + i, i * d2 + j) = 1.0;
    return s;
}

CTensor embed_operator(const CTensor& op, const std::vector<std::size_t>& factors,
                       const std::vector<std::size_t>& factor_dims) {
    const std::size_t nf = factor_dims.size();
    std::vector<std::size_t> opdims;
    std::size_t opd = 1;
    for (auto f : factors) {
        if (f >= nf)
            throw parameter_error("embed_operator: factor index out of range");
        opdims.push_back(factor_dims[f]);
        opd *= factor_dims[f];
    }
    if (!op.is_square() || op.rows() != opd)
        throw parameter_error("embed_operator: operator dimension does not match targeted factors");

    const std::size_t D = product(factor_dims);
    // strides of each factor in the full row-major index
    std::vector<std::size_t> stride(nf, 1);
    for (std::size_t f = nf - 1; f-- > 0;)
        stride[f] = stride[f + 1] * factor_dims[f + 1];

    std::vector<bool> targeted(nf, false);
    for (auto f : factors)
        targeted[f] = true;
    std::vector<std::size_t> rest;
    for (std::size_t f = 0; f < nf; ++f)
        if (!targeted[f])
            rest.push_back(f);

    // enumerate rest-multi-indices and op row/col multi-indices by index arithmetic
    std::size_t rest_count = 1;
    for (auto f : rest)
        rest_count *= factor_dims[f];

    CTensor out = CTensor::matrix(D, D);
    std::vector<std::size_t> op_stride(factors.size(), 1);
    for (std::size_t q = factors.size(); q-- > 1;)
        op_stride[q - 1] = op_stride[q] * opdims[q];

    for (std::size_t r = 0; r < rest_count; ++r) {
        // base offset contributed by untouched factors
        std::size_t base = 0, rr = r;
        for (std::size_t q = rest.size(); q-- > 0;) {
            const std::size_t f = rest[q];
            base += (rr % factor_dims[f]) * stride[f];
            rr /= factor_dims[f];
        }
        for (std::size_t oi = 0; oi < opd; ++oi) {
            std::size_t row = base, tmp = oi;
            for (std::size_t q = 0; q < factors.size(); ++q) {
                row += (tmp / op_stride[q]) * stride[factors[q]];
                tmp %= op_stride[q];
            }
            for (std::size_t oj = 0; oj < opd; ++oj) {
                const cplx v = op(oi, oj);
                if (v == cplx(0.0))
                    continue;
                std::size_t col = base;
                tmp = oj;
                for (std::size_t q = 0; q < factors.size(); ++q) {
                    col += (tmp / op_stride[q]) * stride[factors[q]];
                    tmp %= op_stride[q];
                }
                out(row, col) = v;
            }
        }
    }
    return out;
}

CTensor apply_on_factors(const CTensor& op, const std::vector<std::size_t>& factors,
                         const CTensor& state) {
    const auto& fd = state.dims();
    CTensor big = embed_operator(op, factors, fd);
    CTensor flat = state.reshaped({state.size(), 1});
    return matmul(big, flat).reshaped(fd);
}

CTensor symmetrizer(std::size_t m) {
    if (m < 1 || m > 8)
        throw parameter_error("symmetrizer: m must be in 1..8");
    const std::size_t D = std::size_t{1} << m;
    // columns of the symmetric-basis isometry: amplitude 1/sqrt(C(m,k)) on the
    // C(m,k) bitstrings of weight k
    CTensor p = CTensor::matrix(D, D);
    std::vector<double> binom(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        double b = 1.0;
        for (std::size_t i = 0; i < k; ++i)
            b = b * static_cast<double>(m - i) / static_cast<double>(i + 1);
        binom[k] = b;
    }
    for (std::size_t i = 0; i < D; ++i) {
        const std::size_t ki = static_cast<std::size_t>(std::popcount(i));
        for (std::size_t j = 0; j < D; ++j) {
            if (static_cast<std::size_t>(std::popcount(j)) == ki)
                p(i, j) = 1.0 / binom[ki];
        }
    }
    return p;
}

CTensor antisymmetrizer2() {
    CTensor p = CTensor::identity(4);
    p -= swap_matrix(2, 2);
    p *= 0.5;
    return p;
}

SpinSpace::SpinSpace(double l_) : l(l_) {
    const double twol = 2.0 * l;
    const auto m = static_cast<std::size_t>(std::llround(twol));
    if (std::abs(twol - static_cast<double>(m)) > 1e-12 || m < 1 || m > 8)
        throw parameter_error("SpinSpace: l must be a half-integer with 1 <= 2l <= 8");
    dim = m + 1;
    ambient_dim = std::size_t{1} << m;
    embed = CTensor::matrix(ambient_dim, dim);
    for (std::size_t i = 0; i < ambient_dim; ++i) {
        const auto k = static_cast<std::size_t>(std::popcount(i));
        double b = 1.0;
        for (std::size_t q = 0; q < k; ++q)
            b = b * static_cast<double>(m - q) / static_cast<double>(q + 1);
        embed(i, k) = 1.0 / std::sqrt(b);
    }
}

// ---------------------------------------------------------------------------
// Schur form by Hessenberg reduction + shifted QR with Givens rotations.

namespace {

struct Givens {
    cplx c;
    cplx s;
};

// rotation with G * [a, b]^T = [r, 0]^T
Givens make_givens(cplx a, cplx b) {
    const double nb = std::abs(b);
    if (nb == 0.0)
        return {1.0, 0.0};
    const double na = std::abs(a);
    const double r = std::hypot(na, nb);
    if (na == 0.0)
        return {0.0, std::conj(b) / nb};
    const cplx ua = a / na;
    return {na / r, ua * std::conj(b) / r};
}

void hessenberg(CTensor& h, CTensor& q) {
    const std::size_t n = h.rows();
    q = CTensor::identity(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        for (std::size_t i = n - 1; i > k + 1; --i) {
            if (std::abs(h(i, k)) == 0.0)
                continue;
            Givens g = make_givens(h(i - 1, k), h(i, k));
            for (std::size_t j = 0; j < n; ++j) {
                const cplx x = h(i - 1, j), y = h(i, j);
                h(i - 1, j) = g.c * x + g.s * y;
                h(i, j) = -std::conj(g.s) * x + g.c * y;
            }
            for (std::size_t j = 0; j < n; ++j) {
                const cplx x = h(j, i - 1), y = h(j, i);
                h(j, i - 1) = x * std::conj(g.c) + y * std::conj(g.s);
                h(j, i) = -x * g.s + y * std::conj(g.c);
            }
            for (std::size_t j = 0; j < n; ++j) {
                const cplx x = q(j, i - 1), y = q(j, i);
                q(j, i - 1) = x * std::conj(g.c) + y * std::conj(g.s);
                q(j, i) = -x * g.s + y * std::conj(g.c);
            }
            h(i, k) = 0.0;
        }
    }
    // note: c is real-valued by construction of make_givens, conj(c) == c
}

cplx wilkinson_shift(const CTensor& h, std::size_t m) {
    // eigenvalue of the trailing 2x2 closest to h(m,m)
    const cplx a = h(m - 1, m - 1), b = h(m - 1, m), c = h(m, m - 1), d = h(m, m);
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// QR iteration on the Hessenberg matrix; accumulates the unitary into q.
void schur_qr(CTensor& h, CTensor& q) {
    const std::size_t n = h.rows();
    if (n <= 1)
        return;
    const double eps = 1e-15;
    std::size_t hi = n - 1;
    std::size_t iters = 0;
    const std::size_t cap = 100 * n;
    std::size_t stuck = 0;
    while (true) {
        // deflate
        while (hi > 0) {
            const double sub = std::abs(h(hi, hi - 1));
            if (sub <= eps * (std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi)))) {
                h(hi, hi - 1) = 0.0;
                --hi;
                stuck = 0;
            } else {
                break;
            }
        }
        if (hi == 0)
            return;
        // active block [lo, hi]
        std::size_t lo = hi;
        while (lo > 0 &&
               std::abs(h(lo, lo - 1)) >
                   eps * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo))))
            --lo;
        if (++iters > cap)
            throw numeric_error("eigenvalues: QR iteration cap exceeded");
        cplx mu = wilkinson_shift(h, hi);
        if (++stuck % 30 == 0) // exceptional shift against rare stagnation
            mu = h(hi, hi - 1) * cplx(1.5, 0.5);
        // implicit shifted QR sweep on [lo, hi] via Givens chasing
        std::vector<Givens> gs(hi - lo);
        cplx x = h(lo, lo) - mu;
        cplx y = h(lo + 1, lo);
        for (std::size_t k = lo; k < hi; ++k) {
            Givens g = make_givens(x, y);
            gs[k - lo] = g;
            // apply to rows k, k+1
            for (std::size_t j = (k == lo ? lo : k - 1); j < n; ++j) {
                const cplx u = h(k, j), v = h(k + 1, j);
                h(k, j) = g.c * u + g.s * v;
                h(k + 1, j) = -std::conj(g.s) * u + g.c * v;
            }
            if (k + 2 <= hi) {
                x = h(k + 1, k);
                y = h(k + 2, k);
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const Givens& g = gs[k - lo];
            const std::size_t jmax = std::min(hi, k + 2);
            for (std::size_t i = 0; i <= jmax; ++i) {
                const cplx u = h(i, k), v = h(i, k + 1);
                h(i, k) = u * g.c + v * std::conj(g.s);
                h(i, k + 1) = -u * g.s + v * g.c;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const cplx u = q(i, k), v = q(i, k + 1);
                q(i, k) = u * g.c + v * std::conj(g.s);
                q(i, k + 1) = -u * g.s + v * g.c;
            }
        }
    }
}

void schur_decompose(const CTensor& m, CTensor& t, CTensor& q) {
    if (!m.is_square())
        throw parameter_error("eigenvalues: matrix must be square");
    if (m.rows() > 4096)
        throw parameter_error("eigenvalues: dimension exceeds the 4096 guard");
    t = m;
    hessenberg(t, q);
    schur_qr(t, q);
}

} // namespace

std::vector<cplx> eigenvalues(const CTensor& m) {
    CTensor t, q;
    schur_decompose(m, t, q);
    std::vector<cplx> ev(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        ev[i] = t(i, i);
    return ev;
}

EigenSystem eigensystem(const CTensor& m) {
    CTensor t, q;
    schur_decompose(m, t, q);
    const std::size_t n = m.rows();
    // eigenvectors of the triangular factor by back substitution
    CTensor x = CTensor::matrix(n, n);
    const double scale = std::max(max_abs(t), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        x(k, k) = 1.0;
        for (std::size_t i = k; i-- > 0;) {
            cplx s = 0.0;
            for (std::size_t j = i + 1; j <= k; ++j)
                s += t(i, j) * x(j, k);
            cplx diag = t(i, i) - t(k, k);
            if (std::abs(diag) < 1e-14 * scale)
                diag = cplx(1e-14 * scale, 0.0); // perturb exact degeneracy
            x(i, k) = -s / diag;
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i <= k; ++i)
            nrm += std::norm(x(i, k));
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i <= k; ++i)
            x(i, k) /= nrm;
    }
    EigenSystem out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = t(i, i);
    out.vectors = matmul(q, x);
    return out;
}

LogResult principal_log(const CTensor& m) {
    EigenSystem es = eigensystem(m);
    const std::size_t n = m.rows();
    double cond;
    CTensor vinv;
    try {
        vinv = inverse(es.vectors);
        cond = condition_inf(es.vectors);
    } catch (const numeric_error&) {
        throw numeric_error("principal_log: defective matrix (singular eigenvector basis)");
    }
    if (cond > 1e10)
        throw numeric_error("principal_log: defective matrix (eigenvector condition " +
                            std::to_string(cond) + ")");
    LogResult res;
    CTensor d = CTensor::matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx lam = es.values[i];
        if (std::abs(lam) == 0.0)
            throw numeric_error("principal_log: zero eigenvalue");
        double ph = std::arg(lam); // in (-pi, pi]
        if (std::abs(ph - (-M_PI)) < 1e-14) {
            ph = M_PI; // boundary convention
            res.boundary_phase = true;
        }
        if (ph > M_PI - 1e-12 && lam.real() < 0.0 && std::abs(lam.imag()) < 1e-12 * std::abs(lam))
            res.boundary_phase = true;
        d(i, i) = cplx(std::log(std::abs(lam)), ph);
    }
    res.log = matmul(matmul(es.vectors, d), vinv);
    return res;
}

} // namespace fxyz::tensor
