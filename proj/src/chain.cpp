#include "fxyz/chain.hpp"

#include <cmath>

#include "fxyz/fusion.hpp"

namespace fxyz::chain {

using tensor::CTensor;
using tensor::kron;
using tensor::matmul;

std::size_t ChainParams::local_dim() const {
    const auto m = static_cast<std::size_t>(std::llround(2.0 * l));
    if (std::abs(2.0 * l - static_cast<double>(m)) > 1e-12 || m < 1)
        throw parameter_error("ChainParams: l must be a positive half-integer");
    return m + 1;
}

std::size_t ChainParams::state_dim() const {
    if (n_sites < 1)
        throw parameter_error("ChainParams: N must be positive");
    const std::size_t d = local_dim();
    std::size_t dim = 1;
    for (int i = 0; i < n_sites; ++i) {
        dim *= d;
        if (dim > 4096)
            throw parameter_error("ChainParams: state dimension exceeds the 4096 guard");
    }
    return dim;
}

int ChainParams::magnon_count() const {
    const double m = n_sites * l;
    const auto mi = static_cast<int>(std::llround(m));
    if (std::abs(m - mi) > 1e-12)
        throw parameter_error("ChainParams: M = N*l must be an integer");
    return mi;
}

CTensor transfer(cplx u, double lprime, const ChainParams& cp) {
    const std::size_t dim = cp.state_dim();
    (void)dim;
    const std::size_t dl = cp.local_dim();
    const auto mp = static_cast<std::size_t>(std::llround(2.0 * lprime));
    const std::size_t dlp = mp + 1;
    const CTensor r = fusion::fuse(u, lprime, cp.l, cp.p).op;

    // auxiliary blocks R[alpha,beta](s',s) = R((alpha,s'),(beta,s))
    std::vector<CTensor> blocks(dlp * dlp, CTensor::matrix(dl, dl));
    for (std::size_t a = 0; a < dlp; ++a)
        for (std::size_t b = 0; b < dlp; ++b) {
            CTensor& blk = blocks[a * dlp + b];
            for (std::size_t s1 = 0; s1 < dl; ++s1)
                for (std::size_t s2 = 0; s2 < dl; ++s2)
                    blk(s1, s2) = r(a * dl + s1, b * dl + s2);
        }

    // accumulate sites left to right in state order; the product order over
    // the chain is carried by the auxiliary contraction
    std::vector<CTensor> acc = blocks;
    for (int site = 2; site <= cp.n_sites; ++site) {
        std::vector<CTensor> next(dlp * dlp);
        for (std::size_t a = 0; a < dlp; ++a)
            for (std::size_t b = 0; b < dlp; ++b) {
                CTensor sum;
                bool first = true;
                for (std::size_t g = 0; g < dlp; ++g) {
                    CTensor term = kron(acc[g * dlp + b], blocks[a * dlp + g]);
                    if (first) {
                        sum = std::move(term);
                        first = false;
                    } else {
                        sum += term;
                    }
                }
                next[a * dlp + b] = std::move(sum);
            }
        acc = std::move(next);
    }
    CTensor t = acc[0];
    for (std::size_t a = 1; a < dlp; ++a)
        t += acc[a * dlp + a];
    return t;
}

CTensor momentum(const ChainParams& cp) {
    const CTensor t0 = transfer(0.0, cp.l, cp);
    const tensor::LogResult lr = tensor::principal_log(t0);
    return cplx(0.0, -1.0) * lr.log;
}

CTensor hamiltonian(const ChainParams& cp, double step) {
    if (step <= 0.0)
        throw parameter_error("hamiltonian: step must be positive");
    const CTensor t0 = transfer(0.0, cp.l, cp);
    auto tm = [&](double h) { return transfer(cplx(h, 0.0), cp.l, cp); };
    CTensor d1 = tm(step) - tm(-step);
    d1 *= cplx(1.0 / (2.0 * step), 0.0);
    CTensor d2 = tm(2.0 * step) - tm(-2.0 * step);
    d2 *= cplx(1.0 / (4.0 * step), 0.0);
    CTensor deriv = cplx(4.0 / 3.0, 0.0) * d1 - cplx(1.0 / 3.0, 0.0) * d2;
    CTensor h = matmul(deriv, tensor::inverse(t0));
    h *= cplx(cp.coupling, 0.0);
    return h;
}

std::vector<cplx> spectrum(cplx u, double lprime, const ChainParams& cp) {
    const CTensor t = transfer(u, lprime, cp);
    std::vector<cplx> ev = tensor::eigenvalues(t);
    cplx sum = 0.0;
    for (const auto& v : ev)
        sum += v;
    const cplx tr = tensor::trace(t);
    const double scale = std::max(1.0, tensor::frobenius_norm(t));
    if (std::abs(sum - tr) > 1e-8 * scale)
        throw numeric_error("spectrum: eigenvalue sum deviates from the trace");
    return ev;
}

double check_recurrence_t(cplx u, double lprime, const ChainParams& cp) {
    const auto mp2 = static_cast<int>(std::llround(2.0 * lprime));
    const double eta = cp.p.eta();
    const CTensor lhs = transfer(u, lprime + 0.5, cp);
    const CTensor t1 = transfer(u + eta, lprime, cp);
    const CTensor t2 = transfer(u - 2.0 * lprime * eta, 0.5, cp);
    const cplx ratio1 =
        elliptic::theta11(u + (-2.0 * lprime + 1.0 - 2.0 * cp.l) * eta, cp.p) /
        elliptic::theta11(u + (-2.0 * lprime + 1.0 + 2.0 * cp.l) * eta, cp.p);
    cplx ratio = 1.0;
    for (int i = 0; i < cp.n_sites; ++i)
        ratio *= ratio1; // per-site quantum determinant
    CTensor t3 = (mp2 == 1) ? CTensor::identity(t1.rows())
                            : transfer(u + 2.0 * eta, lprime - 0.5, cp);
    CTensor rhs = matmul(t1, t2) - ratio * t3;
    const double denom = std::max(1.0, tensor::max_abs(lhs));
    return tensor::max_abs(lhs - rhs) / denom;
}

CTensor cyclic_shift(const ChainParams& cp) {
    const std::size_t d = cp.local_dim();
    const std::size_t dim = cp.state_dim();
    CTensor s = CTensor::matrix(dim, dim);
    const int n = cp.n_sites;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        // row-major site indices (i_1 ... i_N); shift content j -> j+1
        std::size_t rem = idx;
        std::vector<std::size_t> mi(n);
        for (int f = n - 1; f >= 0; --f) {
            mi[f] = rem % d;
            rem /= d;
        }
        std::size_t out = 0;
        for (int f = 0; f < n; ++f)
            out = out * d + mi[(f - 1 + n) % n];
        s(out, idx) = 1.0;
    }
    return s;
}

} // namespace fxyz::chain
