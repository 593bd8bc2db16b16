#include "fxyz/sklyanin.hpp"

#include <cmath>

#include "fxyz/fusion.hpp"
#include "fxyz/rng.hpp"

namespace fxyz::sklyanin {

using tensor::adjoint;
using tensor::CTensor;
using tensor::kron;
using tensor::matmul;
using tensor::max_abs;

namespace {

std::size_t half_int_to_count(double l) {
    const double twol = 2.0 * l;
    const auto m = static_cast<std::size_t>(std::llround(twol));
    if (std::abs(twol - static_cast<double>(m)) > 1e-12 || m < 1)
        throw parameter_error("sklyanin: l must be a positive half-integer");
    return m;
}

CTensor pauli(int a) {
    CTensor s = CTensor::matrix(2, 2);
    switch (a) {
    case 0: s(0, 0) = 1.0; s(1, 1) = 1.0; break;
    case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 2: s(0, 1) = cplx(0.0, -1.0); s(1, 0) = cplx(0.0, 1.0); break;
    default: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    }
    return s;
}

} // namespace

cplx f_minus(cplx y, const EllipticParams& p) {
    const cplx tau2 = 2.0 * p.tau();
    return elliptic::theta({0, 0}, 2.0 * y, tau2, p.tail_tol) -
           elliptic::theta({1, 0}, 2.0 * y, tau2, p.tail_tol);
}

cplx f_plus(cplx y, const EllipticParams& p) {
    const cplx tau2 = 2.0 * p.tau();
    return elliptic::theta({0, 0}, 2.0 * y, tau2, p.tail_tol) +
           elliptic::theta({1, 0}, 2.0 * y, tau2, p.tail_tol);
}

ThetaBasis::ThetaBasis(double l_, const EllipticParams& p) : l(l_), params(p) {
    const std::size_t m = half_int_to_count(l_);
    dim = m + 1;
    const std::uint32_t base_seed = 0x5eed0000u + static_cast<std::uint32_t>(m);
    for (std::uint32_t attempt = 0; attempt < 16; ++attempt) {
        grid_seed = base_seed + attempt;
        Rng rng(grid_seed);
        grid.clear();
        for (std::size_t i = 0; i < dim; ++i) {
            const double re = 0.05 + 0.9 * rng.uniform();
            const double im = (0.05 + 0.9 * rng.uniform()) / p.t;
            grid.emplace_back(re, im);
        }
        eval_matrix = CTensor::matrix(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                eval_matrix(i, k) = basis_function(k, grid[i]);
        try {
            if (tensor::condition_inf(eval_matrix) < 1e8)
                return;
        } catch (const numeric_error&) {
            // singular grid, retry
        }
    }
    throw numeric_error("ThetaBasis: could not build a well-conditioned evaluation grid");
}

cplx ThetaBasis::basis_function(std::size_t k, cplx y) const {
    const std::size_t m = dim - 1;
    const cplx fm = f_minus(y, params), fp = f_plus(y, params);
    cplx v = 1.0;
    for (std::size_t q = 0; q < m - k; ++q)
        v *= fm;
    for (std::size_t q = 0; q < k; ++q)
        v *= fp;
    return v;
}

CTensor ThetaBasis::coordinates(const std::vector<cplx>& values) const {
    if (values.size() != dim)
        throw parameter_error("ThetaBasis::coordinates: need one value per grid point");
    CTensor rhs = CTensor::matrix(dim, 1);
    for (std::size_t i = 0; i < dim; ++i)
        rhs(i, 0) = values[i];
    return tensor::solve(eval_matrix, rhs);
}

CTensor iso_sym_to_theta(double l, const EllipticParams& p) {
    const std::size_t m = half_int_to_count(l);
    const ThetaBasis tb(l, p);
    CTensor iso = CTensor::matrix(m + 1, m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        // SpinSpace basis vector b_k is the normalized symmetrization of the
        // elementary tensor with k plus factors; its image is the product
        // function scaled by 1/||sym|| = sqrt(C(2l,k)).
        double binom = 1.0;
        for (std::size_t q = 0; q < k; ++q)
            binom = binom * static_cast<double>(m - q) / static_cast<double>(q + 1);
        std::vector<cplx> vals(m + 1);
        for (std::size_t i = 0; i <= m; ++i)
            vals[i] = std::sqrt(binom) * tb.basis_function(k, tb.grid[i]);
        const CTensor c = tb.coordinates(vals);
        for (std::size_t i = 0; i <= m; ++i)
            iso(i, k) = c(i, 0);
    }
    return iso;
}

CTensor l_operator(cplx u, double l, const EllipticParams& p) {
    const std::size_t m = half_int_to_count(l);
    const cplx scale = elliptic::theta11(u + static_cast<double>(m) * p.eta(), p) /
                       elliptic::theta11(2.0 * p.eta(), p);
    const CTensor rh = fusion::fuse_half(u - p.eta(), l, p).op;
    const CTensor iso = iso_sym_to_theta(l, p);
    const CTensor conj =
        matmul(kron(CTensor::identity(2), iso),
               matmul(rh, kron(CTensor::identity(2), tensor::inverse(iso))));
    return scale * conj;
}

namespace {

std::array<CTensor, 4> extract_at(cplx u, double l, const EllipticParams& p) {
    const std::size_t d = half_int_to_count(l) + 1;
    const CTensor lop = l_operator(u, l, p);
    std::array<CTensor, 4> out;
    for (int a = 0; a < 4; ++a) {
        const cplx wl = elliptic::weight_wl(a, u, p);
        if (std::abs(wl) < 1e-12)
            throw singular_error("extract_generators: W^L_a vanishes at the sample point");
        const CTensor sa = pauli(a);
        CTensor tr = CTensor::matrix(d, d);
        // tr_aux((sigma^a (x) Id) L)(al,be) = sum_{i,k} sigma^a(i,k) L((k,al),(i,be))
        for (std::size_t al = 0; al < d; ++al)
            for (std::size_t be = 0; be < d; ++be) {
                cplx s = 0.0;
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t k = 0; k < 2; ++k)
                        s += sa(i, k) * lop(k * d + al, i * d + be);
                tr(al, be) = s / (2.0 * wl);
            }
        out[a] = tr;
    }
    return out;
}

} // namespace

SklyaninGenerators extract_generators(double l, const EllipticParams& p) {
    const std::array<cplx, 4> samples{cplx(0.17), cplx(0.31), cplx(0.215), cplx(0.345)};
    for (std::size_t first = 0; first + 1 < samples.size(); ++first) {
        try {
            auto s1 = extract_at(samples[first], l, p);
            auto s2 = extract_at(samples[first + 1], l, p);
            double dev = 0.0;
            for (int a = 0; a < 4; ++a)
                dev = std::max(dev, max_abs(s1[a] - s2[a]));
            if (dev > 1e-7)
                throw numeric_error("extract_generators: extractions at two points disagree "
                                    "(convention error)");
            SklyaninGenerators g{l, {}, dev};
            for (int a = 0; a < 4; ++a) {
                g.s[a] = s1[a];
                g.s[a] += s2[a];
                g.s[a] *= 0.5;
            }
            return g;
        } catch (const singular_error&) {
            // W^L_a vanished at a sample point; retry at shifted u
        }
    }
    throw numeric_error("extract_generators: no viable sample points");
}

} // namespace fxyz::sklyanin
