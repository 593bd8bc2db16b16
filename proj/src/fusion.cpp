#include "fxyz/fusion.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fxyz::fusion {

using tensor::adjoint;
using tensor::embed_operator;
using tensor::kron;
using tensor::matmul;
using tensor::max_abs;
using tensor::trace;
using tensor::SpinSpace;
using tensor::symmetrizer;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDirectDistance = 1e-3;  // below this, switch to contour averaging
constexpr double kTruePoleReject = 1e-10; // spec'd rejection radius
constexpr int kContourPoints = 16;

std::size_t half_int_to_count(double l, const char* what) {
    const double twol = 2.0 * l;
    const auto m = static_cast<std::size_t>(std::llround(twol));
    if (std::abs(twol - static_cast<double>(m)) > 1e-12 || m < 1)
        throw parameter_error(std::string(what) + ": spin must be a positive half-integer");
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

CTensor baxter_op(cplx u, const EllipticParams& p) {
    CTensor r = CTensor::matrix(4, 4);
    for (int a = 0; a < 4; ++a) {
        const cplx w = elliptic::weight_w(a, u, p);
        const CTensor sa = pauli(a);
        r += w * kron(sa, sa);
    }
    return r;
}

// direct evaluation of the fused product; inner removable poles make this
// inaccurate, callers go through eval_with_contour
CTensor fuse_half_direct(cplx u, double lprime, const EllipticParams& p) {
    const std::size_t m = half_int_to_count(lprime, "fuse_half");
    if (m == 1)
        return baxter_op(u, p);
    std::vector<std::size_t> dims(m + 1, 2); // factor 0 = V_i, factors 1..m barred
    const std::size_t D = std::size_t{1} << (m + 1);
    CTensor prod = CTensor::identity(D);
    for (std::size_t j = m; j >= 1; --j) {
        const cplx arg = u + (2.0 * static_cast<double>(j) - static_cast<double>(m) - 1.0) * p.eta();
        prod = matmul(prod, embed_operator(baxter_op(arg, p), {0, j}, dims));
    }
    std::vector<std::size_t> barred(m);
    for (std::size_t s = 0; s < m; ++s)
        barred[s] = s + 1;
    prod = matmul(embed_operator(symmetrizer(m), barred, dims), prod);
    const SpinSpace sp(lprime);
    const CTensor e2 = kron(CTensor::identity(2), sp.embed);
    CTensor out = matmul(adjoint(e2), matmul(prod, e2));
    // the symmetrized image must lie in C^2 (x) V^{l'}
    const double leak = max_abs(matmul(prod, e2) - matmul(e2, out));
    if (leak > 1e-10 * std::max(1.0, max_abs(out)))
        throw numeric_error("fuse_half: fused image leaves the symmetric subspace");
    return out;
}

CTensor fuse_direct(cplx u, double l, double lprime, const EllipticParams& p) {
    const std::size_t m = half_int_to_count(l, "fuse");
    if (m == 1)
        return fuse_half_direct(u, lprime, p);
    const std::size_t mp = half_int_to_count(lprime, "fuse");
    const std::size_t dlp = mp + 1;
    // factors 0..m-1 are the unbarred slots V_{2l}..V_1 (descending), factor m = V^{l'}
    std::vector<std::size_t> dims(m, 2);
    dims.push_back(dlp);
    const std::size_t D = (std::size_t{1} << m) * dlp;
    CTensor prod = CTensor::identity(D);
    for (std::size_t j = m; j >= 1; --j) {
        const cplx arg = u + (2.0 * static_cast<double>(j) - static_cast<double>(m) - 1.0) * p.eta();
        const CTensor rh = fuse_half_direct(arg, lprime, p);
        prod = matmul(prod, embed_operator(rh, {m - j, m}, dims));
    }
    std::vector<std::size_t> unbarred(m);
    for (std::size_t s = 0; s < m; ++s)
        unbarred[s] = s;
    prod = matmul(embed_operator(symmetrizer(m), unbarred, dims), prod);
    const SpinSpace sp(l);
    const CTensor e2 = kron(sp.embed, CTensor::identity(dlp));
    CTensor out = matmul(adjoint(e2), matmul(prod, e2));
    const double leak = max_abs(matmul(prod, e2) - matmul(e2, out));
    if (leak > 1e-10 * std::max(1.0, max_abs(out)))
        throw numeric_error("fuse: fused image leaves the symmetric subspace");
    return out;
}

// Evaluate the meromorphic construction at u.  Near a removable inner pole the
// direct product cancels catastrophically; average over a small circle inside
// the analyticity domain instead (trapezoidal rule picks out the analytic value
// to spectral accuracy).
template <typename F>
CTensor eval_with_contour(cplx u, double l, double lprime, const EllipticParams& p, F&& direct) {
    const double d_true = detail::min_true_pole_distance(u, l, lprime, p);
    if (d_true < kTruePoleReject)
        throw singular_error("R-matrix evaluation at a pole of the unitary normalization");
    if (detail::min_inner_distance(u, l, lprime, p) > kDirectDistance)
        return direct(u);
    double rho = std::min(1e-2, 0.25 * d_true);
    for (int attempt = 0; attempt < 3; ++attempt) {
        bool samples_ok = true;
        for (int k = 0; k < kContourPoints && samples_ok; ++k) {
            const double phi = 2.0 * kPi * (k + 0.5) / kContourPoints;
            const cplx uk = u + rho * cplx(std::cos(phi), std::sin(phi));
            if (detail::min_inner_distance(uk, l, lprime, p) < 1e-4)
                samples_ok = false;
        }
        if (!samples_ok) {
            rho *= 1.37;
            continue;
        }
        CTensor acc;
        for (int k = 0; k < kContourPoints; ++k) {
            const double phi = 2.0 * kPi * (k + 0.5) / kContourPoints;
            const cplx uk = u + rho * cplx(std::cos(phi), std::sin(phi));
            CTensor rk = direct(uk);
            if (k == 0)
                acc = rk;
            else
                acc += rk;
        }
        acc *= cplx(1.0 / kContourPoints, 0.0);
        return acc;
    }
    throw numeric_error("R-matrix contour evaluation could not place samples away from poles");
}

} // namespace

namespace detail {

std::vector<cplx> inner_arguments(cplx u, double l, double lprime, const EllipticParams& p) {
    const auto m = static_cast<int>(std::llround(2.0 * l));
    const auto mp = static_cast<int>(std::llround(2.0 * lprime));
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(m) * mp);
    for (int j = 1; j <= m; ++j) {
        const cplx uj = u + static_cast<double>(2 * j - m - 1) * p.eta();
        for (int s = 1; s <= mp; ++s)
            out.push_back(uj + static_cast<double>(2 * s - mp - 1) * p.eta());
    }
    return out;
}

double min_inner_distance(cplx u, double l, double lprime, const EllipticParams& p) {
    double best = 1e300;
    for (cplx v : inner_arguments(u, l, lprime, p))
        best = std::min(best, elliptic::lattice_distance(v + 2.0 * p.eta(), p));
    return best;
}

double min_true_pole_distance(cplx u, double l, double lprime, const EllipticParams& p) {
    const auto m = static_cast<int>(std::llround(2.0 * l));
    const auto mp = static_cast<int>(std::llround(2.0 * lprime));
    double best = 1e300;
    for (int j = 1; j <= m; ++j) {
        const cplx uj = u + static_cast<double>(2 * j - m - 1) * p.eta();
        best = std::min(best,
                        elliptic::lattice_distance(uj + static_cast<double>(mp + 1) * p.eta(), p));
    }
    return best;
}

} // namespace detail

RMatrix baxter_r(cplx u, const EllipticParams& p) {
    CTensor op = eval_with_contour(u, 0.5, 0.5, p,
                                   [&](cplx v) { return baxter_op(v, p); });
    return {0.5, 0.5, u, std::move(op), p};
}

RMatrix fuse_half(cplx u, double lprime, const EllipticParams& p) {
    half_int_to_count(lprime, "fuse_half");
    CTensor op = eval_with_contour(u, 0.5, lprime, p,
                                   [&](cplx v) { return fuse_half_direct(v, lprime, p); });
    return {0.5, lprime, u, std::move(op), p};
}

RMatrix fuse(cplx u, double l, double lprime, const EllipticParams& p) {
    const std::size_t m = half_int_to_count(l, "fuse");
    const std::size_t mp = half_int_to_count(lprime, "fuse");
    if (m > 6 || mp > 6)
        throw parameter_error("fuse: size guard 2l, 2l' <= 6");
    CTensor op = eval_with_contour(u, l, lprime, p,
                                   [&](cplx v) { return fuse_direct(v, l, lprime, p); });
    return {l, lprime, u, std::move(op), p};
}

QdetCheck qdet_check(cplx u, double lprime, const EllipticParams& p) {
    const std::size_t mp = half_int_to_count(lprime, "qdet");
    const std::size_t dlp = mp + 1;
    const cplx closed = elliptic::theta11(u - static_cast<double>(mp) * p.eta(), p) /
                        elliptic::theta11(u + static_cast<double>(mp) * p.eta(), p);
    // trace formula on V_0 (x) V_1 (x) V^{l'}
    const std::vector<std::size_t> dims{2, 2, dlp};
    const CTensor ra = fuse_half(u + p.eta(), lprime, p).op;
    const CTensor rb = fuse_half(u - p.eta(), lprime, p).op;
    CTensor x = matmul(embed_operator(tensor::antisymmetrizer2(), {0, 1}, dims),
                       matmul(embed_operator(ra, {0, 2}, dims),
                              embed_operator(rb, {1, 2}, dims)));
    // partial trace over factors 0 and 1
    CTensor traced = CTensor::matrix(dlp, dlp);
    for (std::size_t a = 0; a < dlp; ++a)
        for (std::size_t b = 0; b < dlp; ++b) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < 4; ++i)
                s += x(i * dlp + a, i * dlp + b);
            traced(a, b) = s;
        }
    QdetCheck out;
    out.closed_value = closed;
    out.trace_value = trace(traced) / static_cast<double>(dlp);
    out.off_scalar = max_abs(traced - out.trace_value * CTensor::identity(dlp));
    return out;
}

cplx qdet(cplx u, double lprime, const EllipticParams& p) {
    const QdetCheck c = qdet_check(u, lprime, p);
    const double scale = std::max(1.0, std::abs(c.closed_value));
    if (std::abs(c.trace_value - c.closed_value) > 1e-7 * scale || c.off_scalar > 1e-7 * scale)
        throw numeric_error("qdet: trace formula and closed form disagree (convention bug?)");
    return c.closed_value;
}

RecurrenceRResidual check_recurrence_r(cplx u, double l, double lprime, const EllipticParams& p) {
    const std::size_t m = half_int_to_count(l, "check_recurrence_r");
    const std::size_t mp = half_int_to_count(lprime, "check_recurrence_r");
    const std::size_t dlp = mp + 1;
    // factors 0..m-1 = V_{2l}..V_1, factor m = V_0, factor m+1 = V^{l'}
    std::vector<std::size_t> dims(m + 1, 2);
    dims.push_back(dlp);

    const SpinSpace sp_l(l);
    const CTensor e_l = kron(sp_l.embed, CTensor::identity(dlp));
    const CTensor r_l = fuse(u + p.eta(), l, lprime, p).op;
    // R^{l,l'} acting on the embedded symmetric part of factors 0..m-1 and factor m+1
    CTensor big1 = matmul(e_l, matmul(r_l, adjoint(e_l)));
    std::vector<std::size_t> f1(m);
    for (std::size_t s = 0; s < m; ++s)
        f1[s] = s;
    f1.push_back(m + 1);
    big1 = embed_operator(big1, f1, dims);
    const CTensor big2 = embed_operator(
        fuse_half(u - 2.0 * l * p.eta(), lprime, p).op, {m, m + 1}, dims);
    const CTensor mm = matmul(big1, big2);

    // upper block: the full symmetrizer image of all m+1 two-dim factors
    const SpinSpace sp_up(l + 0.5);
    const CTensor u_up = kron(sp_up.embed, CTensor::identity(dlp));
    // lower block: Sym_{V_1..V_2l}( embed(l-1/2) on V_{2l}..V_2 (x) singlet(V_1,V_0) )
    const std::size_t qdim = std::size_t{1} << (m + 1);
    CTensor sing = CTensor::matrix(4, 1);
    sing(1, 0) = 1.0 / std::sqrt(2.0);
    sing(2, 0) = -1.0 / std::sqrt(2.0);
    CTensor base;
    if (m >= 2) {
        const SpinSpace sp_lm(l - 0.5);
        base = kron(sp_lm.embed, sing); // (2^(m-1) * 4) x m  on factors 0..m-2,(m-1,m)
    } else {
        base = sing; // l = 1/2: V^0 is one-dimensional
    }
    std::vector<std::size_t> qdims(m + 1, 2);
    std::vector<std::size_t> first_m(m);
    for (std::size_t s = 0; s < m; ++s)
        first_m[s] = s;
    const CTensor sym_slots = embed_operator(symmetrizer(m), first_m, qdims);
    CTensor phi = matmul(sym_slots, base.reshaped({qdim, base.size() / qdim}));
    const CTensor u_low = kron(phi, CTensor::identity(dlp));

    // block extraction: upper isometry is orthonormal, phi needs its pseudo-inverse
    const CTensor up_h = adjoint(u_up);
    const CTensor low_pinv =
        matmul(tensor::inverse(matmul(adjoint(u_low), u_low)), adjoint(u_low));

    const CTensor block_ul = matmul(up_h, matmul(mm, u_up));
    const CTensor block_ur = matmul(up_h, matmul(mm, u_low));
    const CTensor block_lr = matmul(low_pinv, matmul(mm, u_low));

    const CTensor r_up = fuse(u, l + 0.5, lprime, p).op;
    const cplx q = qdet(u - (2.0 * l - 1.0) * p.eta(), lprime, p);
    CTensor r_low;
    if (m >= 2)
        r_low = fuse(u + 2.0 * p.eta(), l - 0.5, lprime, p).op;
    else
        r_low = CTensor::identity(dlp); // R^{0,l'} on C (x) V^{l'}

    RecurrenceRResidual res;
    res.upper_left = max_abs(block_ul - r_up);
    res.upper_right = max_abs(block_ur);
    res.lower_right = max_abs(block_lr - q * r_low);
    return res;
}

} // namespace fxyz::fusion
