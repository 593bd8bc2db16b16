#include "fxyz/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fxyz::bethe {

using tensor::CTensor;

namespace {

constexpr double kPi = std::numbers::pi;

struct Terms {
    const ChainParams& cp;
    double eta;
    double twol;
    int n;

    explicit Terms(const ChainParams& cp_)
        : cp(cp_), eta(cp_.p.eta()), twol(2.0 * cp_.l), n(cp_.n_sites) {}

    cplx logth(cplx z) const {
        const cplx v = elliptic::theta11(z, cp.p);
        if (std::abs(v) < 1e-300)
            throw singular_error("bethe: log of vanishing theta_11");
        return std::log(v);
    }
    cplx dlogth(cplx z) const {
        const cplx v = elliptic::theta11(z, cp.p);
        if (std::abs(v) < 1e-300)
            throw singular_error("bethe: logarithmic derivative at a theta_11 zero");
        return elliptic::theta11_deriv(z, cp.p) / v;
    }
};

void check_theta_zero_collisions(const BetheState& s) {
    const double eta = s.params.p.eta();
    const double twol = 2.0 * s.params.l;
    for (std::size_t j = 0; j < s.roots.size(); ++j) {
        for (double sgn : {+1.0, -1.0}) {
            if (elliptic::lattice_distance(s.roots[j] + sgn * twol * eta, s.params.p) < 1e-12)
                throw singular_error("bethe_residual: root " + std::to_string(j) +
                                     " places w +- 2l eta on a theta_11 zero");
        }
        for (std::size_t k = 0; k < s.roots.size(); ++k) {
            if (k == j)
                continue;
            for (double sgn : {+1.0, -1.0}) {
                if (elliptic::lattice_distance(s.roots[j] - s.roots[k] + sgn * 2.0 * eta,
                                               s.params.p) < 1e-12)
                    throw singular_error("bethe_residual: roots " + std::to_string(j) + "," +
                                         std::to_string(k) + " collide with a theta_11 zero");
            }
        }
    }
}

std::vector<cplx> residual_with_branch(const BetheState& s, const std::vector<int>& branch) {
    const Terms t(s.params);
    const std::size_t m = s.roots.size();
    std::vector<cplx> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        cplx f = static_cast<double>(t.n) *
                     (t.logth(s.roots[j] + t.twol * t.eta) - t.logth(s.roots[j] - t.twol * t.eta)) +
                 cplx(0.0, 4.0 * kPi * s.nu * t.eta) - cplx(0.0, 2.0 * kPi * branch[j]);
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j)
                continue;
            f -= t.logth(s.roots[j] - s.roots[k] + 2.0 * t.eta) -
                 t.logth(s.roots[j] - s.roots[k] - 2.0 * t.eta);
        }
        out[j] = f;
    }
    return out;
}

double max_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v)
        s = std::max(s, std::abs(x));
    return s;
}

CTensor jacobian(const BetheState& s) {
    const Terms t(s.params);
    const std::size_t m = s.roots.size();
    CTensor j = CTensor::matrix(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        j(a, a) = static_cast<double>(t.n) * (t.dlogth(s.roots[a] + t.twol * t.eta) -
                                              t.dlogth(s.roots[a] - t.twol * t.eta));
        for (std::size_t b = 0; b < m; ++b) {
            if (b == a)
                continue;
            const cplx d = t.dlogth(s.roots[a] - s.roots[b] + 2.0 * t.eta) -
                           t.dlogth(s.roots[a] - s.roots[b] - 2.0 * t.eta);
            j(a, a) -= d;
            j(a, b) += d;
        }
    }
    return j;
}

// stretch chains of roots sitting exactly on string positions (adjacent
// separations of 2 eta) so the pair terms leave the theta_11 zero
void nudge_exact_strings(std::vector<cplx>& roots, const ChainParams& cp, double nudge) {
    const double eta = cp.p.eta();
    const std::size_t m = roots.size();
    std::vector<int> chain_id(m, -1);
    int chains = 0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            const double sep = std::abs(std::abs(roots[j] - roots[k]) - 2.0 * eta);
            if (sep < 1e-8) {
                if (chain_id[j] < 0 && chain_id[k] < 0) {
                    chain_id[j] = chain_id[k] = chains++;
                } else if (chain_id[j] < 0) {
                    chain_id[j] = chain_id[k];
                } else if (chain_id[k] < 0) {
                    chain_id[k] = chain_id[j];
                } else if (chain_id[j] != chain_id[k]) {
                    const int from = chain_id[k], to = chain_id[j];
                    for (auto& c : chain_id)
                        if (c == from)
                            c = to;
                }
            }
        }
    }
    for (int c = 0; c < chains; ++c) {
        cplx centroid = 0.0;
        int count = 0;
        for (std::size_t j = 0; j < m; ++j)
            if (chain_id[j] == c) {
                centroid += roots[j];
                ++count;
            }
        if (count < 2)
            continue;
        centroid /= static_cast<double>(count);
        const double scale = 1.0 + nudge / (2.0 * eta);
        for (std::size_t j = 0; j < m; ++j)
            if (chain_id[j] == c)
                roots[j] = centroid + scale * (roots[j] - centroid);
    }
}

void canonicalize(std::vector<cplx>& roots) {
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

} // namespace

std::vector<cplx> bethe_residual(const BetheState& s) {
    if (s.roots.size() != static_cast<std::size_t>(s.params.magnon_count()))
        throw parameter_error("bethe_residual: root count must be M = N*l");
    check_theta_zero_collisions(s);
    std::vector<int> branch = s.branch;
    if (branch.size() != s.roots.size())
        throw parameter_error("bethe_residual: branch size mismatch");
    return residual_with_branch(s, branch);
}

std::vector<int> nearest_branch(const BetheState& s) {
    std::vector<int> zero(s.roots.size(), 0);
    const auto f = residual_with_branch(s, zero);
    std::vector<int> out(s.roots.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = static_cast<int>(std::lround(f[j].imag() / (2.0 * kPi)));
    return out;
}

BetheState solve(const BetheState& initial, const SolveOptions& opt) {
    BetheState s = initial;
    if (s.roots.size() != static_cast<std::size_t>(s.params.magnon_count()))
        throw parameter_error("solve: root count must be M = N*l");
    nudge_exact_strings(s.roots, s.params, opt.string_nudge);
    check_theta_zero_collisions(s);

    const std::size_t m = s.roots.size();
    for (int it = 0; it <= opt.max_iter; ++it) {
        s.branch = nearest_branch(s);
        auto f = residual_with_branch(s, s.branch);
        const double nrm = max_norm(f);
        if (nrm < opt.tol) {
            s.residual_norm = nrm;
            s.solved = true;
            s.iterations = it;
            canonicalize(s.roots);
            s.branch = nearest_branch(s);
            return s;
        }
        if (it == opt.max_iter)
            break;
        const CTensor j = jacobian(s);
        CTensor rhs = CTensor::matrix(m, 1);
        for (std::size_t a = 0; a < m; ++a)
            rhs(a, 0) = -f[a];
        CTensor delta = tensor::solve(j, rhs);
        double step_max = 0.0;
        for (std::size_t a = 0; a < m; ++a)
            step_max = std::max(step_max, std::abs(delta(a, 0)));
        if (step_max > opt.trust_radius) {
            const cplx sc(opt.trust_radius / step_max, 0.0);
            delta *= sc;
        }
        double lambda = 1.0;
        std::vector<cplx> best = s.roots;
        for (int halving = 0; halving < 9; ++halving) {
            std::vector<cplx> trial(m);
            for (std::size_t a = 0; a < m; ++a)
                trial[a] = s.roots[a] + lambda * delta(a, 0);
            BetheState probe = s;
            probe.roots = trial;
            bool collided = false;
            for (std::size_t a = 0; a < m && !collided; ++a)
                for (std::size_t b = a + 1; b < m; ++b)
                    if (std::abs(trial[a] - trial[b]) < 1e-10) {
                        collided = true;
                        break;
                    }
            if (collided) {
                lambda *= 0.5;
                if (halving == 8)
                    throw numeric_error(
                        "solve: root collision during iteration; try the alternate "
                        "excited-state variant");
                continue;
            }
            try {
                probe.branch = nearest_branch(probe);
                const double trial_nrm = max_norm(residual_with_branch(probe, probe.branch));
                best = trial;
                if (trial_nrm < nrm)
                    break;
            } catch (const singular_error&) {
                // stepped onto a theta zero, shorten
            }
            lambda *= 0.5;
        }
        s.roots = best;
    }
    s.branch = nearest_branch(s);
    s.residual_norm = max_norm(residual_with_branch(s, s.branch));
    s.solved = false;
    throw numeric_error("solve: Newton did not converge (residual " +
                        std::to_string(s.residual_norm) + ")");
}

cplx q_function(cplx u, const BetheState& s) {
    cplx q = std::exp(cplx(0.0, -kPi * s.nu) * u);
    for (const auto& w : s.roots)
        q *= elliptic::theta11(u - w + s.params.p.eta(), s.params.p);
    return q;
}

cplx h_function(cplx u, const BetheState& s) {
    const double eta = s.params.p.eta();
    const double twol = 2.0 * s.params.l;
    const cplx ratio = elliptic::theta11(u + (1.0 - twol) * eta, s.params.p) /
                       elliptic::theta11(u + (1.0 + twol) * eta, s.params.p);
    cplx h = 1.0;
    for (int i = 0; i < s.params.n_sites; ++i)
        h *= ratio;
    return h;
}

namespace {

cplx eigenvalue_fused_at(cplx u, double lprime, const BetheState& s) {
    const double eta = s.params.p.eta();
    const auto mp = static_cast<int>(std::llround(2.0 * lprime));
    const cplx qp = q_function(u + (mp + 1) * eta, s);
    const cplx qm = q_function(u - (mp + 1) * eta, s);
    cplx sum = 0.0;
    cplx a = 1.0;
    for (int j = 0; j <= mp; ++j) {
        if (j > 0)
            a *= h_function(u + static_cast<double>(mp + 1 - 2 * j) * eta, s);
        const cplx d1 = q_function(u + static_cast<double>(mp + 1 - 2 * j) * eta, s);
        const cplx d2 = q_function(u + static_cast<double>(mp - 1 - 2 * j) * eta, s);
        sum += a * qp * qm / (d1 * d2);
    }
    return sum;
}

// analytic continuation around zeros of Q(u): average of u +- eps with a
// residue check
cplx eigenvalue_guarded(cplx u, double lprime, const BetheState& s, bool half) {
    auto eval = [&](cplx v) {
        return half ? (q_function(v - 2.0 * s.params.p.eta(), s) / q_function(v, s) +
                       h_function(v, s) * q_function(v + 2.0 * s.params.p.eta(), s) /
                           q_function(v, s))
                    : eigenvalue_fused_at(v, lprime, s);
    };
    const double scale = std::abs(q_function(u + 0.37, s)) + 1e-30;
    bool near_zero = std::abs(q_function(u, s)) < 1e-12 * scale;
    if (!near_zero && !half) {
        const double eta = s.params.p.eta();
        const auto mp = static_cast<int>(std::llround(2.0 * lprime));
        for (int j = 0; j <= mp && !near_zero; ++j) {
            if (std::abs(q_function(u + static_cast<double>(mp + 1 - 2 * j) * eta, s)) <
                    1e-12 * scale ||
                std::abs(q_function(u + static_cast<double>(mp - 1 - 2 * j) * eta, s)) <
                    1e-12 * scale)
                near_zero = true;
        }
    }
    if (!near_zero)
        return eval(u);
    const double eps = 1e-6;
    const cplx vp = eval(u + eps), vm = eval(u - eps);
    if (std::abs(vp - vm) > 1e-4 * std::max(1.0, std::abs(vp + vm)))
        throw singular_error("eigenvalue: non-cancelling pole at a Q zero "
                             "(state does not satisfy the Bethe equations?)");
    return 0.5 * (vp + vm);
}

} // namespace

cplx eigenvalue_half(cplx u, const BetheState& s) { return eigenvalue_guarded(u, 0.5, s, true); }

cplx eigenvalue_fused(cplx u, double lprime, const BetheState& s) {
    return eigenvalue_guarded(u, lprime, s, false);
}

MatchReport match_spectrum(const BetheState& s, cplx u, double lprime, const ChainParams& cp) {
    MatchReport r;
    r.formula_value = eigenvalue_fused(u, lprime, s);
    const auto ev = chain::spectrum(u, lprime, cp);
    r.distance = 1e300;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const double d = std::abs(ev[i] - r.formula_value);
        if (d < r.distance) {
            r.distance = d;
            r.nearest_exact = ev[i];
            r.index = i;
        }
    }
    r.success = r.distance < 1e-6 * std::max(1.0, std::abs(r.formula_value));
    return r;
}

double residue_estimate(const BetheState& s, std::size_t j, double eps) {
    if (j >= s.roots.size())
        throw parameter_error("residue_estimate: root index out of range");
    const cplx u0 = s.roots[j] - s.params.p.eta();
    const cplx tp = eigenvalue_half(u0 + eps, s);
    const cplx tm = eigenvalue_half(u0 - eps, s);
    return std::abs(tp - tm) * eps / 2.0;
}

std::vector<BetheState> seed_library(const ChainParams& cp) {
    std::vector<BetheState> out;
    const int m = cp.magnon_count();
    const double eta = cp.p.eta();
    const cplx tau = cp.p.tau();
    auto mk = [&](int nu, std::vector<cplx> roots) {
        BetheState s;
        s.nu = nu;
        s.roots = std::move(roots);
        s.branch.assign(s.roots.size(), 0);
        s.params = cp;
        return s;
    };
    const bool half = std::abs(cp.l - 0.5) < 1e-12;
    if (half && m == 1) {
        // the four one-root states: strings of both parities at centers 0, -1/2
        out.push_back(mk(0, {cplx(0.0)}));
        out.push_back(mk(0, {cplx(0.5)}));
        out.push_back(mk(1, {0.5 * tau}));
        out.push_back(mk(1, {0.5 + 0.5 * tau}));
    } else if (half) {
        // ground state: one-strings spread over the full period
        std::vector<cplx> gs;
        for (int k = 0; k < m; ++k) {
            const double x = (k + 0.5) / m - 0.5;
            gs.push_back(cplx(0.0, -x / cp.p.t));
        }
        out.push_back(mk(0, gs));
        if (m == 2) {
            // one plus- and one minus-parity string
            out.push_back(mk(0, {cplx(0.0, -0.05), cplx(0.5, 0.05)}));
            out.push_back(mk(0, {cplx(0.0), cplx(0.5)}));
        }
    } else if (std::abs(cp.l - 1.0) < 1e-12 && cp.n_sites == 2) {
        // single two-string, real stretch seed
        out.push_back(mk(0, {-(eta + 0.02), eta + 0.02}));
    } else if (std::abs(cp.l - 1.0) < 1e-12 && cp.n_sites % 2 == 0) {
        // two-strings at symmetric centers
        std::vector<cplx> gs;
        const int ns = cp.n_sites / 2;
        for (int k = 0; k < ns; ++k) {
            const double x = (k + 0.5) / ns - 0.5;
            const cplx c(0.0, -x / cp.p.t);
            gs.push_back(c - (eta + 0.02));
            gs.push_back(c + (eta + 0.02));
        }
        out.push_back(mk(0, gs));
    }
    return out;
}

} // namespace fxyz::bethe
