#include "fxyz/verify.hpp"

#include <cmath>
#include <numbers>

#include "fxyz/bethe.hpp"
#include "fxyz/fusion.hpp"
#include "fxyz/rng.hpp"
#include "fxyz/sklyanin.hpp"
#include "fxyz/thermo.hpp"

namespace fxyz::verify {

using elliptic::cplx;
using elliptic::EllipticParams;
using tensor::CTensor;
using tensor::matmul;
using tensor::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult make(const std::string& name, double residual, double threshold) {
    CheckResult r;
    r.name = name;
    r.residual = residual;
    r.threshold = threshold;
    r.pass = residual < threshold;
    return r;
}

CheckResult skipped(const std::string& name, const std::string& reason) {
    CheckResult r;
    r.name = name;
    r.skipped = true;
    r.pass = true;
    r.reason = reason;
    return r;
}

template <typename F>
CheckResult guarded(const std::string& name, double threshold, F&& f) {
    try {
        return make(name, f(), threshold);
    } catch (const std::exception& e) {
        CheckResult r;
        r.name = name;
        r.threshold = threshold;
        r.residual = std::nan("");
        r.pass = false;
        r.reason = e.what();
        return r;
    }
}

cplx random_u(Rng& rng) { return {rng.uniform(-0.35, 0.35), rng.uniform(-0.04, 0.04)}; }

std::vector<double> spins_upto(double lmax) {
    std::vector<double> out;
    for (double l = 0.5; l <= lmax + 1e-9; l += 0.5)
        out.push_back(l);
    return out;
}

double ybe_residual(double l1, double l2, double l3, cplx u1, cplx u2, cplx u3,
                    const EllipticParams& p) {
    const auto d = [](double l) { return static_cast<std::size_t>(std::llround(2.0 * l)) + 1; };
    const std::vector<std::size_t> dims{d(l1), d(l2), d(l3)};
    const CTensor r12 = tensor::embed_operator(fusion::fuse(u1 - u2, l1, l2, p).op, {0, 1}, dims);
    const CTensor r13 = tensor::embed_operator(fusion::fuse(u1 - u3, l1, l3, p).op, {0, 2}, dims);
    const CTensor r23 = tensor::embed_operator(fusion::fuse(u2 - u3, l2, l3, p).op, {1, 2}, dims);
    const CTensor lhs = matmul(r12, matmul(r13, r23));
    const CTensor rhs = matmul(r23, matmul(r13, r12));
    return max_abs(lhs - rhs) / std::max(1e-300, max_abs(lhs));
}

double unitarity_residual(double l1, double l2, cplx u, cplx v, const EllipticParams& p) {
    const auto d1 = static_cast<std::size_t>(std::llround(2.0 * l1)) + 1;
    const auto d2 = static_cast<std::size_t>(std::llround(2.0 * l2)) + 1;
    const CTensor r12 = fusion::fuse(u - v, l1, l2, p).op;
    const CTensor r21 = fusion::fuse(v - u, l2, l1, p).op;
    const CTensor sw = tensor::swap_matrix(d1, d2);
    // R21 acting on V^{l1} (x) V^{l2}
    const CTensor r21_on_12 = matmul(tensor::adjoint(sw), matmul(r21, sw));
    return max_abs(matmul(r12, r21_on_12) - CTensor::identity(d1 * d2));
}

} // namespace

std::vector<CheckResult> theta_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    const EllipticParams& p = cfg.cp.p;
    const cplx tau = p.tau();
    Rng rng(cfg.seed ^ 0x7e7a11ULL);

    double qp = 0.0, parity = 0.0, deriv = 0.0;
    for (int i = 0; i < 20; ++i) {
        const cplx z(rng.uniform(-0.8, 0.8), rng.uniform(-0.4, 0.4) / p.t);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const elliptic::ThetaChar c{a, b};
                const cplx t0 = elliptic::theta(c, z, tau);
                const double scale = std::max(1.0, std::abs(t0));
                const cplx t1 = elliptic::theta(c, z + 1.0, tau) -
                                std::exp(cplx(0.0, kPi * a)) * t0;
                const cplx t2 =
                    elliptic::theta(c, z + tau, tau) -
                    std::exp(cplx(0.0, -1.0) * kPi * tau - cplx(0.0, 2.0 * kPi) * (z + 0.5 * b)) *
                        t0;
                qp = std::max(qp, std::max(std::abs(t1), std::abs(t2)) / scale);
                const double sign = (a == 1 && b == 1) ? -1.0 : 1.0;
                parity = std::max(parity,
                                  std::abs(elliptic::theta(c, -z, tau) - sign * t0) / scale);
                const double h = 1e-5;
                const cplx fd =
                    (8.0 * (elliptic::theta(c, z + h, tau) - elliptic::theta(c, z - h, tau)) -
                     (elliptic::theta(c, z + 2 * h, tau) - elliptic::theta(c, z - 2 * h, tau))) /
                    (12.0 * h);
                deriv = std::max(deriv, std::abs(elliptic::theta_deriv(c, z, tau) - fd) / scale);
            }
    }
    out.push_back(make("theta.quasi_periodicity", qp, 1e-10));
    out.push_back(make("theta.parity", parity, 1e-12));
    out.push_back(make("theta.deriv_vs_finite_difference", deriv, 1e-8));

    // tail honesty: tighter tolerance must agree within the looser bound
    double tail = 0.0;
    for (int i = 0; i < 10; ++i) {
        const cplx z(rng.uniform(-0.8, 0.8), rng.uniform(-0.4, 0.4) / p.t);
        const cplx a = elliptic::theta({1, 1}, z, tau, 1e-10);
        const cplx b = elliptic::theta({1, 1}, z, tau, 1e-14);
        tail = std::max(tail, std::abs(a - b));
    }
    out.push_back(make("theta.tail_bound_honesty", tail, 1e-10));

    // W_a(0) = 1/2 and the corrected W/W^L bridge
    double w0 = 0.0, bridge = 0.0;
    for (int a = 0; a < 4; ++a) {
        w0 = std::max(w0, std::abs(elliptic::weight_w(a, 0.0, p) - 0.5));
        const cplx u(0.31, 0.0);
        const cplx th2e = elliptic::theta11(2.0 * p.eta(), p);
        const cplx lhs = th2e * th2e * elliptic::weight_wl(a, u + p.eta(), p);
        const cplx rhs = elliptic::weight_w(a, u, p) * elliptic::theta11(u + 2.0 * p.eta(), p);
        bridge = std::max(bridge, std::abs(lhs - rhs));
    }
    out.push_back(make("weights.w_at_zero", w0, 1e-12));
    out.push_back(make("weights.wl_bridge", bridge, 1e-12));
    return out;
}

std::vector<CheckResult> r_matrix_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    const EllipticParams& p = cfg.cp.p;
    Rng rng(cfg.seed ^ 0xb4e0ULL);
    const auto spins = spins_upto(std::max(cfg.cp.l, cfg.lprime));

    double ybe = 0.0;
    for (double l1 : spins)
        for (double l2 : spins)
            for (double l3 : spins) {
                if (2.0 * (l1 + l2 + l3) > 6.0 + 1e-9)
                    continue;
                for (int i = 0; i < cfg.random_points; ++i)
                    ybe = std::max(ybe, ybe_residual(l1, l2, l3, random_u(rng), random_u(rng),
                                                     random_u(rng), p));
            }
    out.push_back(make("fusion.yang_baxter", ybe, 1e-9));

    double uni = 0.0;
    for (double l1 : spins)
        for (double l2 : spins)
            for (int i = 0; i < cfg.random_points; ++i)
                uni = std::max(uni, unitarity_residual(l1, l2, random_u(rng), random_u(rng), p));
    out.push_back(make("fusion.unitarity", uni, 1e-9));

    double perm = 0.0;
    for (double l : spins) {
        const auto d = static_cast<std::size_t>(std::llround(2.0 * l)) + 1;
        perm = std::max(perm,
                        max_abs(fusion::fuse(0.0, l, l, p).op - tensor::swap_matrix(d, d)));
    }
    out.push_back(make("fusion.r_at_zero_is_swap", perm, 1e-10));
    return out;
}

std::vector<CheckResult> qdet_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed ^ 0x9de7ULL);
    double agree = 0.0, off = 0.0;
    for (double lp : {0.5, 1.0}) {
        for (int i = 0; i < 10; ++i) {
            const cplx u = random_u(rng);
            const auto c = fusion::qdet_check(u, lp, cfg.cp.p);
            const double scale = std::max(1.0, std::abs(c.closed_value));
            agree = std::max(agree, std::abs(c.trace_value - c.closed_value) / scale);
            off = std::max(off, c.off_scalar / scale);
        }
    }
    out.push_back(make("qdet.trace_vs_closed_form", agree, 1e-9));
    out.push_back(make("qdet.trace_formula_scalar", off, 1e-10));
    return out;
}

std::vector<CheckResult> recurrence_r_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed ^ 0x4ec0ULL);
    const std::vector<std::pair<double, double>> pairs{{0.5, 0.5}, {0.5, 1.0}, {1.0, 0.5}};
    double ul = 0.0, ur = 0.0, lr = 0.0;
    for (auto [l, lp] : pairs) {
        for (int i = 0; i < 2; ++i) {
            const cplx u = random_u(rng);
            const auto r = fusion::check_recurrence_r(u, l, lp, cfg.cp.p);
            ul = std::max(ul, r.upper_left);
            ur = std::max(ur, r.upper_right);
            lr = std::max(lr, r.lower_right);
        }
    }
    out.push_back(make("fusion.recurrence_upper_left", ul, 1e-8));
    out.push_back(make("fusion.recurrence_upper_right", ur, 1e-8));
    out.push_back(make("fusion.recurrence_lower_right", lr, 1e-8));
    return out;
}

std::vector<CheckResult> sklyanin_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    const EllipticParams& p = cfg.cp.p;
    Rng rng(cfg.seed ^ 0x5aa5ULL);

    double dev = 0.0, rec = 0.0;
    for (double l : {0.5, 1.0}) {
        const auto g = sklyanin::extract_generators(l, p);
        dev = std::max(dev, g.deviation);
        const cplx u3(0.235, 0.0);
        const CTensor lop = sklyanin::l_operator(u3, l, p);
        const auto d = static_cast<std::size_t>(std::llround(2.0 * l)) + 1;
        CTensor rebuilt = CTensor::matrix(2 * d, 2 * d);
        for (int a = 0; a < 4; ++a) {
            CTensor sigma = CTensor::matrix(2, 2);
            switch (a) {
            case 0: sigma(0, 0) = 1.0; sigma(1, 1) = 1.0; break;
            case 1: sigma(0, 1) = 1.0; sigma(1, 0) = 1.0; break;
            case 2: sigma(0, 1) = cplx(0, -1); sigma(1, 0) = cplx(0, 1); break;
            default: sigma(0, 0) = 1.0; sigma(1, 1) = -1.0; break;
            }
            rebuilt += elliptic::weight_wl(a, u3, p) * tensor::kron(sigma, g.s[a]);
        }
        rec = std::max(rec, max_abs(rebuilt - lop));
    }
    out.push_back(make("sklyanin.generator_u_independence", dev, 1e-9));
    out.push_back(make("sklyanin.l_reconstruction", rec, 1e-9));

    // functional equations of the basis functions at random y
    double feq = 0.0;
    for (double l : {0.5, 1.0, 1.5}) {
        const sklyanin::ThetaBasis tb(l, p);
        const double fourl = 4.0 * l;
        for (int i = 0; i < 10; ++i) {
            const cplx y(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95) / p.t);
            for (std::size_t k = 0; k < tb.dim; ++k) {
                const cplx f0 = tb.basis_function(k, y);
                const double scale = std::max(1.0, std::abs(f0));
                feq = std::max(feq, std::abs(tb.basis_function(k, y + 1.0) - f0) / scale);
                feq = std::max(feq, std::abs(tb.basis_function(k, -y) - f0) / scale);
                const cplx mult =
                    std::exp(cplx(0.0, -fourl * kPi) * (2.0 * y + p.tau()));
                feq = std::max(
                    feq, std::abs(tb.basis_function(k, y + p.tau()) - mult * f0) / scale);
            }
        }
    }
    out.push_back(make("sklyanin.basis_functional_equations", feq, 1e-9));

    // full rank of the evaluation matrix for l <= 3/2
    double rank_ok = 0.0;
    for (double l : {0.5, 1.0, 1.5}) {
        const sklyanin::ThetaBasis tb(l, p);
        if (tensor::condition_inf(tb.eval_matrix) >= 1e8)
            rank_ok = 1.0;
    }
    out.push_back(make("sklyanin.basis_full_rank", rank_ok, 0.5));
    return out;
}

std::vector<CheckResult> transfer_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed ^ 0x7a45ULL);

    double comm = 0.0;
    for (double l : {0.5, 1.0}) {
        for (int n = 2; n <= 3; ++n) {
            chain::ChainParams cp = cfg.cp;
            cp.l = l;
            cp.n_sites = n;
            if (std::pow(2.0 * l + 1.0, n) > 4096.0)
                continue;
            for (double lp1 : {0.5, 1.0})
                for (double lp2 : {0.5, 1.0}) {
                    for (int i = 0; i < 3; ++i) {
                        const cplx u = random_u(rng), v = random_u(rng);
                        const CTensor t1 = chain::transfer(u, lp1, cp);
                        const CTensor t2 = chain::transfer(v, lp2, cp);
                        const double scale =
                            std::max(1e-300, max_abs(t1) * max_abs(t2));
                        comm = std::max(comm,
                                        max_abs(matmul(t1, t2) - matmul(t2, t1)) / scale);
                    }
                }
        }
    }
    out.push_back(make("transfer.commutativity", comm, 1e-9));

    double shift = 0.0;
    for (double l : {0.5, 1.0}) {
        for (int n = 2; n <= 3; ++n) {
            chain::ChainParams cp = cfg.cp;
            cp.l = l;
            cp.n_sites = n;
            shift = std::max(shift, max_abs(chain::transfer(0.0, l, cp) -
                                            chain::cyclic_shift(cp)));
        }
    }
    out.push_back(make("transfer.t0_cyclic_shift", shift, 1e-10));

    double rec = 0.0;
    {
        chain::ChainParams cp = cfg.cp;
        cp.n_sites = 2;
        for (double l : {0.5, 1.0}) {
            cp.l = l;
            rec = std::max(rec, chain::check_recurrence_t(cplx(0.2, 0.0), 0.5, cp));
        }
        cp.l = 0.5;
        rec = std::max(rec, chain::check_recurrence_t(cplx(0.1, 0.0), 1.0, cp));
    }
    out.push_back(make("transfer.recurrence", rec, 1e-8));

    // H commutes with T(u); momentum exponentiates back to T(0)
    {
        chain::ChainParams cp = cfg.cp;
        cp.l = 0.5;
        cp.n_sites = 3;
        const CTensor h = chain::hamiltonian(cp);
        const CTensor tu = chain::transfer(cplx(0.17, 0.0), 0.5, cp);
        const double scale = std::max(1e-300, max_abs(h) * max_abs(tu));
        out.push_back(make("hamiltonian.commutes_with_transfer",
                           max_abs(matmul(h, tu) - matmul(tu, h)) / scale, 1e-7));
        const CTensor pm = chain::momentum(cp);
        // eigenvalues on the momentum lattice
        double lattice = 0.0;
        for (const auto& ev : tensor::eigenvalues(pm)) {
            const double q = ev.real() / (2.0 * kPi / cp.n_sites);
            lattice = std::max(lattice, std::abs(q - std::round(q)));
            lattice = std::max(lattice, std::abs(ev.imag()));
        }
        out.push_back(make("momentum.lattice", lattice, 1e-8));
    }
    return out;
}

std::vector<CheckResult> bethe_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed ^ 0xbe7eULL);

    const std::vector<std::pair<double, int>> cases{{0.5, 2}, {0.5, 4}, {1.0, 2}};
    double match = 0.0, residue = 0.0, recur = 0.0, unit0 = 0.0;
    int solved_count = 0;
    for (auto [l, n] : cases) {
        chain::ChainParams cp = cfg.cp;
        cp.l = l;
        cp.n_sites = n;
        for (const auto& seed : bethe::seed_library(cp)) {
            bethe::BetheState st;
            try {
                st = bethe::solve(seed);
            } catch (const std::exception&) {
                continue; // library states that fail to converge are skipped
            }
            ++solved_count;
            for (int i = 0; i < 3; ++i) {
                const cplx u = random_u(rng);
                for (double lp : {0.5, 1.0}) {
                    const auto rep = bethe::match_spectrum(st, u, lp, cp);
                    match = std::max(match, rep.distance /
                                                std::max(1.0, std::abs(rep.formula_value)));
                }
            }
            for (std::size_t j = 0; j < st.roots.size(); ++j)
                residue = std::max(residue, bethe::residue_estimate(st, j));
            // scalar transfer recurrence on the eigenvalue formulas
            for (double lp : {0.5, 1.0}) {
                for (int i = 0; i < 5; ++i) {
                    const cplx u = random_u(rng);
                    const cplx lhs = bethe::eigenvalue_fused(u, lp + 0.5, st);
                    const cplx t1 = bethe::eigenvalue_fused(u + cp.p.eta(), lp, st);
                    const cplx t2 =
                        bethe::eigenvalue_half(u - 2.0 * lp * cp.p.eta(), st);
                    const cplx t3 = (lp == 0.5)
                                        ? cplx(1.0)
                                        : bethe::eigenvalue_fused(u + 2.0 * cp.p.eta(),
                                                                  lp - 0.5, st);
                    const cplx rhs =
                        t1 * t2 -
                        bethe::h_function(u - 2.0 * lp * cp.p.eta(), st) * t3;
                    recur = std::max(recur,
                                     std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
                }
            }
            // |t^{l,l}(0)| = 1 on the shift lattice
            const cplx t0 = bethe::eigenvalue_fused(0.0, cp.l, st);
            unit0 = std::max(unit0, std::abs(std::abs(t0) - 1.0));
            const double q = std::arg(t0) / (2.0 * kPi / cp.n_sites);
            unit0 = std::max(unit0, std::abs(q - std::round(q)));
        }
    }
    out.push_back(make("bethe.match_exact_spectrum", match, 1e-6));
    out.push_back(make("bethe.residue_cancellation", residue, 1e-6));
    out.push_back(make("bethe.scalar_recurrence", recur, 1e-9));
    out.push_back(make("bethe.unit_modulus_at_zero", unit0, 1e-8));
    if (solved_count == 0)
        out.push_back(make("bethe.seed_library_nonempty", 1.0, 0.5));
    return out;
}

std::vector<CheckResult> dispersion_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    const EllipticParams& p = cfg.cp.p;
    Rng rng(cfg.seed ^ 0xd15bULL);

    double sum_id = 0.0, deriv_id = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform(-0.49, 0.49);
        sum_id = std::max(sum_id, std::abs(thermo::particle_momentum(x, p) +
                                           thermo::log_tau(x, p) + kPi));
        const double h = 1e-5;
        const double dp = (thermo::particle_momentum(x + h, p) -
                           thermo::particle_momentum(x - h, p)) /
                          (2.0 * h);
        deriv_id = std::max(deriv_id, std::abs(thermo::particle_energy(x, cfg.cp.coupling, p) +
                                               cfg.cp.coupling * dp));
    }
    out.push_back(make("dispersion.p_plus_logtau", sum_id, 1e-10));
    out.push_back(make("dispersion.energy_is_minus_dp_dx", deriv_id, 1e-6));
    out.push_back(make("dispersion.p_at_zero",
                       std::abs(thermo::particle_momentum(0.0, p) + kPi / 2.0), 1e-12));
    if (thermo::string_gate_holds(cfg.cp)) {
        const auto gs = thermo::gs_log_eigenvalue(0.0, cfg.cp);
        out.push_back(make("dispersion.gs_per_site_at_zero",
                           std::abs(gs.value / cfg.cp.n_sites - kPi * cfg.cp.l), 1e-12));
    } else {
        out.push_back(skipped("dispersion.gs_per_site_at_zero",
                              "validity gate 2(2l+1)eta < 1 violated"));
    }
    return out;
}

std::vector<CheckResult> finite_size_checks(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    chain::ChainParams base = cfg.cp;
    base.l = 0.5;
    if (!thermo::string_gate_holds(base)) {
        out.push_back(skipped("finite_size.ladder", "validity gate 2(2l+1)eta < 1 violated"));
        return out;
    }
    std::vector<chain::ChainParams> ladder;
    for (int n : cfg.ladder) {
        chain::ChainParams cp = base;
        cp.n_sites = n;
        ladder.push_back(cp);
    }
    const auto rep = thermo::finite_size_check(ladder, 0.1);
    double last_delta = std::nan("");
    bool decreasing = true;
    double prev = 1e300;
    for (const auto& e : rep.entries) {
        if (!e.converged) {
            decreasing = false;
            continue;
        }
        if (e.delta >= prev)
            decreasing = false;
        prev = e.delta;
        last_delta = e.delta;
    }
    out.push_back(make("finite_size.strictly_decreasing", decreasing ? 0.0 : 1.0, 0.5));
    out.push_back(make("finite_size.final_delta", last_delta, 1e-2));
    return out;
}

std::vector<CheckResult> run_all(const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    auto append = [&out](std::vector<CheckResult> v) {
        for (auto& r : v)
            out.push_back(std::move(r));
    };
    append(theta_checks(cfg));
    append(r_matrix_checks(cfg));
    append(qdet_checks(cfg));
    append(recurrence_r_checks(cfg));
    append(sklyanin_checks(cfg));
    append(transfer_checks(cfg));
    append(bethe_checks(cfg));
    append(dispersion_checks(cfg));
    if (cfg.with_finite_size)
        append(finite_size_checks(cfg));
    return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass && !r.skipped)
            return false;
    return true;
}

} // namespace fxyz::verify
