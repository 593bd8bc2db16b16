#include "fxyz/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fxyz::thermo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSeriesCap = 100000;

double sech(double y) {
    const double e = std::exp(-std::abs(y));
    return 2.0 * e / (1.0 + e * e);
}

int string_length(const ChainParams& cp) {
    const auto a = static_cast<int>(std::llround(2.0 * cp.l));
    if (std::abs(2.0 * cp.l - a) > 1e-12 || a < 1)
        throw parameter_error("thermo: l must be a positive half-integer");
    return a;
}

} // namespace

int StringConfig::total_roots() const {
    int s = 0;
    for (const auto& e : entries)
        s += e.length;
    return s;
}

bool string_gate_holds(const ChainParams& cp) {
    return 2.0 * (2.0 * cp.l + 1.0) * cp.p.eta() < 1.0;
}

StringConfig ground_state_config(const ChainParams& cp) {
    if (cp.n_sites % 2 != 0)
        throw parameter_error("ground_state_config: N must be even");
    if (!string_gate_holds(cp))
        throw parameter_error("ground_state_config: validity gate 2(2l+1)eta < 1 violated");
    const int a = string_length(cp);
    StringConfig c;
    const int ns = cp.n_sites / 2;
    for (int k = 0; k < ns; ++k) {
        const double x = (k + 0.5) / ns - 0.5;
        c.entries.push_back({a, Parity::plus, x});
    }
    return c;
}

StringConfig excited_config(ExcitedKind kind, double x1, double x2, CenterVariant variant,
                            const ChainParams& cp) {
    if (cp.n_sites % 2 != 0)
        throw parameter_error("excited_config: N must be even");
    if (!string_gate_holds(cp))
        throw parameter_error("excited_config: validity gate 2(2l+1)eta < 1 violated");
    const int a = string_length(cp);
    if (kind == ExcitedKind::one && a - 1 < 1)
        throw parameter_error("excited_config: kind I needs a (2l-1)-string; none exists at "
                              "l = 1/2");
    StringConfig c;
    c.holes = {x1, x2};
    c.variant = variant;
    const double xm = (x1 + x2) / 2.0;
    const double xshift = variant == CenterVariant::half_sum ? xm : xm + 0.5;
    const int keep = cp.n_sites / 2 - (kind == ExcitedKind::one ? 2 : 1);
    // distribute the remaining 2l-strings over the full period, skipping the
    // slots nearest to the holes
    const int slots = keep + 2;
    std::vector<double> xs;
    for (int k = 0; k < slots; ++k)
        xs.push_back((k + 0.5) / slots - 0.5);
    auto drop_nearest = [&xs](double x) {
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = std::abs(xs[i] - x);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(best));
    };
    drop_nearest(x1);
    drop_nearest(x2);
    for (double x : xs)
        c.entries.push_back({a, Parity::plus, x});
    if (kind == ExcitedKind::one) {
        c.entries.push_back({a - 1, Parity::plus, xm});
        c.entries.push_back({a + 1, Parity::plus, xshift});
    } else {
        if (a - 1 >= 1)
            c.entries.push_back({a - 1, Parity::plus, xm});
        c.entries.push_back({1, Parity::minus, xshift});
    }
    return c;
}

std::vector<cplx> config_to_roots(const StringConfig& c, const EllipticParams& p) {
    std::vector<cplx> roots;
    const double eta = p.eta();
    for (const auto& e : c.entries) {
        cplx center(e.center, 0.0);
        if (e.parity == Parity::minus)
            center += cplx(0.0, p.t / 2.0);
        for (int q = 0; q < e.length; ++q) {
            const double alpha = (-(e.length - 1) / 2.0) + q;
            const cplx x = center + cplx(0.0, 2.0 * eta * p.t * alpha);
            roots.push_back(x / cplx(0.0, p.t)); // w = x/(it)
        }
    }
    return roots;
}

BetheState config_state(const StringConfig& c, int nu, const ChainParams& cp) {
    if (c.total_roots() != cp.magnon_count())
        throw parameter_error("config_state: total string length differs from M = N*l");
    BetheState s;
    s.nu = nu;
    s.roots = config_to_roots(c, cp.p);
    s.branch.assign(s.roots.size(), 0);
    s.params = cp;
    return s;
}

GsSeries gs_log_eigenvalue(double x, const ChainParams& cp) {
    if (!string_gate_holds(cp))
        throw parameter_error("gs_log_eigenvalue: validity gate 2(2l+1)eta < 1 violated");
    const double eta = cp.p.eta();
    const double t = cp.p.t;
    const double l = cp.l;
    double s = 0.0;
    int n = 1;
    for (; n <= kSeriesCap; ++n) {
        const double a = 4.0 * kPi * n * l * eta * t;
        const double b = kPi * n * t * (1.0 - 4.0 * l * eta);
        const double c = kPi * n * t;
        const double d = 4.0 * kPi * n * eta * t;
        // sh(a)sh(b)/(sh(c)sh(d)) with a+b = c, written to avoid overflow
        const double mag = std::exp(a + b - c - d) * (1.0 - std::exp(-2.0 * a)) *
                           (1.0 - std::exp(-2.0 * b)) /
                           ((1.0 - std::exp(-2.0 * c)) * (1.0 - std::exp(-2.0 * d)));
        if (!(mag >= 0.0) || mag > 1e12)
            throw parameter_error("gs_log_eigenvalue: series summand does not decay");
        s += mag / n * std::sin(2.0 * kPi * n * x);
        if (mag / n < cp.p.tail_tol && n > 4)
            break;
    }
    GsSeries out;
    out.terms = std::min(n, kSeriesCap);
    out.value = cp.n_sites * (kPi * l + 2.0 * kPi * l * x * (1.0 - 4.0 * l * eta) + 2.0 * s);
    return out;
}

namespace {

double dispersion_sum(double x, const EllipticParams& p, bool cosine) {
    double s = 0.0;
    for (int n = 1; n <= kSeriesCap; ++n) {
        const double damp = sech(2.0 * kPi * n * p.eta() * p.t);
        const double term = cosine ? std::cos(2.0 * kPi * n * x) * damp
                                   : std::sin(2.0 * kPi * n * x) * damp / n;
        s += term;
        if (damp < p.tail_tol && n > 4)
            break;
    }
    return s;
}

} // namespace

double log_tau(double x, const EllipticParams& p) {
    return -kPi / 2.0 - kPi * x - dispersion_sum(x, p, false);
}

double excitation_shift(double x, double x1, double x2, const EllipticParams& p) {
    return log_tau(x - x1, p) + log_tau(x - x2, p);
}

double particle_momentum(double x, const EllipticParams& p) {
    return -kPi / 2.0 + kPi * x + dispersion_sum(x, p, false);
}

double particle_energy(double x, double coupling, const EllipticParams& p) {
    return coupling * (-kPi - 2.0 * kPi * dispersion_sum(x, p, true));
}

namespace {

// resample sorted centers as quantiles of the empirical density (periodic
// piecewise-linear inverse CDF)
std::vector<double> refine_centers(const std::vector<double>& xs_sorted, int m_new) {
    const int m_old = static_cast<int>(xs_sorted.size());
    std::vector<double> qq, xx;
    qq.push_back((0.5) / m_old - 1.0);
    xx.push_back(xs_sorted.back() - 1.0);
    for (int k = 0; k < m_old; ++k) {
        qq.push_back((k + 0.5) / m_old);
        xx.push_back(xs_sorted[k]);
    }
    qq.push_back((m_old - 0.5) / m_old + 1.0);
    xx.push_back(xs_sorted.front() + 1.0);
    std::vector<double> out;
    for (int k = 0; k < m_new; ++k) {
        const double q = (k + 0.5) / m_new;
        for (std::size_t i = 0; i + 1 < qq.size(); ++i) {
            if (qq[i] <= q && q <= qq[i + 1]) {
                const double f = (q - qq[i]) / (qq[i + 1] - qq[i]);
                out.push_back(xx[i] + f * (xx[i + 1] - xx[i]));
                break;
            }
        }
    }
    return out;
}

} // namespace

FiniteSizeReport finite_size_check(const std::vector<ChainParams>& ladder, double x) {
    FiniteSizeReport rep;
    if (ladder.empty())
        throw parameter_error("finite_size_check: empty ladder");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i].n_sites <= ladder[i - 1].n_sites)
            throw parameter_error("finite_size_check: ladder must be strictly increasing in N");
    const ChainParams& base = ladder.front();
    rep.series_per_site = gs_log_eigenvalue(x, base).value / base.n_sites;
    const cplx u = cplx(x, 0.0) / cplx(0.0, base.p.t);

    std::vector<double> prev_centers;
    rep.non_increasing = true;
    double prev_delta = 1e300;
    for (const ChainParams& cp : ladder) {
        FiniteSizeEntry e;
        e.n_sites = cp.n_sites;
        try {
            if (cp.n_sites % 2 != 0)
                throw parameter_error("N must be even");
            BetheState seed;
            if (prev_centers.empty()) {
                const StringConfig c = ground_state_config(cp);
                seed = config_state(c, 0, cp);
            } else {
                StringConfig c;
                const int a = string_length(cp);
                for (double xc : refine_centers(prev_centers, cp.n_sites / 2))
                    c.entries.push_back({a, Parity::plus, xc});
                seed = config_state(c, 0, cp);
            }
            BetheState solved = bethe::solve(seed);
            // remember centers (sorted rescaled real parts) for the next rung
            std::vector<double> centers;
            for (const auto& w : solved.roots)
                centers.push_back((cplx(0.0, base.p.t) * w).real());
            std::sort(centers.begin(), centers.end());
            // 2l-string roots share centers; dedupe to one center per string
            std::vector<double> dedup;
            const int a = string_length(cp);
            for (std::size_t i = 0; i < centers.size(); i += static_cast<std::size_t>(a)) {
                double c = 0.0;
                for (int q = 0; q < a; ++q)
                    c += centers[i + q];
                dedup.push_back(c / a);
            }
            prev_centers = dedup;

            // path-unwrapped (1/i) log of the fused eigenvalue, anchored at N pi l
            const int steps = 40;
            cplx prev = bethe::eigenvalue_fused(0.0, cp.l, solved);
            double phase = cp.n_sites * kPi * cp.l + std::arg(prev);
            for (int k = 1; k <= steps; ++k) {
                const cplx cur =
                    bethe::eigenvalue_fused(u * (static_cast<double>(k) / steps), cp.l, solved);
                phase += std::arg(cur / prev);
                prev = cur;
            }
            const cplx one_over_i_log(phase, -std::log(std::abs(prev)));
            e.per_site = one_over_i_log.real() / cp.n_sites;
            e.delta = std::abs(one_over_i_log / static_cast<double>(cp.n_sites) -
                               rep.series_per_site);
            e.converged = true;
        } catch (const std::exception& ex) {
            e.converged = false;
            e.message = ex.what();
        }
        if (e.converged) {
            if (e.delta > prev_delta)
                rep.non_increasing = false;
            prev_delta = e.delta;
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

} // namespace fxyz::thermo
