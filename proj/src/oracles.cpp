#include "ctwr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ctwr/analytic.hpp"

namespace ctwr::oracle {

namespace {

constexpr double kTailLengths = 60.0; // exp(-60) ~ 9e-27, far below all tolerances

double simpson(double h, double fa, double fm, double fb) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(m - a, fa, flm, fm);
    const double right = simpson(b - m, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    return adapt(f, a, b, fa, fm, fb, simpson(b - a, fa, fm, fb), tol, 48);
}

double relay_outage_quadrature(const ScenarioConfig& cfg, int relay,
                               double Ps, double Pd, double tol) {
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    const double dt = cfg.delta_total();
    const double ms = (Ps / cfg.n0()) * cfg.sigma2_sr(relay);
    const double md = (Pd / cfg.n0()) * cfg.sigma2_dr(relay);
    const double w = cfg.gamma_u() * cfg.sigma2_ur(relay);
    if (ds == 0.0 && dd == 0.0) return 0.0;

    // Decode probability conditioned on the normalized primary-interference
    // draw t (the relay sees interference-plus-noise w * t + 1, t ~ Exp(1)).
    const auto decode_given_t = [&](double t) -> double {
        const double z = w * t + 1.0;
        if (ds == 0.0) return md > 0.0 ? std::exp(-dd * z / md) : 0.0;
        if (dd == 0.0) return ms > 0.0 ? std::exp(-ds * z / ms) : 0.0;
        if (ms <= 0.0 || md <= 0.0) return 0.0;
        // gs >= ds z, gd >= dd z, gs + gd >= dt z with gs ~ Exp(ms),
        // gd ~ Exp(md). Split the gs axis at (dt - dd) z, above which the
        // individual gd constraint binds.
        const double lo = ds * z;
        const double hi = (dt - dd) * z;
        const double tail = std::exp(-hi / ms) * std::exp(-dd * z / md);
        const auto strip = [&](double x) {
            return (1.0 / ms) * std::exp(-x / ms) * std::exp(-(dt * z - x) / md);
        };
        return tail + integrate(strip, lo, hi, tol * 1e-3);
    };

    const auto outer = [&](double t) { return std::exp(-t) * decode_given_t(t); };
    const double p_decode = integrate(outer, 0.0, kTailLengths, 0.5 * tol);
    return 1.0 - p_decode;
}

double out_given_set_quadrature(const ScenarioConfig& cfg, std::uint32_t mask,
                                const PowerAllocation& alloc, double tol) {
    if (cfg.m() > 31 || (mask >> cfg.m()) != 0) {
        throw validation_error("out_given_set_quadrature: mask has bits beyond M");
    }
    if (mask == 0) {
        throw domain_error("out_given_set_quadrature: empty decode set");
    }
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    if (ds == 0.0 && dd == 0.0) return 0.0;
    if ((dd > 0.0 && alloc.Pd <= 0.0) || (ds > 0.0 && alloc.Ps <= 0.0)) {
        throw domain_error("out_given_set_quadrature: requires positive ST powers");
    }
    const double gu = cfg.gamma_u();

    // Relay i fails the s-side forward event iff its r->s gain falls below
    // X / (beta_i gamma_ri sigma2_sr_i) with
    //   X = delta_d (gamma_u h_us + 1) - gamma_d h_ds,
    // a two-sided exponential kinked at D = delta_d (upper-tail mean u,
    // lower-tail mean v). Mirrored for the d side with Y.
    struct Side {
        double u = 0.0, v = 0.0, D = 0.0;
    };
    const Side xs{dd * gu * cfg.sigma2_us(), (alloc.Pd / cfg.n0()) * cfg.sigma2_sd(),
                  dd};
    const Side ys{ds * gu * cfg.sigma2_ud(), (alloc.Ps / cfg.n0()) * cfg.sigma2_sd(),
                  ds};

    std::vector<int> relays;
    std::vector<double> b_rate, a_rate;
    for (int i = 0; i < cfg.m(); ++i) {
        if (!((mask >> i) & 1u)) continue;
        relays.push_back(i);
        const double gr = alloc.Pr[i] / cfg.n0();
        b_rate.push_back(alloc.beta[i] * gr * cfg.sigma2_sr(i));
        a_rate.push_back(alloc.alpha[i] * gr * cfg.sigma2_dr(i));
    }

    const auto survival = [](double rate, double excess) {
        // P(Exp(rate-mean gain) >= excess); excess <= 0 always succeeds.
        if (excess <= 0.0) return 1.0;
        if (rate <= 0.0) return 0.0;
        return std::exp(-excess / rate);
    };

    const auto density = [](const Side& s, double x) {
        const double norm = 1.0 / (s.u + s.v);
        if (x >= s.D) return norm * std::exp(-(x - s.D) / s.u);
        return s.v > 0.0 ? norm * std::exp(-(s.D - x) / s.v) : 0.0;
    };

    const auto pieces = [](const Side& s) {
        std::vector<double> pts;
        const double lo = s.D - kTailLengths * s.v;
        const double hi = s.D + kTailLengths * s.u;
        pts.push_back(lo);
        if (0.0 > lo && 0.0 < hi) pts.push_back(0.0);
        if (s.D > pts.back() && s.D < hi) pts.push_back(s.D);
        pts.push_back(hi);
        return pts;
    };

    const auto integrate_pieces = [&](const std::vector<double>& pts,
                                      const std::function<double(double)>& f,
                                      double piece_tol) {
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            sum += integrate(f, pts[k], pts[k + 1], piece_tol);
        }
        return sum;
    };

    // Product over the decode set of per-relay forward-failure probabilities
    // given (X, Y) = (x, y).
    const auto product_given = [&](double x, double y) {
        double prod = 1.0;
        for (std::size_t k = 0; k < relays.size(); ++k) {
            prod *= 1.0 - survival(b_rate[k], x) * survival(a_rate[k], y);
        }
        return prod;
    };

    if (dd == 0.0) {
        // X is never positive: only the Y integral remains.
        const auto f = [&](double y) { return density(ys, y) * product_given(0.0, y); };
        return integrate_pieces(pieces(ys), f, 0.25 * tol);
    }
    if (ds == 0.0) {
        const auto f = [&](double x) { return density(xs, x) * product_given(x, 0.0); };
        return integrate_pieces(pieces(xs), f, 0.25 * tol);
    }

    const std::vector<double> ypts = pieces(ys);
    const auto outer = [&](double x) {
        const auto inner = [&](double y) {
            return density(ys, y) * product_given(x, y);
        };
        return density(xs, x) * integrate_pieces(ypts, inner, tol * 1e-3);
    };
    return integrate_pieces(pieces(xs), outer, 0.25 * tol);
}

AlphaGridResult alpha_grid_search(const ScenarioConfig& cfg, int relay,
                                  double Ps, double Pd, double Pr,
                                  int n_points) {
    if (n_points < 2) {
        throw validation_error("alpha_grid_search: need at least 2 grid points");
    }
    PowerAllocation alloc;
    alloc.Ps = Ps;
    alloc.Pd = Pd;
    alloc.Pr.assign(cfg.m(), 0.0);
    alloc.alpha.assign(cfg.m(), 0.5);
    alloc.beta.assign(cfg.m(), 0.5);
    alloc.Pr[relay] = Pr;

    AlphaGridResult best;
    best.cell = 1.0 / (n_points - 1);
    bool have = false;
    for (int j = 0; j < n_points; ++j) {
        const double a = static_cast<double>(j) / (n_points - 1);
        alloc.alpha[relay] = a;
        alloc.beta[relay] = 1.0 - a;
        const double obj = analytic::st_outage_given_relay(cfg, relay, alloc);
        if (!have || obj < best.objective) {
            have = true;
            best.alpha = a;
            best.objective = obj;
        }
    }
    return best;
}

} // namespace ctwr::oracle
