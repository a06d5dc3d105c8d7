#include "ctwr/asymptotic.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "ctwr/allocation.hpp"
#include "ctwr/analytic.hpp"
#include "ctwr/detail/numeric.hpp"

namespace ctwr::asymptotic {

namespace {

using detail::CompensatedSum;
using detail::ensure_probability;
using detail::nearly_equal_rel;

// gamma_u-free constraint coefficients: A = A0 / (gamma_u N0) etc., so the
// boundary equations keep their shape with P replaced by rho.
struct BaseCoeffs {
    double A0 = 0.0;
    double B0 = 0.0;
    double g_prime = 1.0;
};

BaseCoeffs base_coeffs(const ScenarioConfig& cfg) {
    if (cfg.delta_u() == 0.0) {
        throw validation_error(
            "asymptotic allocation: the QoS constraint vanishes at delta_u = 0 "
            "and the power budget is unbounded");
    }
    BaseCoeffs c;
    c.A0 = cfg.delta_u() * cfg.sigma2_sv() / cfg.sigma2_uv();
    c.B0 = cfg.delta_u() * cfg.sigma2_dv() / cfg.sigma2_uv();
    c.g_prime = 1.0 / (1.0 - cfg.pth());
    return c;
}

void require_rho(double rho, const char* name) {
    if (!std::isfinite(rho) || rho < 0.0) {
        throw validation_error(std::string(name) + " must be finite and >= 0");
    }
}

double symmetric_rho(const BaseCoeffs& c) {
    const double s = c.A0 + c.B0;
    return (-s + std::sqrt(s * s + 4.0 * c.A0 * c.B0 * (c.g_prime - 1.0))) /
           (2.0 * c.A0 * c.B0);
}

struct RhoCandidates {
    double rho_s_ratio = 0.0;
    double rho_d_ratio = 0.0;
    double rho_s_lagrange = 0.0;
    double rho_d_lagrange = 0.0;
    int chosen = 1;
};

RhoCandidates rho_candidates(const ScenarioConfig& cfg, const BaseCoeffs& c, int h) {
    RhoCandidates cand;
    const double kappa = cfg.sigma2_sr(h) / cfg.sigma2_dr(h);
    {
        const double p = 1.0 / (2.0 * c.A0);
        const double q = 1.0 / (2.0 * c.B0 * kappa);
        cand.rho_s_ratio =
            std::sqrt((q - p) * (q - p) + 4.0 * c.g_prime * p * q) - q - p;
        cand.rho_d_ratio = kappa * cand.rho_s_ratio;
    }
    if (cfg.delta_s() == 0.0 && cfg.delta_d() == 0.0) {
        cand.rho_s_lagrange = cand.rho_s_ratio;
        cand.rho_d_lagrange = cand.rho_d_ratio;
        cand.chosen = 1;
        return cand;
    }
    {
        const double x =
            cfg.delta_d() * cfg.sigma2_sr(h) / (cfg.delta_s() * cfg.sigma2_dr(h));
        cand.rho_s_lagrange =
            (c.g_prime - 1.0) / (std::sqrt(x * c.A0 * c.B0 * c.g_prime) + c.A0);
        cand.rho_d_lagrange =
            (c.g_prime - 1.0) / (std::sqrt(c.A0 * c.B0 * c.g_prime / x) + c.B0);
    }
    const double o1 =
        asymptotic_relay_outage(cfg, h, cand.rho_s_ratio, cand.rho_d_ratio);
    const double o2 =
        asymptotic_relay_outage(cfg, h, cand.rho_s_lagrange, cand.rho_d_lagrange);
    cand.chosen = (o1 <= o2) ? 1 : 2;
    return cand;
}

void fill_relay_coeffs(const ScenarioConfig& cfg, const BaseCoeffs& c,
                       AsymptoticCoefficients& out) {
    const int m = cfg.m();
    out.rho_r.resize(m);
    out.alpha.resize(m);
    out.beta.resize(m);
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    for (int i = 0; i < m; ++i) {
        out.rho_r[i] =
            cfg.sigma2_uv() * (c.g_prime - 1.0) / (cfg.delta_u() * cfg.sigma2_rv(i));
    }
    for (int i = 0; i < m; ++i) {
        double alpha;
        if (out.chosen == 0) {
            alpha = 0.5;
        } else if (ds == 0.0 && dd == 0.0) {
            alpha = 0.5;
        } else if (dd == 0.0) {
            alpha = 1.0;
        } else if (ds == 0.0) {
            alpha = 0.0;
        } else {
            allocation::RatioTerms t;
            const double den_d = dd * cfg.sigma2_us();
            const double den_s = ds * cfg.sigma2_ud();
            t.a = 1.0 + out.rho_d * cfg.sigma2_sd() / den_d;
            t.b = out.rho_r[i] * cfg.sigma2_sr(i) / den_d;
            t.c = 1.0 + out.rho_s * cfg.sigma2_sd() / den_s;
            t.d = out.rho_r[i] * cfg.sigma2_dr(i) / den_s;
            alpha = allocation::optimal_alpha(t);
        }
        out.alpha[i] = alpha;
        out.beta[i] = 1.0 - alpha;
    }
}

// Limit of E[exp(-S max(X, 0))] when every mean in X and 1/S grows linearly
// with gamma_u; S0, u0, v0 are the gamma_u-free rates/means.
double ix_limit(double S0, double D, double u0, double v0) {
    if (D == 0.0) return 1.0;
    if (std::isinf(S0)) return v0 / (u0 + v0);
    return (v0 + 1.0 / (S0 + 1.0 / u0)) / (u0 + v0);
}

struct LimitSubsetContext {
    double ux, vx, dx;
    double uy, vy, dy;
    std::vector<double> inv_b;
    std::vector<double> inv_a;
};

LimitSubsetContext make_limit_context(const ScenarioConfig& cfg,
                                      const AsymptoticCoefficients& coeffs) {
    const auto m = static_cast<std::size_t>(cfg.m());
    if (coeffs.rho_r.size() < m || coeffs.alpha.size() < m ||
        coeffs.beta.size() < m) {
        throw validation_error(
            "asymptotic coefficients are missing per-relay entries for M=" +
            std::to_string(cfg.m()));
    }
    require_rho(coeffs.rho_s, "rho_s");
    require_rho(coeffs.rho_d, "rho_d");
    LimitSubsetContext ctx;
    ctx.dx = cfg.delta_d();
    ctx.ux = cfg.delta_d() * cfg.sigma2_us();
    ctx.vx = coeffs.rho_d * cfg.sigma2_sd();
    ctx.dy = cfg.delta_s();
    ctx.uy = cfg.delta_s() * cfg.sigma2_ud();
    ctx.vy = coeffs.rho_s * cfg.sigma2_sd();
    ctx.inv_b.resize(m);
    ctx.inv_a.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        require_rho(coeffs.rho_r[i], "rho_r");
        ctx.inv_b[i] = 1.0 / (coeffs.beta[i] * coeffs.rho_r[i] * cfg.sigma2_sr(i));
        ctx.inv_a[i] = 1.0 / (coeffs.alpha[i] * coeffs.rho_r[i] * cfg.sigma2_dr(i));
    }
    return ctx;
}

double out_given_set_limit(const LimitSubsetContext& ctx, std::uint32_t mask) {
    CompensatedSum acc;
    acc.add(1.0);
    std::uint32_t sub = mask;
    while (sub != 0) {
        double sb = 0.0, sa = 0.0;
        for (std::uint32_t bits = sub; bits != 0; bits &= bits - 1) {
            const int i = std::countr_zero(bits);
            sb += ctx.inv_b[i];
            sa += ctx.inv_a[i];
        }
        const double sign = (std::popcount(sub) % 2 == 0) ? 1.0 : -1.0;
        acc.add(sign * ix_limit(sb, ctx.dx, ctx.ux, ctx.vx) *
                ix_limit(sa, ctx.dy, ctx.uy, ctx.vy));
        sub = (sub - 1) & mask;
    }
    return acc.value();
}

} // namespace

AsymptoticCoefficients asymptotic_allocation(const ScenarioConfig& cfg) {
    const BaseCoeffs c = base_coeffs(cfg);
    AsymptoticCoefficients out;
    out.g_prime = c.g_prime;
    const int m = cfg.m();
    if (m == 0) {
        out.rho_s = out.rho_d = symmetric_rho(c);
        out.chosen = 0;
        out.r_min = -1;
        return out;
    }
    int best_h = 0;
    RhoCandidates best_cand;
    double best_worst = 0.0;
    bool have = false;
    for (int h = 0; h < m; ++h) {
        const RhoCandidates cand = rho_candidates(cfg, c, h);
        const double rs = cand.chosen == 1 ? cand.rho_s_ratio : cand.rho_s_lagrange;
        const double rd = cand.chosen == 1 ? cand.rho_d_ratio : cand.rho_d_lagrange;
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            worst = std::max(worst, asymptotic_relay_outage(cfg, i, rs, rd));
        }
        if (!have || worst < best_worst) {
            have = true;
            best_worst = worst;
            best_h = h;
            best_cand = cand;
        }
    }
    out.r_min = best_h;
    out.chosen = best_cand.chosen;
    out.rho_s_ratio = best_cand.rho_s_ratio;
    out.rho_d_ratio = best_cand.rho_d_ratio;
    out.rho_s_lagrange = best_cand.rho_s_lagrange;
    out.rho_d_lagrange = best_cand.rho_d_lagrange;
    out.rho_s = out.chosen == 1 ? out.rho_s_ratio : out.rho_s_lagrange;
    out.rho_d = out.chosen == 1 ? out.rho_d_ratio : out.rho_d_lagrange;
    fill_relay_coeffs(cfg, c, out);
    return out;
}

AsymptoticCoefficients asymptotic_uniform_allocation(const ScenarioConfig& cfg) {
    const BaseCoeffs c = base_coeffs(cfg);
    AsymptoticCoefficients out;
    out.g_prime = c.g_prime;
    out.rho_s = out.rho_d = symmetric_rho(c);
    out.chosen = 0;
    out.r_min = -1;
    fill_relay_coeffs(cfg, c, out);
    return out;
}

double asymptotic_relay_outage(const ScenarioConfig& cfg, int relay,
                               double rho_s, double rho_d) {
    require_rho(rho_s, "rho_s");
    require_rho(rho_d, "rho_d");
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    const double dt = cfg.delta_total();
    const double su = cfg.sigma2_ur(relay);
    const double ms = rho_s * cfg.sigma2_sr(relay);
    const double md = rho_d * cfg.sigma2_dr(relay);
    if (ds == 0.0 && dd == 0.0) return 0.0;
    if (ds == 0.0) {
        return ensure_probability(dd * su / (dd * su + md), "asymptotic_relay_outage");
    }
    if (dd == 0.0) {
        return ensure_probability(ds * su / (ds * su + ms), "asymptotic_relay_outage");
    }
    if (ms <= 0.0 || md <= 0.0) return 1.0;
    double p;
    if (nearly_equal_rel(ms, md)) {
        const double den = dt * su + md;
        p = (dt * dt * su * su + (ds + dd) * su * md) / (den * den);
    } else {
        const double a = (dt - dd) * su / ms + dd * su / md;
        const double b = (dt - ds) * su / md + ds * su / ms;
        p = (ms * a / (a + 1.0) - md * b / (b + 1.0)) / (ms - md);
    }
    return ensure_probability(p, "asymptotic_relay_outage");
}

double asymptotic_out_given_empty(const ScenarioConfig& cfg,
                                  double rho_s, double rho_d) {
    require_rho(rho_s, "rho_s");
    require_rho(rho_d, "rho_d");
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    double a1 = 0.0;
    if (dd > 0.0) {
        a1 = dd * cfg.sigma2_us() /
             (2.0 * rho_d * cfg.sigma2_sd() + dd * cfg.sigma2_us());
    }
    double a2 = 0.0;
    if (ds > 0.0) {
        a2 = ds * cfg.sigma2_ud() /
             (2.0 * rho_s * cfg.sigma2_sd() + ds * cfg.sigma2_ud());
    }
    return ensure_probability(a1 + a2 - a1 * a2, "asymptotic_out_given_empty");
}

double asymptotic_out_given_set(const ScenarioConfig& cfg, std::uint32_t mask,
                                const AsymptoticCoefficients& coeffs) {
    if (cfg.m() > 31 || (mask >> cfg.m()) != 0) {
        throw validation_error("asymptotic_out_given_set: mask has bits beyond M");
    }
    if (mask == 0) {
        throw domain_error(
            "asymptotic_out_given_set: empty decode set (use "
            "asymptotic_out_given_empty)");
    }
    if (std::popcount(mask) > analytic::kMaxExactRelays) {
        throw capacity_error(
            "asymptotic_out_given_set: sub-subset expansion over more than " +
            std::to_string(analytic::kMaxExactRelays) + " relays refused");
    }
    const LimitSubsetContext ctx = make_limit_context(cfg, coeffs);
    return ensure_probability(out_given_set_limit(ctx, mask),
                              "asymptotic_out_given_set");
}

OutageBreakdown asymptotic_total_outage(const ScenarioConfig& cfg,
                                        const AsymptoticCoefficients& coeffs) {
    const int m = cfg.m();
    if (m > analytic::kMaxExactRelays) {
        throw capacity_error("asymptotic_total_outage: exact enumeration over 2^" +
                             std::to_string(m) + " decode sets refused (M_max = " +
                             std::to_string(analytic::kMaxExactRelays) + ")");
    }
    OutageBreakdown bd;
    std::vector<double> p_fail(m);
    for (int i = 0; i < m; ++i) {
        p_fail[i] = asymptotic_relay_outage(cfg, i, coeffs.rho_s, coeffs.rho_d);
    }
    bd.p_empty = 1.0;
    for (int i = 0; i < m; ++i) bd.p_empty *= p_fail[i];
    bd.p_out_given_empty =
        asymptotic_out_given_empty(cfg, coeffs.rho_s, coeffs.rho_d);

    const LimitSubsetContext ctx = make_limit_context(cfg, coeffs);
    const std::uint32_t n_masks = 1u << m;
    CompensatedSum total;
    total.add(bd.p_empty * bd.p_out_given_empty);
    CompensatedSum partition;
    partition.add(bd.p_empty);
    bd.per_subset.reserve(n_masks - 1);
    for (std::uint32_t mask = 1; mask < n_masks; ++mask) {
        OutageBreakdown::SubsetEntry e;
        e.mask = mask;
        e.p_set = 1.0;
        for (int i = 0; i < m; ++i) {
            e.p_set *= ((mask >> i) & 1u) ? (1.0 - p_fail[i]) : p_fail[i];
        }
        e.p_out_given_set = ensure_probability(out_given_set_limit(ctx, mask),
                                               "asymptotic_out_given_set");
        total.add(e.p_set * e.p_out_given_set);
        partition.add(e.p_set);
        bd.per_subset.push_back(e);
    }
    if (std::fabs(partition.value() - 1.0) > 1e-9) {
        throw numerical_consistency_error(
            "asymptotic_total_outage: decode-set probabilities sum to " +
            std::to_string(partition.value()) + ", expected 1");
    }
    bd.p_total = ensure_probability(total.value(), "asymptotic_total_outage");
    return bd;
}

OutageBreakdown asymptotic_total_outage(const ScenarioConfig& cfg) {
    return asymptotic_total_outage(cfg, asymptotic_allocation(cfg));
}

} // namespace ctwr::asymptotic
