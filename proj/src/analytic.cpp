#include "ctwr/analytic.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "ctwr/detail/numeric.hpp"

namespace ctwr::analytic {

namespace {

using detail::CompensatedSum;
using detail::ensure_probability;
using detail::nearly_equal_rel;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_power(double p, const char* name) {
    if (!std::isfinite(p) || p < 0.0) {
        throw validation_error(std::string(name) + " must be finite and >= 0");
    }
}

void require_alloc(const ScenarioConfig& cfg, const PowerAllocation& alloc) {
    require_power(alloc.Ps, "Ps");
    require_power(alloc.Pd, "Pd");
    const auto m = static_cast<std::size_t>(cfg.m());
    if (alloc.Pr.size() < m || alloc.alpha.size() < m || alloc.beta.size() < m) {
        throw validation_error("allocation is missing per-relay entries for M=" +
                               std::to_string(cfg.m()));
    }
    for (std::size_t i = 0; i < m; ++i) {
        require_power(alloc.Pr[i], "Pr");
        if (!std::isfinite(alloc.alpha[i]) || alloc.alpha[i] < 0.0 ||
            alloc.alpha[i] > 1.0 || !std::isfinite(alloc.beta[i]) ||
            alloc.beta[i] < 0.0 || alloc.beta[i] > 1.0 ||
            std::fabs(alloc.alpha[i] + alloc.beta[i] - 1.0) > 1e-9) {
            throw validation_error(
                "allocation ratios must lie in [0,1] with alpha + beta = 1");
        }
    }
}

void require_mask(const ScenarioConfig& cfg, std::uint32_t mask) {
    if (cfg.m() > 31 || (mask >> cfg.m()) != 0) {
        throw validation_error("decode mask has bits beyond M=" +
                               std::to_string(cfg.m()));
    }
}

// Decode-failure probability of a single data stream: the receiver needs
// SNR delta over a link with mean data SNR m, against primary interference
// with mean w (threshold already folded into the event).
double single_stream_outage(double delta, double m, double w) {
    if (m <= 0.0) return 1.0;
    return 1.0 - std::exp(-delta / m) / (delta * w / m + 1.0);
}

// One factor of the inclusion-exclusion expansion: E[exp(-S max(X, 0))]
// where X has the two-sided exponential density with kink at D, upper-tail
// mean u and lower-tail mean v.
struct IxParts {
    double value = 1.0;
    double lambda = 0.0;
    double omega = 0.0;
    double norm = 0.0;
    bool singular = false;
};

IxParts ix_factor(double S, double D, double u, double v) {
    IxParts parts;
    if (D == 0.0) {
        // X never exceeds 0, the factor is exactly 1.
        parts.value = 1.0;
        parts.lambda = v;
        parts.norm = (u + v) > 0.0 ? 1.0 / (u + v) : 0.0;
        return parts;
    }
    parts.norm = 1.0 / (u + v);
    parts.lambda = v > 0.0 ? v * std::exp(-D / v) : 0.0;
    if (std::isinf(S)) {
        // Only the X <= 0 region survives.
        parts.value = parts.norm * parts.lambda;
        return parts;
    }
    double mid = 0.0;
    if (v > 0.0) {
        const double invv = 1.0 / v;
        if (nearly_equal_rel(S, invv)) {
            // Removable singularity of the difference quotient.
            mid = D * std::exp(-S * D);
            parts.singular = true;
        } else {
            mid = (std::exp(-D / v) - std::exp(-S * D)) / (S - invv);
        }
    }
    const double third = std::exp(-S * D) / (S + 1.0 / u); // u > 0 whenever D > 0
    parts.omega = mid + third;
    parts.value = parts.norm * (parts.lambda + parts.omega);
    return parts;
}

struct SubsetContext {
    double ux, vx, dx; // X side: failure at s of the stream d sent
    double uy, vy, dy; // Y side: failure at d of the stream s sent
    std::vector<double> inv_b; // per relay: 1/(beta gamma_r sigma2_sr)
    std::vector<double> inv_a; // per relay: 1/(alpha gamma_r sigma2_dr)
};

SubsetContext make_subset_context(const ScenarioConfig& cfg,
                                  const PowerAllocation& alloc) {
    SubsetContext ctx;
    const double gu = cfg.gamma_u();
    const double gs = alloc.Ps / cfg.n0();
    const double gd = alloc.Pd / cfg.n0();
    ctx.dx = cfg.delta_d();
    ctx.ux = cfg.delta_d() * gu * cfg.sigma2_us();
    ctx.vx = gd * cfg.sigma2_sd();
    ctx.dy = cfg.delta_s();
    ctx.uy = cfg.delta_s() * gu * cfg.sigma2_ud();
    ctx.vy = gs * cfg.sigma2_sd();
    const int m = cfg.m();
    ctx.inv_b.resize(m);
    ctx.inv_a.resize(m);
    for (int i = 0; i < m; ++i) {
        const double gr = alloc.Pr[i] / cfg.n0();
        ctx.inv_b[i] = 1.0 / (alloc.beta[i] * gr * cfg.sigma2_sr(i));  // inf if 0
        ctx.inv_a[i] = 1.0 / (alloc.alpha[i] * gr * cfg.sigma2_dr(i)); // inf if 0
    }
    return ctx;
}

double out_given_set_impl(const SubsetContext& ctx, std::uint32_t mask) {
    // Inclusion-exclusion over non-empty sub-subsets, enumerated in the
    // canonical descending order so compensated summation is deterministic.
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
        const double fx = ix_factor(sb, ctx.dx, ctx.ux, ctx.vx).value;
        const double fy = ix_factor(sa, ctx.dy, ctx.uy, ctx.vy).value;
        acc.add(sign * fx * fy);
        sub = (sub - 1) & mask;
    }
    return acc.value();
}

} // namespace

double compute_g(const ScenarioConfig& cfg) {
    const double e = std::exp(-cfg.delta_u() / (cfg.gamma_u() * cfg.sigma2_uv()));
    return std::max(e / (1.0 - cfg.pth()), 1.0);
}

InterferenceCoeffs interference_coeffs(const ScenarioConfig& cfg) {
    const double den = cfg.pu() * cfg.sigma2_uv();
    return {cfg.delta_u() * cfg.sigma2_sv() / den,
            cfg.delta_u() * cfg.sigma2_dv() / den};
}

double constraint_lhs(const ScenarioConfig& cfg, double Ps, double Pd) {
    require_power(Ps, "Ps");
    require_power(Pd, "Pd");
    const auto [A, B] = interference_coeffs(cfg);
    return (1.0 + A * Ps) * (1.0 + B * Pd);
}

double primary_outage_phase1(const ScenarioConfig& cfg, double Ps, double Pd) {
    const double e = std::exp(-cfg.delta_u() / (cfg.gamma_u() * cfg.sigma2_uv()));
    return ensure_probability(1.0 - e / constraint_lhs(cfg, Ps, Pd),
                              "primary_outage_phase1");
}

double primary_outage_phase2_relay(const ScenarioConfig& cfg, int relay, double Pr) {
    require_power(Pr, "Pr");
    const double e = std::exp(-cfg.delta_u() / (cfg.gamma_u() * cfg.sigma2_uv()));
    const double lhs =
        cfg.delta_u() * Pr * cfg.sigma2_rv(relay) / (cfg.pu() * cfg.sigma2_uv()) + 1.0;
    return ensure_probability(1.0 - e / lhs, "primary_outage_phase2_relay");
}

double primary_outage_phase2_st(const ScenarioConfig& cfg, double Ps, double Pd) {
    return primary_outage_phase1(cfg, Ps, Pd);
}

RelayOutageTerms relay_outage_terms(const ScenarioConfig& cfg, int relay,
                                    double Ps, double Pd) {
    require_power(Ps, "Ps");
    require_power(Pd, "Pd");
    const double ms = (Ps / cfg.n0()) * cfg.sigma2_sr(relay);
    const double md = (Pd / cfg.n0()) * cfg.sigma2_dr(relay);
    const double w = cfg.gamma_u() * cfg.sigma2_ur(relay);
    if (cfg.delta_s() <= 0.0 || cfg.delta_d() <= 0.0 || ms <= 0.0 || md <= 0.0) {
        throw domain_error(
            "relay_outage_terms: defined only for positive thresholds and powers");
    }
    RelayOutageTerms t;
    if (nearly_equal_rel(ms, md)) {
        t.case_tag = RelayOutageCase::equal_means;
        t.T = 1.0 / (cfg.delta_total() / md + 1.0 / w);
    } else {
        t.case_tag = RelayOutageCase::distinct_means;
        t.A = (cfg.delta_total() - cfg.delta_d()) / ms + cfg.delta_d() / md;
        t.B = cfg.delta_s() / ms + (cfg.delta_total() - cfg.delta_s()) / md;
        t.C = ms / (ms - md);
    }
    return t;
}

double relay_outage_prob(const ScenarioConfig& cfg, int relay, double Ps, double Pd) {
    require_power(Ps, "Ps");
    require_power(Pd, "Pd");
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    const double ms = (Ps / cfg.n0()) * cfg.sigma2_sr(relay);
    const double md = (Pd / cfg.n0()) * cfg.sigma2_dr(relay);
    const double w = cfg.gamma_u() * cfg.sigma2_ur(relay);
    if (ds == 0.0 && dd == 0.0) return 0.0;
    if (ds == 0.0) {
        return ensure_probability(single_stream_outage(dd, md, w), "relay_outage_prob");
    }
    if (dd == 0.0) {
        return ensure_probability(single_stream_outage(ds, ms, w), "relay_outage_prob");
    }
    if (ms <= 0.0 || md <= 0.0) return 1.0;

    const RelayOutageTerms t = relay_outage_terms(cfg, relay, Ps, Pd);
    double p;
    if (t.case_tag == RelayOutageCase::equal_means) {
        p = 1.0 - (t.T * std::exp(-cfg.delta_total() / md) / w) *
                      (1.0 + ds * dd * (1.0 + t.T) / md);
    } else {
        p = 1.0 - t.C * std::exp(-t.A) / (t.A * w + 1.0) -
            (1.0 - t.C) * std::exp(-t.B) / (t.B * w + 1.0);
    }
    return ensure_probability(p, "relay_outage_prob");
}

double st_outage_given_relay(const ScenarioConfig& cfg, int relay,
                             const PowerAllocation& alloc) {
    require_alloc(cfg, alloc);
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    const double pu = cfg.pu();
    const double pr = alloc.Pr[relay];
    double a_fail = 0.0; // s fails to decode the stream d sent
    if (dd > 0.0) {
        const double den = pu * dd * cfg.sigma2_us();
        a_fail = 1.0 / (1.0 + alloc.Pd * cfg.sigma2_sd() / den) *
                 1.0 / (1.0 + alloc.beta[relay] * pr * cfg.sigma2_sr(relay) / den);
    }
    double b_fail = 0.0; // d fails to decode the stream s sent
    if (ds > 0.0) {
        const double den = pu * ds * cfg.sigma2_ud();
        b_fail = 1.0 / (1.0 + alloc.Ps * cfg.sigma2_sd() / den) *
                 1.0 / (1.0 + alloc.alpha[relay] * pr * cfg.sigma2_dr(relay) / den);
    }
    return ensure_probability(a_fail + b_fail - a_fail * b_fail,
                              "st_outage_given_relay");
}

double p_empty_set(const ScenarioConfig& cfg, double Ps, double Pd) {
    double p = 1.0;
    for (int i = 0; i < cfg.m(); ++i) {
        p *= relay_outage_prob(cfg, i, Ps, Pd);
    }
    return ensure_probability(p, "p_empty_set");
}

double p_out_given_empty(const ScenarioConfig& cfg, double Ps, double Pd) {
    require_power(Ps, "Ps");
    require_power(Pd, "Pd");
    const double gu = cfg.gamma_u();
    // Success factor of one direct stream: data SNR doubled by coherent
    // combination of the two transmissions.
    const auto factor = [&](double delta, double g_data, double s_int) {
        if (delta == 0.0) return 1.0;
        if (g_data <= 0.0) return 0.0;
        const double twice = 2.0 * g_data * cfg.sigma2_sd();
        return twice * std::exp(-delta / twice) / (twice + delta * gu * s_int);
    };
    const double p = 1.0 - factor(cfg.delta_d(), Pd / cfg.n0(), cfg.sigma2_us()) *
                               factor(cfg.delta_s(), Ps / cfg.n0(), cfg.sigma2_ud());
    return ensure_probability(p, "p_out_given_empty");
}

double p_decoding_set(const ScenarioConfig& cfg, std::uint32_t mask,
                      double Ps, double Pd) {
    require_mask(cfg, mask);
    double p = 1.0;
    for (int i = 0; i < cfg.m(); ++i) {
        const double po = relay_outage_prob(cfg, i, Ps, Pd);
        p *= ((mask >> i) & 1u) ? (1.0 - po) : po;
    }
    return ensure_probability(p, "p_decoding_set");
}

SubsetTerms subset_terms(const ScenarioConfig& cfg, std::uint32_t sub_mask,
                         const PowerAllocation& alloc) {
    require_alloc(cfg, alloc);
    require_mask(cfg, sub_mask);
    if (sub_mask == 0) {
        throw domain_error("subset_terms: sub-subset must be non-empty");
    }
    if (cfg.delta_s() <= 0.0 || cfg.delta_d() <= 0.0 || alloc.Ps <= 0.0 ||
        alloc.Pd <= 0.0) {
        throw domain_error(
            "subset_terms: defined only for positive thresholds and ST powers");
    }
    const SubsetContext ctx = make_subset_context(cfg, alloc);
    double sb = 0.0, sa = 0.0;
    for (std::uint32_t bits = sub_mask; bits != 0; bits &= bits - 1) {
        const int i = std::countr_zero(bits);
        sb += ctx.inv_b[i];
        sa += ctx.inv_a[i];
    }
    const IxParts fx = ix_factor(sb, ctx.dx, ctx.ux, ctx.vx);
    const IxParts fy = ix_factor(sa, ctx.dy, ctx.uy, ctx.vy);
    SubsetTerms t;
    t.omega = fx.omega;
    t.lambda = fx.lambda;
    t.xi = fy.omega;
    t.psi = fy.lambda;
    t.norm_x = fx.norm;
    t.norm_y = fy.norm;
    t.singular_x = fx.singular;
    t.singular_y = fy.singular;
    return t;
}

double p_out_given_set(const ScenarioConfig& cfg, std::uint32_t mask,
                       const PowerAllocation& alloc) {
    require_alloc(cfg, alloc);
    require_mask(cfg, mask);
    if (mask == 0) {
        throw domain_error("p_out_given_set: empty decode set (use p_out_given_empty)");
    }
    if (std::popcount(mask) > kMaxExactRelays) {
        throw capacity_error("p_out_given_set: sub-subset expansion over more than " +
                             std::to_string(kMaxExactRelays) +
                             " relays refused (exponential cost)");
    }
    const SubsetContext ctx = make_subset_context(cfg, alloc);
    return ensure_probability(out_given_set_impl(ctx, mask), "p_out_given_set");
}

OutageBreakdown total_outage(const ScenarioConfig& cfg, const PowerAllocation& alloc) {
    require_alloc(cfg, alloc);
    const int m = cfg.m();
    if (m > kMaxExactRelays) {
        throw capacity_error("total_outage: exact enumeration over 2^" +
                             std::to_string(m) +
                             " decode sets refused (M_max = " +
                             std::to_string(kMaxExactRelays) + ")");
    }
    OutageBreakdown bd;
    std::vector<double> p_fail(m);
    for (int i = 0; i < m; ++i) {
        p_fail[i] = relay_outage_prob(cfg, i, alloc.Ps, alloc.Pd);
    }
    bd.p_empty = 1.0;
    for (int i = 0; i < m; ++i) bd.p_empty *= p_fail[i];
    bd.p_out_given_empty = p_out_given_empty(cfg, alloc.Ps, alloc.Pd);

    const SubsetContext ctx = make_subset_context(cfg, alloc);
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
        e.p_out_given_set =
            ensure_probability(out_given_set_impl(ctx, mask), "p_out_given_set");
        total.add(e.p_set * e.p_out_given_set);
        partition.add(e.p_set);
        bd.per_subset.push_back(e);
    }
    if (std::fabs(partition.value() - 1.0) > 1e-9) {
        throw numerical_consistency_error(
            "total_outage: decode-set probabilities sum to " +
            std::to_string(partition.value()) + ", expected 1");
    }
    bd.p_total = ensure_probability(total.value(), "total_outage");
    return bd;
}

} // namespace ctwr::analytic
