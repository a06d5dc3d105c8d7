#include "ctwr/allocation.hpp"

#include <cmath>
#include <string>

#include "ctwr/analytic.hpp"
#include "ctwr/detail/numeric.hpp"

namespace ctwr::allocation {

namespace {

using detail::nearly_equal_rel;

void require_positive_delta_u(const ScenarioConfig& cfg, const char* op) {
    if (cfg.delta_u() == 0.0) {
        throw validation_error(std::string(op) +
                               ": the QoS constraint vanishes at delta_u = 0 and the "
                               "power budget is unbounded");
    }
}

double checked_g(const ScenarioConfig& cfg) {
    const double g = analytic::compute_g(cfg);
    if (g <= 1.0) {
        throw secondary_forbidden(
            "secondary transmission forbidden: the primary outage target is "
            "violated even with silent secondaries (g = 1)");
    }
    return g;
}

double worst_relay_outage(const ScenarioConfig& cfg, double Ps, double Pd) {
    double worst = 0.0;
    for (int i = 0; i < cfg.m(); ++i) {
        worst = std::max(worst, analytic::relay_outage_prob(cfg, i, Ps, Pd));
    }
    return worst;
}

PowerAllocation forbidden_allocation(const ScenarioConfig& cfg) {
    PowerAllocation alloc;
    alloc.Ps = 0.0;
    alloc.Pd = 0.0;
    alloc.Pr.assign(cfg.m(), 0.0);
    alloc.alpha.assign(cfg.m(), 0.5);
    alloc.beta.assign(cfg.m(), 0.5);
    alloc.g = 1.0;
    alloc.forbidden = true;
    return alloc;
}

} // namespace

StPowerCandidates optimal_st_powers(const ScenarioConfig& cfg, int limiting_relay) {
    require_positive_delta_u(cfg, "optimal_st_powers");
    const double g = checked_g(cfg);
    const auto [A, B] = analytic::interference_coeffs(cfg);
    const double kappa = cfg.sigma2_sr(limiting_relay) / cfg.sigma2_dr(limiting_relay);

    StPowerCandidates cand;
    // Ratio branch: Pd = kappa * Ps equalizes the relay's two received mean
    // SNRs; substituting into (1 + A Ps)(1 + B Pd) = g gives a quadratic.
    {
        const double p = 1.0 / (2.0 * A);
        const double q = 1.0 / (2.0 * B * kappa);
        cand.Ps_ratio = std::sqrt((q - p) * (q - p) + 4.0 * g * p * q) - q - p;
        cand.Pd_ratio = kappa * cand.Ps_ratio;
    }
    // Lagrange branch: stationary point of the high-SNR decode-failure
    // exponent on the boundary. Undefined when both thresholds vanish (the
    // objective is identically zero); fall back to the ratio branch there.
    if (cfg.delta_s() == 0.0 && cfg.delta_d() == 0.0) {
        cand.Ps_lagrange = cand.Ps_ratio;
        cand.Pd_lagrange = cand.Pd_ratio;
        cand.chosen = 1;
        cand.achieved = 0.0;
        return cand;
    }
    {
        const double x = cfg.delta_d() * cfg.sigma2_sr(limiting_relay) /
                         (cfg.delta_s() * cfg.sigma2_dr(limiting_relay));
        cand.Ps_lagrange = (g - 1.0) / (std::sqrt(x * A * B * g) + A);
        cand.Pd_lagrange = (g - 1.0) / (std::sqrt(A * B * g / x) + B);
    }
    const double o1 =
        analytic::relay_outage_prob(cfg, limiting_relay, cand.Ps_ratio, cand.Pd_ratio);
    const double o2 = analytic::relay_outage_prob(cfg, limiting_relay,
                                                  cand.Ps_lagrange, cand.Pd_lagrange);
    cand.chosen = (o1 <= o2) ? 1 : 2;
    cand.achieved = std::min(o1, o2);
    return cand;
}

LimitingRelayResult find_r_min(const ScenarioConfig& cfg) {
    if (cfg.m() < 1) {
        throw domain_error("find_r_min: requires at least one relay");
    }
    LimitingRelayResult best;
    double best_worst = 0.0;
    bool have = false;
    for (int h = 0; h < cfg.m(); ++h) {
        const StPowerCandidates cand = optimal_st_powers(cfg, h);
        const double worst = worst_relay_outage(cfg, cand.Ps(), cand.Pd());
        if (!have || worst < best_worst) {
            have = true;
            best_worst = worst;
            best.r_min = h;
            best.powers = cand;
        }
    }
    return best;
}

double optimal_relay_power(const ScenarioConfig& cfg, int relay) {
    require_positive_delta_u(cfg, "optimal_relay_power");
    const double g = analytic::compute_g(cfg);
    return cfg.pu() * cfg.sigma2_uv() * (g - 1.0) /
           (cfg.delta_u() * cfg.sigma2_rv(relay));
}

RatioTerms ratio_terms(const ScenarioConfig& cfg, int relay,
                       double Ps, double Pd, double Pr) {
    if (cfg.delta_s() == 0.0 || cfg.delta_d() == 0.0) {
        throw domain_error(
            "ratio_terms: defined only for positive thresholds (use the "
            "zero-threshold corners of optimal_ratios)");
    }
    if (!std::isfinite(Ps) || Ps < 0.0 || !std::isfinite(Pd) || Pd < 0.0 ||
        !std::isfinite(Pr) || Pr < 0.0) {
        throw validation_error("ratio_terms: powers must be finite and >= 0");
    }
    const double den_d = cfg.pu() * cfg.delta_d() * cfg.sigma2_us();
    const double den_s = cfg.pu() * cfg.delta_s() * cfg.sigma2_ud();
    RatioTerms t;
    t.a = 1.0 + Pd * cfg.sigma2_sd() / den_d;
    t.b = Pr * cfg.sigma2_sr(relay) / den_d;
    t.c = 1.0 + Ps * cfg.sigma2_sd() / den_s;
    t.d = Pr * cfg.sigma2_dr(relay) / den_s;
    return t;
}

double optimal_alpha(const RatioTerms& t) {
    if (!std::isfinite(t.a) || t.a < 1.0 || !std::isfinite(t.c) || t.c < 1.0 ||
        !std::isfinite(t.b) || t.b <= 0.0 || !std::isfinite(t.d) || t.d <= 0.0) {
        throw validation_error(
            "optimal_alpha: requires a, c >= 1 and b, d > 0 (positive relay power)");
    }
    const double ab = t.a * t.b;
    const double cd = t.c * t.d;
    double alpha;
    if (nearly_equal_rel(ab, cd)) {
        // Balanced case: the stationary-point quotient degenerates.
        alpha = (t.b * t.d + t.d - t.b) / (2.0 * t.b * t.d);
    } else {
        const double root =
            std::sqrt((ab - t.d + t.a * t.d + ab * t.d) *
                      (t.b * t.c - t.b + cd + t.b * cd)) /
            (std::sqrt(t.b * t.d) * (ab - cd));
        alpha = (ab + t.a + t.c - 1.0) / (ab - cd) - root;
    }
    if (alpha < -1e-9 || alpha > 1.0 + 1e-9) {
        throw numerical_consistency_error(
            "optimal_alpha: stationary point " + std::to_string(alpha) +
            " lies outside [0,1]; the optimum sits on the boundary and the "
            "interior closed form does not apply");
    }
    return std::min(1.0, std::max(0.0, alpha));
}

std::pair<double, double> optimal_ratios(const ScenarioConfig& cfg, int relay,
                                         double Ps, double Pd, double Pr) {
    if (!std::isfinite(Pr) || Pr <= 0.0) {
        throw validation_error("optimal_ratios: requires positive relay power");
    }
    const double ds = cfg.delta_s();
    const double dd = cfg.delta_d();
    if (ds == 0.0 && dd == 0.0) return {0.5, 0.5};
    if (dd == 0.0) return {1.0, 0.0}; // only the s -> d stream needs help
    if (ds == 0.0) return {0.0, 1.0}; // only the d -> s stream needs help
    const double alpha = optimal_alpha(ratio_terms(cfg, relay, Ps, Pd, Pr));
    return {alpha, 1.0 - alpha};
}

int select_relay(const ScenarioConfig& cfg, std::uint32_t mask,
                 const PowerAllocation& alloc) {
    if (mask == 0) {
        throw domain_error("select_relay: empty decode set");
    }
    if (cfg.m() > 31 || (mask >> cfg.m()) != 0) {
        throw validation_error("select_relay: mask has bits beyond M");
    }
    int best = -1;
    double best_val = 0.0;
    for (int i = 0; i < cfg.m(); ++i) {
        if (!((mask >> i) & 1u)) continue;
        const double v = analytic::st_outage_given_relay(cfg, i, alloc);
        if (best < 0 || v < best_val) {
            best = i;
            best_val = v;
        }
    }
    return best;
}

double symmetric_boundary_power(const ScenarioConfig& cfg) {
    require_positive_delta_u(cfg, "symmetric_boundary_power");
    const double g = checked_g(cfg);
    const auto [A, B] = analytic::interference_coeffs(cfg);
    const double s = A + B;
    return (-s + std::sqrt(s * s + 4.0 * A * B * (g - 1.0))) / (2.0 * A * B);
}

PowerAllocation full_allocation(const ScenarioConfig& cfg) {
    const double g = analytic::compute_g(cfg);
    if (g <= 1.0) return forbidden_allocation(cfg);
    PowerAllocation alloc;
    alloc.g = g;
    const int m = cfg.m();
    if (m == 0) {
        alloc.Ps = alloc.Pd = symmetric_boundary_power(cfg);
        return alloc;
    }
    const LimitingRelayResult lim = find_r_min(cfg);
    alloc.Ps = lim.powers.Ps();
    alloc.Pd = lim.powers.Pd();
    alloc.Pr.resize(m);
    alloc.alpha.resize(m);
    alloc.beta.resize(m);
    for (int i = 0; i < m; ++i) {
        alloc.Pr[i] = optimal_relay_power(cfg, i);
        const auto [a, b] = optimal_ratios(cfg, i, alloc.Ps, alloc.Pd, alloc.Pr[i]);
        alloc.alpha[i] = a;
        alloc.beta[i] = b;
    }
    return alloc;
}

PowerAllocation uniform_allocation(const ScenarioConfig& cfg) {
    const double g = analytic::compute_g(cfg);
    if (g <= 1.0) return forbidden_allocation(cfg);
    PowerAllocation alloc;
    alloc.g = g;
    alloc.Ps = alloc.Pd = symmetric_boundary_power(cfg);
    const int m = cfg.m();
    alloc.Pr.resize(m);
    alloc.alpha.assign(m, 0.5);
    alloc.beta.assign(m, 0.5);
    for (int i = 0; i < m; ++i) {
        alloc.Pr[i] = optimal_relay_power(cfg, i);
    }
    return alloc;
}

PowerAllocation make_allocation(const ScenarioConfig& cfg, AllocMode mode) {
    return mode == AllocMode::uniform ? uniform_allocation(cfg)
                                      : full_allocation(cfg);
}

bool allocation_feasible(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                         double rel_tol) {
    const auto m = static_cast<std::size_t>(cfg.m());
    if (alloc.Pr.size() < m || alloc.alpha.size() < m || alloc.beta.size() < m) {
        return false;
    }
    if (!(alloc.Ps >= 0.0) || !(alloc.Pd >= 0.0)) return false;
    const double g = analytic::compute_g(cfg);
    if (analytic::constraint_lhs(cfg, alloc.Ps, alloc.Pd) > g * (1.0 + rel_tol)) {
        return false;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!(alloc.Pr[i] >= 0.0)) return false;
        if (cfg.delta_u() > 0.0) {
            const double cap = optimal_relay_power(cfg, static_cast<int>(i));
            if (alloc.Pr[i] > cap * (1.0 + rel_tol)) return false;
        }
        if (std::fabs(alloc.alpha[i] + alloc.beta[i] - 1.0) > rel_tol) return false;
    }
    return true;
}

} // namespace ctwr::allocation
