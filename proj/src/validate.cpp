#include "ctwr/validate.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "ctwr/allocation.hpp"
#include "ctwr/analytic.hpp"
#include "ctwr/montecarlo.hpp"
#include "ctwr/oracles.hpp"

namespace ctwr::validate {

namespace {

double binomial_se(double p, std::uint64_t n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::string mask_label(std::uint32_t mask, int m) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < m; ++i) {
        if (!((mask >> i) & 1u)) continue;
        if (!first) s += ',';
        s += relay_node_name(i);
        first = false;
    }
    s += '}';
    return s;
}

// Closed form vs Monte Carlo within 3 standard errors (computed from the
// closed-form value, so a zero-probability prediction demands zero events).
CheckResult mc_check(const std::string& name, double closed, std::uint64_t events,
                     std::uint64_t n) {
    CheckResult r;
    r.name = name;
    r.reference = closed;
    r.value = static_cast<double>(events) / static_cast<double>(n);
    r.tolerance = 3.0 * binomial_se(closed, n);
    r.pass = std::fabs(r.value - r.reference) <= r.tolerance;
    r.detail = std::to_string(events) + "/" + std::to_string(n) + " events";
    return r;
}

CheckResult skipped(const std::string& name, const std::string& why) {
    CheckResult r;
    r.name = name;
    r.pass = true;
    r.detail = "skipped: " + why;
    return r;
}

// Which decode masks get per-mask checks: everything for small M, otherwise
// the singletons and the full set (keeps the report readable).
std::vector<std::uint32_t> report_masks(int m) {
    std::vector<std::uint32_t> masks;
    if (m <= 4) {
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) masks.push_back(mask);
    } else {
        for (int i = 0; i < m; ++i) masks.push_back(1u << i);
        masks.push_back((1u << m) - 1);
    }
    return masks;
}

} // namespace

std::vector<CheckResult> run_validation(const ScenarioConfig& cfg,
                                        std::uint64_t trials, std::uint64_t seed) {
    std::vector<CheckResult> results;
    const int m = cfg.m();
    const PowerAllocation alloc = allocation::full_allocation(cfg);
    const mc::Tallies t = mc::collect(cfg, alloc, trials, seed);

    // Per-relay decode failure: closed form vs MC and vs raw-event quadrature.
    for (int i = 0; i < m; ++i) {
        const double closed = analytic::relay_outage_prob(cfg, i, alloc.Ps, alloc.Pd);
        results.push_back(mc_check("relay_outage[" + relay_node_name(i) + "] vs MC",
                                   closed, t.relay_outage[i], trials));
        CheckResult q;
        q.name = "relay_outage[" + relay_node_name(i) + "] vs quadrature";
        q.value = closed;
        q.reference = oracle::relay_outage_quadrature(cfg, i, alloc.Ps, alloc.Pd);
        q.tolerance = 1e-8;
        q.pass = std::fabs(q.value - q.reference) <= q.tolerance;
        results.push_back(q);
    }

    // Decode-set distribution.
    results.push_back(mc_check("p_empty_set vs MC",
                               analytic::p_empty_set(cfg, alloc.Ps, alloc.Pd),
                               t.mask_count[0], trials));
    const std::vector<std::uint32_t> masks = report_masks(m);
    for (const std::uint32_t mask : masks) {
        results.push_back(
            mc_check("p_decoding_set " + mask_label(mask, m) + " vs MC",
                     analytic::p_decoding_set(cfg, mask, alloc.Ps, alloc.Pd),
                     t.mask_count[mask], trials));
    }
    {
        CheckResult r;
        r.name = "decode-set partition of unity";
        double sum = analytic::p_empty_set(cfg, alloc.Ps, alloc.Pd);
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            sum += analytic::p_decoding_set(cfg, mask, alloc.Ps, alloc.Pd);
        }
        r.value = sum;
        r.reference = 1.0;
        r.tolerance = 1e-9;
        r.pass = std::fabs(sum - 1.0) <= r.tolerance;
        results.push_back(r);
    }

    // Conditional outage given the empty set and given each decode set.
    {
        const std::string name = "p_out_given_empty vs MC (conditional)";
        if (t.mask_count[0] < mc::kMinConditioningCount) {
            results.push_back(skipped(name, "only " +
                                                std::to_string(t.mask_count[0]) +
                                                " empty-set trials"));
        } else {
            results.push_back(mc_check(name,
                                       analytic::p_out_given_empty(cfg, alloc.Ps,
                                                                   alloc.Pd),
                                       t.out_given_mask_opportunistic[0],
                                       t.mask_count[0]));
        }
    }
    for (const std::uint32_t mask : masks) {
        const std::string name =
            "p_out_given_set " + mask_label(mask, m) + " vs MC";
        if (t.mask_count[mask] < mc::kMinConditioningCount) {
            results.push_back(skipped(name, "only " +
                                                std::to_string(t.mask_count[mask]) +
                                                " conditioning trials"));
            continue;
        }
        results.push_back(mc_check(name, analytic::p_out_given_set(cfg, mask, alloc),
                                   t.out_given_mask_opportunistic[mask],
                                   t.mask_count[mask]));
    }
    for (const std::uint32_t mask : masks) {
        if (std::popcount(mask) > 3) continue; // 2-D quadrature cost cap
        const std::string name =
            "p_out_given_set " + mask_label(mask, m) + " vs quadrature";
        if (alloc.forbidden) {
            results.push_back(skipped(name, "no transmit budget (g = 1)"));
            continue;
        }
        CheckResult q;
        q.name = name;
        q.value = analytic::p_out_given_set(cfg, mask, alloc);
        q.reference = oracle::out_given_set_quadrature(cfg, mask, alloc);
        q.tolerance = 1e-6;
        q.pass = std::fabs(q.value - q.reference) <= q.tolerance;
        results.push_back(q);
    }

    // Total secondary outage and the selection-mode ordering.
    results.push_back(mc_check("total_outage vs MC (opportunistic)",
                               analytic::total_outage(cfg, alloc).p_total,
                               t.secondary_opportunistic, trials));
    {
        CheckResult r;
        r.name = "statistical >= opportunistic (paired trials)";
        r.value = static_cast<double>(t.secondary_statistical) /
                  static_cast<double>(trials);
        r.reference = static_cast<double>(t.secondary_opportunistic) /
                      static_cast<double>(trials);
        r.tolerance = 0.0;
        r.pass = t.secondary_statistical >= t.secondary_opportunistic;
        r.detail = "per-trial dominance, no tolerance";
        results.push_back(r);
    }

    // Primary protection: both phases must stay at or below P_th.
    if (alloc.forbidden) {
        results.push_back(skipped("primary phase 1 <= P_th",
                                  "no transmit budget (g = 1)"));
    } else {
        const auto protection = [&](const std::string& name,
                                    std::uint64_t events) {
            CheckResult r;
            r.name = name;
            r.value = static_cast<double>(events) / static_cast<double>(trials);
            r.reference = cfg.pth();
            r.tolerance = 3.0 * binomial_se(cfg.pth(), trials);
            r.pass = r.value <= r.reference + r.tolerance;
            r.detail = "one-sided bound";
            return r;
        };
        results.push_back(protection("primary phase 1 <= P_th", t.primary_phase1));
        results.push_back(protection("primary phase 2 <= P_th (opportunistic)",
                                     t.primary_phase2_opportunistic));
        results.push_back(protection("primary phase 2 <= P_th (statistical)",
                                     t.primary_phase2_statistical));
    }

    // Forward power ratios against a grid search on the same objective.
    for (int i = 0; i < m; ++i) {
        const std::string name =
            "optimal_alpha[" + relay_node_name(i) + "] vs grid search";
        if (alloc.forbidden || cfg.delta_s() == 0.0 || cfg.delta_d() == 0.0) {
            results.push_back(skipped(name, "degenerate ratio problem"));
            continue;
        }
        const oracle::AlphaGridResult grid =
            oracle::alpha_grid_search(cfg, i, alloc.Ps, alloc.Pd, alloc.Pr[i]);
        CheckResult r;
        r.name = name;
        r.value = analytic::st_outage_given_relay(cfg, i, alloc);
        r.reference = grid.objective;
        r.tolerance = 1e-8;
        r.pass = r.value <= r.reference + r.tolerance;
        r.detail = "closed-form objective must not exceed grid minimum";
        results.push_back(r);
    }

    // High-SNR forward-failure closed form, checked in its validity regime.
    {
        const ScenarioConfig cfg6 = cfg.with_n0(cfg.pu() * 1e-6);
        const PowerAllocation alloc6 = allocation::full_allocation(cfg6);
        const mc::Tallies t6 = mc::collect(cfg6, alloc6, trials, seed);
        for (int i = 0; i < m; ++i) {
            results.push_back(
                mc_check("st_outage_given_relay[" + relay_node_name(i) +
                             "] vs MC at N0 = 1e-6 Pu",
                         analytic::st_outage_given_relay(cfg6, i, alloc6),
                         t6.forward_outage[i], trials));
        }
    }

    return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

void print_report(std::ostream& out, const std::vector<CheckResult>& results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-52s %14s %14s %12s %s", "check", "value",
                  "reference", "tolerance", "status");
    out << line << '\n';
    for (const CheckResult& r : results) {
        std::snprintf(line, sizeof line, "%-52s %14.6g %14.6g %12.3g %s",
                      r.name.c_str(), r.value, r.reference, r.tolerance,
                      r.pass ? "PASS" : "FAIL");
        out << line;
        if (!r.detail.empty()) out << "  [" << r.detail << "]";
        out << '\n';
    }
    std::size_t passed = 0;
    for (const CheckResult& r : results) passed += r.pass ? 1 : 0;
    out << passed << "/" << results.size() << " checks passed\n";
}

} // namespace ctwr::validate
