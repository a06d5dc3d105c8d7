#pragma once

#include <cstdint>
#include <utility>

#include "ctwr/model.hpp"

namespace ctwr::allocation {

// Both closed-form ST power pairs on the QoS constraint boundary, built to
// minimize the decode-failure probability of the limiting relay:
//  - ratio branch: fixes Pd/Ps = sigma2_sr/sigma2_dr of that relay (equalizes
//    the two received mean SNRs) and solves the boundary equation;
//  - lagrange branch: stationary point of the high-SNR decode-failure
//    exponent on the boundary.
// `chosen` selects the pair with the lower exact decode-failure probability
// (ties to the ratio branch); `achieved` is that probability.
struct StPowerCandidates {
    double Ps_ratio = 0.0;
    double Pd_ratio = 0.0;
    double Ps_lagrange = 0.0;
    double Pd_lagrange = 0.0;
    int chosen = 1; // 1 = ratio branch, 2 = lagrange branch
    double achieved = 1.0;

    double Ps() const { return chosen == 1 ? Ps_ratio : Ps_lagrange; }
    double Pd() const { return chosen == 1 ? Pd_ratio : Pd_lagrange; }
};

// Optimal ST powers under the hypothesis that `limiting_relay` is the relay
// with the worst decode-failure probability. Throws secondary_forbidden when
// g = 1.
StPowerCandidates optimal_st_powers(const ScenarioConfig& cfg, int limiting_relay);

// Resolves the circular dependence between the limiting relay and the powers
// by enumeration: evaluates optimal_st_powers under every hypothesis and
// keeps the one minimizing the worst per-relay decode-failure probability
// (ties to the lowest index). Requires M >= 1.
struct LimitingRelayResult {
    int r_min = 0;
    StPowerCandidates powers;
};
LimitingRelayResult find_r_min(const ScenarioConfig& cfg);

// Largest relay transmit power that keeps the phase-2 primary outage at or
// below P_th; the cap is attained with equality. Requires delta_u > 0.
double optimal_relay_power(const ScenarioConfig& cfg, int relay);

// Constants of the forward power-ratio closed form for relay i:
//   a = 1 + Pd sigma2_sd / (Pu delta_d sigma2_us)
//   b = Pr sigma2_sr / (Pu delta_d sigma2_us)
//   c = 1 + Ps sigma2_sd / (Pu delta_s sigma2_ud)
//   d = Pr sigma2_dr / (Pu delta_s sigma2_ud)
struct RatioTerms {
    double a = 1.0;
    double b = 0.0;
    double c = 1.0;
    double d = 0.0;
};
RatioTerms ratio_terms(const ScenarioConfig& cfg, int relay,
                       double Ps, double Pd, double Pr);

// Closed-form minimizer of the high-SNR forward-failure probability
// A + B - A*B over alpha in [0,1]. Two branches: ab = cd (balanced) and the
// general stationary point. Throws numerical_consistency_error if the
// formula lands outside [0,1] by more than 1e-9 (a boundary-optimum regime
// outside the closed form's premises).
double optimal_alpha(const RatioTerms& t);

// (alpha_i, beta_i) for relay i given the powers; handles the zero-threshold
// corners (delta_d = 0 -> alpha = 1, delta_s = 0 -> alpha = 0, both -> 1/2).
// Requires Pr > 0.
std::pair<double, double> optimal_ratios(const ScenarioConfig& cfg, int relay,
                                         double Ps, double Pd, double Pr);

// Statistical relay choice: argmin of st_outage_given_relay over the decode
// set, ties to the lowest index. Throws domain_error on an empty mask.
int select_relay(const ScenarioConfig& cfg, std::uint32_t mask,
                 const PowerAllocation& alloc);

// Symmetric boundary split Ps = Pd solving (1 + A*P)(1 + B*P) = g; used for
// the uniform scheme and the no-relay fallback. Requires delta_u > 0 (the
// constraint vanishes at delta_u = 0 and the boundary is unbounded). Throws
// secondary_forbidden when g = 1.
double symmetric_boundary_power(const ScenarioConfig& cfg);

// Full closed-form allocation: limiting-relay ST powers, per-relay power
// caps, per-relay optimal ratios. Returns the all-zero allocation tagged
// forbidden when g = 1. M = 0 falls back to the symmetric split.
PowerAllocation full_allocation(const ScenarioConfig& cfg);

// Uniform scheme: symmetric boundary split, relay power caps, alpha = 1/2.
PowerAllocation uniform_allocation(const ScenarioConfig& cfg);

PowerAllocation make_allocation(const ScenarioConfig& cfg, AllocMode mode);

// True when alloc satisfies the QoS constraint, the per-relay power caps and
// alpha + beta = 1, all within relative tolerance.
bool allocation_feasible(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                         double rel_tol = 1e-9);

} // namespace ctwr::allocation
