#pragma once

#include <cstdint>

#include "ctwr/model.hpp"

namespace ctwr::analytic {

// Relay count cap for exact decode-set enumeration (2^M subsets, each with a
// sub-subset expansion); beyond this the operations refuse instead of
// silently approximating.
inline constexpr int kMaxExactRelays = 16;

// QoS headroom factor g = max{ exp(-delta_u / (gamma_u sigma2_uv)) / (1 - P_th), 1 }.
// The secondary may transmit only while the primary phase-1 outage stays at
// or below P_th; g = 1 means no transmit budget exists.
double compute_g(const ScenarioConfig& cfg);

// Coefficients of the QoS constraint: the primary phase-1 outage equals
// 1 - exp(-delta_u/(gamma_u sigma2_uv)) / ((1 + A*Ps)(1 + B*Pd)), so the
// constraint is (1 + A*Ps)(1 + B*Pd) <= g.
struct InterferenceCoeffs {
    double A = 0.0; // delta_u sigma2_sv / (Pu sigma2_uv)
    double B = 0.0; // delta_u sigma2_dv / (Pu sigma2_uv)
};
InterferenceCoeffs interference_coeffs(const ScenarioConfig& cfg);

// Left-hand side (1 + A*Ps)(1 + B*Pd) of the QoS constraint.
double constraint_lhs(const ScenarioConfig& cfg, double Ps, double Pd);

// Primary outage during phase 1 (both STs interfere at v).
double primary_outage_phase1(const ScenarioConfig& cfg, double Ps, double Pd);

// Primary outage during phase 2 when relay i transmits with power Pr.
double primary_outage_phase2_relay(const ScenarioConfig& cfg, int relay, double Pr);

// Primary outage during phase 2 when the decode set was empty and both STs
// retransmit (same interference pattern as phase 1).
double primary_outage_phase2_st(const ScenarioConfig& cfg, double Ps, double Pd);

// Constants of the per-relay decode-failure closed form. Only defined on the
// non-degenerate path (both thresholds and both ST powers positive).
enum class RelayOutageCase { equal_means, distinct_means };
struct RelayOutageTerms {
    RelayOutageCase case_tag = RelayOutageCase::equal_means;
    double T = 0.0; // equal-means constant 1 / (delta_total/m + 1/w)
    double A = 0.0; // distinct-means exponent of the first term
    double B = 0.0; // distinct-means exponent of the second term
    double C = 0.0; // distinct-means mixing weight ms / (ms - md)
};
RelayOutageTerms relay_outage_terms(const ScenarioConfig& cfg, int relay,
                                    double Ps, double Pd);

// Probability that relay i fails to decode the combined ST transmission in
// phase 1 (either individual rate or the sum rate unreachable).
double relay_outage_prob(const ScenarioConfig& cfg, int relay, double Ps, double Pd);

// High-SNR (N0 -> 0) approximation of the probability that the exchange
// fails when relay i forwards: A + B - A*B with each factor a product of two
// rational terms in the powers. Exact in the noise-free limit.
double st_outage_given_relay(const ScenarioConfig& cfg, int relay,
                             const PowerAllocation& alloc);

// P(decode set empty) = product of per-relay failure probabilities.
double p_empty_set(const ScenarioConfig& cfg, double Ps, double Pd);

// P(secondary outage | empty decode set): both STs retransmit on the direct
// link, coherently combined with the first copy (factor 2 on the data SNR).
double p_out_given_empty(const ScenarioConfig& cfg, double Ps, double Pd);

// P(decode set = mask): relays decode independently.
double p_decoding_set(const ScenarioConfig& cfg, std::uint32_t mask,
                      double Ps, double Pd);

// Terms of one sub-subset in the inclusion-exclusion expansion of
// p_out_given_set. With S_b = sum over the sub-subset of 1/(beta_i gamma_ri
// sigma2_sr_i) and S_a the alpha-side analogue:
//   relay-side factor  = (Omega + Lambda) * norm_x
//   mirror-side factor = (Xi + Psi) * norm_y
// Omega/Xi collect the finite-power terms and contain a removable
// singularity at S = 1/v, replaced by its limit when within relative 1e-9
// (flagged via singular_x / singular_y).
struct SubsetTerms {
    double omega = 0.0;
    double xi = 0.0;
    double lambda = 0.0;
    double psi = 0.0;
    double norm_x = 0.0;
    double norm_y = 0.0;
    bool singular_x = false;
    bool singular_y = false;
};
SubsetTerms subset_terms(const ScenarioConfig& cfg, std::uint32_t sub_mask,
                         const PowerAllocation& alloc);

// P(secondary outage | decode set = mask) under opportunistic forwarding:
// outage only if every relay in the mask fails at least one forward link.
// Exact closed form by inclusion-exclusion over sub-subsets.
double p_out_given_set(const ScenarioConfig& cfg, std::uint32_t mask,
                       const PowerAllocation& alloc);

// Total secondary outage: mixture over all decode sets. M <= kMaxExactRelays.
OutageBreakdown total_outage(const ScenarioConfig& cfg, const PowerAllocation& alloc);

} // namespace ctwr::analytic
