#pragma once

#include <vector>

#include "ctwr/model.hpp"

namespace ctwr::asymptotic {

// Limits of the allocation as the primary SNR grows without bound. Powers
// scale linearly with gamma_u, so the limits are stated as coefficients:
// P = rho * gamma_u * N0. All closed-form allocation expressions are
// homogeneous of degree -1 in the constraint coefficients (A, B), so the
// exact limits are those same expressions evaluated at the gamma_u-free
// values A0 = delta_u sigma2_sv / sigma2_uv, B0 = delta_u sigma2_dv /
// sigma2_uv and g' = 1/(1 - P_th); no series expansion is involved.
struct AsymptoticCoefficients {
    double g_prime = 1.0;
    double rho_s = 0.0; // chosen branch
    double rho_d = 0.0;
    double rho_s_ratio = 0.0;    // ratio-branch values
    double rho_d_ratio = 0.0;
    double rho_s_lagrange = 0.0; // lagrange-branch values
    double rho_d_lagrange = 0.0;
    int chosen = 0;  // 0 = symmetric/uniform split, 1 = ratio, 2 = lagrange
    int r_min = -1;  // limiting-relay hypothesis (-1 when not applicable)
    std::vector<double> rho_r;
    std::vector<double> alpha;
    std::vector<double> beta;
};

// Limit of the closed-form optimized allocation (mode "lemma").
AsymptoticCoefficients asymptotic_allocation(const ScenarioConfig& cfg);

// Limit of the uniform allocation (symmetric split, alpha = 1/2).
AsymptoticCoefficients asymptotic_uniform_allocation(const ScenarioConfig& cfg);

// Limit of the per-relay decode-failure probability when the ST powers scale
// as rho_s, rho_d. Depends only on thresholds and link statistics.
double asymptotic_relay_outage(const ScenarioConfig& cfg, int relay,
                               double rho_s, double rho_d);

// Limit of P(secondary outage | empty decode set) under scaled powers.
double asymptotic_out_given_empty(const ScenarioConfig& cfg,
                                  double rho_s, double rho_d);

// Limit of P(secondary outage | decode set = mask) under scaled powers.
double asymptotic_out_given_set(const ScenarioConfig& cfg, std::uint32_t mask,
                                const AsymptoticCoefficients& coeffs);

// The outage floor: total secondary outage in the large-gamma_u limit. By
// construction independent of gamma_u and N0 (only thresholds, P_th and link
// statistics enter). The overload without coefficients uses
// asymptotic_allocation(cfg).
OutageBreakdown asymptotic_total_outage(const ScenarioConfig& cfg,
                                        const AsymptoticCoefficients& coeffs);
OutageBreakdown asymptotic_total_outage(const ScenarioConfig& cfg);

} // namespace ctwr::asymptotic
