#pragma once

#include <cstdint>
#include <functional>

#include "ctwr/model.hpp"

namespace ctwr::oracle {

// Independent reference implementations used to cross-check the closed
// forms. They share no algebra with the analytic module: probabilities are
// rebuilt from the raw event definitions and integrated numerically.

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

// Per-relay decode-failure probability via nested quadrature of the raw
// event P(gs < delta_s or gd < delta_d or gs + gd < delta_total) over the
// three channel densities. Requires positive thresholds and powers.
double relay_outage_quadrature(const ScenarioConfig& cfg, int relay,
                               double Ps, double Pd, double tol = 1e-10);

// P(secondary outage | decode set = mask) via 2-D quadrature over the two
// kinked two-sided-exponential densities, integrating the product of
// per-relay forward-failure probabilities directly (no inclusion-exclusion,
// no closed-form factor reuse). Requires positive ST powers.
double out_given_set_quadrature(const ScenarioConfig& cfg, std::uint32_t mask,
                                const PowerAllocation& alloc, double tol = 1e-9);

// Grid search over alpha in [0,1] minimizing the high-SNR forward-failure
// probability of one relay (ties to the smaller alpha).
struct AlphaGridResult {
    double alpha = 0.5;
    double objective = 1.0;
    double cell = 0.0; // grid spacing
};
AlphaGridResult alpha_grid_search(const ScenarioConfig& cfg, int relay,
                                  double Ps, double Pd, double Pr,
                                  int n_points = 10000);

} // namespace ctwr::oracle
