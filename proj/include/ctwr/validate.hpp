#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctwr/model.hpp"

namespace ctwr::validate {

// One oracle check: |value - reference| must not exceed tolerance.
struct CheckResult {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

// Full oracle battery for one scenario: every closed form against its Monte
// Carlo estimate (3 standard errors), the conditional-outage closed form
// against 2-D quadrature, the power-ratio closed form against a grid search,
// the decode-set partition of unity, and primary protection in both phases.
// The high-SNR forward-failure form is additionally checked at
// N0 = 1e-6 * Pu (its validity regime).
std::vector<CheckResult> run_validation(const ScenarioConfig& cfg,
                                        std::uint64_t trials, std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);
void print_report(std::ostream& out, const std::vector<CheckResult>& results);

} // namespace ctwr::validate
