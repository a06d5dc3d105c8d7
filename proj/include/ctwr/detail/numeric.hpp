#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ctwr/errors.hpp"

namespace ctwr::detail {

// Slack for probability range checks: values inside [-kProbSlack, 1+kProbSlack]
// are clamped to [0,1]; anything further out is treated as a formula bug.
inline constexpr double kProbSlack = 1e-12;

// Relative tolerance used for branch decisions near removable singularities
// (two-exponential difference quotients, equal-mean case splits) and for
// the power-ratio range check.
inline constexpr double kBranchEps = 1e-9;

// Validates that x is a probability up to kProbSlack and clamps it to [0,1].
inline double ensure_probability(double x, const char* context) {
    if (!std::isfinite(x) || x < -kProbSlack || x > 1.0 + kProbSlack) {
        throw numerical_consistency_error(std::string(context) +
                                          ": value " + std::to_string(x) +
                                          " is not a probability");
    }
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

// True when a and b agree within relative tolerance eps (scaled by the
// larger magnitude); used to pick stable branches near removable
// singularities.
inline bool nearly_equal_rel(double a, double b, double eps = kBranchEps) {
    double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= eps * scale;
}

// Neumaier compensated summation; deterministic for a fixed input order.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace ctwr::detail
