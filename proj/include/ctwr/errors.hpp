#pragma once

#include <stdexcept>
#include <string>

namespace ctwr {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input: missing links, non-finite values,
// probabilities outside (0,1), negative rates, bad JSON.
struct validation_error : error {
    using error::error;
};

// A closed form produced a value that violates a mathematical invariant
// (probability outside [0,1] beyond slack, power ratio outside [0,1]).
// Indicates a formula being evaluated outside its premises, or a bug.
struct numerical_consistency_error : error {
    using error::error;
};

// Operation undefined for the given configuration (e.g. conditional outage
// for an empty decode set, or a relay power cap with a zero primary rate).
struct domain_error : error {
    using error::error;
};

// Exact subset enumeration refused because the relay count exceeds the cap.
struct capacity_error : error {
    using error::error;
};

// The primary QoS constraint leaves no secondary transmit budget (g = 1).
struct secondary_forbidden : error {
    using error::error;
};

// A conditional Monte Carlo estimate was requested but the conditioning
// event occurred fewer times than the minimum reliable count.
struct insufficient_conditioning : error {
    using error::error;
};

} // namespace ctwr
