#pragma once

#include <cstdint>
#include <vector>

#include "ctwr/model.hpp"

namespace ctwr::mc {

// One trial's channel gains |h|^2, drawn exponentially with the scenario's
// per-link means. Gains are drawn once per directed link use and held for
// both phases (block fading), so e.g. the primary-interference gain at s is
// the same wherever it appears within the trial. Reciprocity holds at the
// statistics level (one mean per unordered pair), while the two directions
// of a data link fade independently — this matches the independence
// structure the closed forms are exact for.
struct ChannelDraw {
    double uv = 0.0; // primary link u -> v
    double sv = 0.0; // interference s -> v
    double dv = 0.0; // interference d -> v
    double us = 0.0; // interference u -> s
    double ud = 0.0; // interference u -> d
    double ds = 0.0; // data d -> s
    double sd = 0.0; // data s -> d
    std::vector<double> ur; // interference u -> r_i
    std::vector<double> sr; // data s -> r_i
    std::vector<double> dr; // data d -> r_i
    std::vector<double> rs; // data r_i -> s
    std::vector<double> rd; // data r_i -> d
    std::vector<double> rv; // interference r_i -> v
};

// Deterministic counter-based draw: (seed, trial) fully determines the draw,
// independent of call order or thread layout.
ChannelDraw draw_channels(const ScenarioConfig& cfg, std::uint64_t seed,
                          std::uint64_t trial);

struct TrialOutcome {
    bool secondary_outage = false;
    bool primary_outage_phase1 = false;
    bool primary_outage_phase2 = false;
    std::uint32_t decode_mask = 0;
    int transmitter = -1; // forwarding relay index, -1 = STs retransmitted
};

// Replays one trial: per-relay decode tests, then either the direct
// retransmission events (empty decode set) or the forward events for the
// relay(s) chosen per `mode`, plus both primary outage events.
TrialOutcome simulate_trial(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                            const ChannelDraw& draw, SelectionMode mode);

// Integer event counts over a trial range; totals are exact sums and thus
// identical for any thread partition.
struct Tallies {
    std::uint64_t trials = 0;
    std::uint64_t secondary_opportunistic = 0;
    std::uint64_t secondary_statistical = 0;
    std::uint64_t primary_phase1 = 0;
    std::uint64_t primary_phase2_opportunistic = 0;
    std::uint64_t primary_phase2_statistical = 0;
    std::vector<std::uint64_t> relay_outage;        // per relay
    std::vector<std::uint64_t> forward_outage;      // per relay: forward events failed
    std::vector<std::uint64_t> mask_count;          // per decode mask
    std::vector<std::uint64_t> out_given_mask_opportunistic; // per mask
    std::vector<std::uint64_t> out_given_mask_statistical;   // per mask
};

// Streams `trials` trials (threaded, deterministic) and tallies every event
// of interest in one pass.
Tallies collect(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                std::uint64_t trials, std::uint64_t seed);

struct McEstimate {
    double p_hat = 0.0;
    std::uint64_t trials = 0; // effective sample size (conditioning count
                              // for conditional targets)
    double std_err = 0.0;     // sqrt(p_hat (1 - p_hat) / trials)
    std::uint64_t seed = 0;
    SelectionMode mode = SelectionMode::opportunistic;
};

// What to estimate. `index` is the relay index for relay_outage /
// forward_outage and the decode mask for decode_set / out_given_set
// (mask 0 = conditional on the empty set, i.e. the direct-retransmission
// outage).
struct Target {
    enum class Kind {
        secondary_outage,
        primary_phase1,
        primary_phase2,
        relay_outage,
        forward_outage, // relay i's forward events fail (unconditional)
        decode_set,
        out_given_set,
    };
    Kind kind = Kind::secondary_outage;
    std::uint32_t index = 0;
};

// Minimum occurrences of the conditioning event before a conditional
// estimate is reported.
inline constexpr std::uint64_t kMinConditioningCount = 100;

McEstimate estimate(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                    std::uint64_t n_trials, std::uint64_t seed,
                    SelectionMode mode, const Target& target);

// Brute-force allocation oracle. Stage 1: walk the QoS constraint boundary
// (n_boundary points parameterized by Pd) and keep the point minimizing the
// worst per-relay decode-failure probability. Stage 2: per relay, grid alpha
// over [0,1] (n_alpha points) minimizing the high-SNR forward-failure
// probability. Relay powers sit at their caps. These are the same staged
// objectives the closed forms optimize, so agreement within one grid cell is
// the meaningful comparison; `achieved_outage` reports the resulting total
// secondary outage.
struct SearchResult {
    double Ps = 0.0;
    double Pd = 0.0;
    std::vector<double> Pr;
    std::vector<double> alpha;
    double achieved_outage = 1.0;
    double pd_cell = 0.0;    // boundary grid spacing in Pd
    double alpha_cell = 0.0; // alpha grid spacing
};
SearchResult exhaustive_power_search(const ScenarioConfig& cfg,
                                     int n_boundary = 400, int n_alpha = 10000);

} // namespace ctwr::mc
