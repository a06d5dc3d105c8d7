#include "ctwr/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "ctwr/allocation.hpp"
#include "ctwr/analytic.hpp"
#include "ctwr/detail/numeric.hpp"
#include "ctwr/detail/rng.hpp"
#include "ctwr/oracles.hpp"

namespace ctwr::mc {

namespace {

// Canonical draw order. Every directed link use gets its own substream
// index, so a trial is reproducible from (seed, trial) alone.
constexpr int kBaseDraws = 7; // uv, sv, dv, us, ud, ds, sd
constexpr int kPerRelayDraws = 6; // ur, sr, dr, rs, rd, rv

struct SimContext {
    int m = 0;
    double gu = 0.0, gs = 0.0, gd = 0.0;
    double du = 0.0, ds = 0.0, dd = 0.0, dt = 0.0;
    std::vector<double> gr;
    std::vector<double> alpha, beta;
    std::vector<double> rank;  // statistical forwarding ranks
    std::vector<double> means; // draw means in canonical order
};

SimContext make_context(const ScenarioConfig& cfg, const PowerAllocation& alloc) {
    const int m = cfg.m();
    const auto msz = static_cast<std::size_t>(m);
    if (alloc.Pr.size() < msz || alloc.alpha.size() < msz || alloc.beta.size() < msz) {
        throw validation_error("allocation is missing per-relay entries for M=" +
                               std::to_string(m));
    }
    if (!std::isfinite(alloc.Ps) || alloc.Ps < 0.0 || !std::isfinite(alloc.Pd) ||
        alloc.Pd < 0.0) {
        throw validation_error("ST powers must be finite and >= 0");
    }
    SimContext c;
    c.m = m;
    c.gu = cfg.gamma_u();
    c.gs = alloc.Ps / cfg.n0();
    c.gd = alloc.Pd / cfg.n0();
    c.du = cfg.delta_u();
    c.ds = cfg.delta_s();
    c.dd = cfg.delta_d();
    c.dt = cfg.delta_total();
    c.gr.resize(m);
    c.alpha.resize(m);
    c.beta.resize(m);
    c.rank.resize(m);
    c.means.resize(kBaseDraws + kPerRelayDraws * msz);
    c.means[0] = cfg.sigma2_uv();
    c.means[1] = cfg.sigma2_sv();
    c.means[2] = cfg.sigma2_dv();
    c.means[3] = cfg.sigma2_us();
    c.means[4] = cfg.sigma2_ud();
    c.means[5] = cfg.sigma2_sd(); // d -> s uses the same pair statistic
    c.means[6] = cfg.sigma2_sd();
    for (int i = 0; i < m; ++i) {
        c.gr[i] = alloc.Pr[i] / cfg.n0();
        c.alpha[i] = alloc.alpha[i];
        c.beta[i] = alloc.beta[i];
        // Validates the per-relay allocation entries as a side effect.
        c.rank[i] = analytic::st_outage_given_relay(cfg, i, alloc);
        double* base = &c.means[kBaseDraws + kPerRelayDraws * i];
        base[0] = cfg.sigma2_ur(i);
        base[1] = cfg.sigma2_sr(i);
        base[2] = cfg.sigma2_dr(i);
        base[3] = cfg.sigma2_sr(i); // r -> s
        base[4] = cfg.sigma2_dr(i); // r -> d
        base[5] = cfg.sigma2_rv(i);
    }
    return c;
}

// A trial's gains, referenced without owning them so the hot loop can reuse
// flat buffers while the public API keeps ChannelDraw.
struct GainView {
    double uv = 0.0, sv = 0.0, dv = 0.0, us = 0.0, ud = 0.0, ds = 0.0, sd = 0.0;
    const double* ur = nullptr;
    const double* sr = nullptr;
    const double* dr = nullptr;
    const double* rs = nullptr;
    const double* rd = nullptr;
    const double* rv = nullptr;
};

GainView view_of(const ChannelDraw& d) {
    GainView v;
    v.uv = d.uv;
    v.sv = d.sv;
    v.dv = d.dv;
    v.us = d.us;
    v.ud = d.ud;
    v.ds = d.ds;
    v.sd = d.sd;
    v.ur = d.ur.data();
    v.sr = d.sr.data();
    v.dr = d.dr.data();
    v.rs = d.rs.data();
    v.rd = d.rd.data();
    v.rv = d.rv.data();
    return v;
}

struct Eval {
    std::uint32_t decode_mask = 0;
    std::uint32_t forward_ok = 0; // bit i: relay i passes both forward events
    bool out_empty = false;       // direct retransmission fails
    bool p1 = false;              // primary outage in phase 1
};

Eval evaluate(const SimContext& c, const GainView& d) {
    Eval e;
    for (int i = 0; i < c.m; ++i) {
        const double z = c.gu * d.ur[i] + 1.0;
        const double vs = c.gs * d.sr[i];
        const double vd = c.gd * d.dr[i];
        if (vs >= c.ds * z && vd >= c.dd * z && vs + vd >= c.dt * z) {
            e.decode_mask |= 1u << i;
        }
        const bool ok_s = c.gd * d.ds + c.beta[i] * c.gr[i] * d.rs[i] >=
                          c.dd * (c.gu * d.us + 1.0);
        const bool ok_d = c.gs * d.sd + c.alpha[i] * c.gr[i] * d.rd[i] >=
                          c.ds * (c.gu * d.ud + 1.0);
        if (ok_s && ok_d) e.forward_ok |= 1u << i;
    }
    // Both STs retransmit; each direct stream is received twice and combined.
    e.out_empty = (2.0 * c.gd * d.ds < c.dd * (c.gu * d.us + 1.0)) ||
                  (2.0 * c.gs * d.sd < c.ds * (c.gu * d.ud + 1.0));
    e.p1 = c.gu * d.uv < c.du * (c.gs * d.sv + c.gd * d.dv + 1.0);
    return e;
}

// Forwarder chosen per realization: lowest-index relay that passes both
// forward events, or the lowest-index decoder when all fail.
int opportunistic_tx(std::uint32_t mask, std::uint32_t ok) {
    if (mask == 0) return -1;
    const std::uint32_t succ = mask & ok;
    return std::countr_zero(succ != 0 ? succ : mask);
}

// Forwarder fixed by the precomputed ranking (lowest rank, ties to the
// lowest index), independent of the realization.
int statistical_tx(const SimContext& c, std::uint32_t mask) {
    if (mask == 0) return -1;
    int best = -1;
    double best_rank = 0.0;
    for (int i = 0; i < c.m; ++i) {
        if (!((mask >> i) & 1u)) continue;
        if (best < 0 || c.rank[i] < best_rank) {
            best = i;
            best_rank = c.rank[i];
        }
    }
    return best;
}

bool phase2_outage(const SimContext& c, const GainView& d, int tx) {
    const double interference =
        tx >= 0 ? c.gr[tx] * d.rv[tx] : c.gs * d.sv + c.gd * d.dv;
    return c.gu * d.uv < c.du * (interference + 1.0);
}

void resize_tallies(Tallies& t, int m) {
    t.relay_outage.assign(m, 0);
    t.forward_outage.assign(m, 0);
    const std::size_t n_masks = std::size_t{1} << m;
    t.mask_count.assign(n_masks, 0);
    t.out_given_mask_opportunistic.assign(n_masks, 0);
    t.out_given_mask_statistical.assign(n_masks, 0);
}

void tally_trial(const SimContext& c, const GainView& d, Tallies& t) {
    const Eval e = evaluate(c, d);
    ++t.trials;
    if (e.p1) ++t.primary_phase1;
    ++t.mask_count[e.decode_mask];
    for (int i = 0; i < c.m; ++i) {
        if (!((e.decode_mask >> i) & 1u)) ++t.relay_outage[i];
        if (!((e.forward_ok >> i) & 1u)) ++t.forward_outage[i];
    }
    const bool out_opp = e.decode_mask == 0
                             ? e.out_empty
                             : (e.decode_mask & e.forward_ok) == 0;
    if (out_opp) {
        ++t.secondary_opportunistic;
        ++t.out_given_mask_opportunistic[e.decode_mask];
    }
    if (phase2_outage(c, d, opportunistic_tx(e.decode_mask, e.forward_ok))) {
        ++t.primary_phase2_opportunistic;
    }
    const int tx_stat = statistical_tx(c, e.decode_mask);
    const bool out_stat = e.decode_mask == 0
                              ? e.out_empty
                              : !((e.forward_ok >> tx_stat) & 1u);
    if (out_stat) {
        ++t.secondary_statistical;
        ++t.out_given_mask_statistical[e.decode_mask];
    }
    if (phase2_outage(c, d, tx_stat)) ++t.primary_phase2_statistical;
}

void run_range(const SimContext& c, std::uint64_t hashed_seed, std::uint64_t lo,
               std::uint64_t hi, Tallies& t) {
    constexpr int kMaxRelays = analytic::kMaxExactRelays;
    double buf[kBaseDraws + kPerRelayDraws * kMaxRelays];
    const int n_draws = kBaseDraws + kPerRelayDraws * c.m;
    // The draw buffer is relay-major (canonical order); the view wants
    // field-major arrays, so trials are transposed into relay_buf.
    GainView v;
    double relay_buf[kPerRelayDraws][kMaxRelays];
    v.ur = relay_buf[0];
    v.sr = relay_buf[1];
    v.dr = relay_buf[2];
    v.rs = relay_buf[3];
    v.rd = relay_buf[4];
    v.rv = relay_buf[5];
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
        const std::uint64_t ts = detail::trial_state(hashed_seed, trial);
        for (int k = 0; k < n_draws; ++k) {
            buf[k] = detail::exp_sample(detail::draw_bits(ts, k), c.means[k]);
        }
        v.uv = buf[0];
        v.sv = buf[1];
        v.dv = buf[2];
        v.us = buf[3];
        v.ud = buf[4];
        v.ds = buf[5];
        v.sd = buf[6];
        for (int i = 0; i < c.m; ++i) {
            for (int k = 0; k < kPerRelayDraws; ++k) {
                relay_buf[k][i] = buf[kBaseDraws + kPerRelayDraws * i + k];
            }
        }
        tally_trial(c, v, t);
    }
}

void merge(Tallies& into, const Tallies& from) {
    into.trials += from.trials;
    into.secondary_opportunistic += from.secondary_opportunistic;
    into.secondary_statistical += from.secondary_statistical;
    into.primary_phase1 += from.primary_phase1;
    into.primary_phase2_opportunistic += from.primary_phase2_opportunistic;
    into.primary_phase2_statistical += from.primary_phase2_statistical;
    for (std::size_t i = 0; i < into.relay_outage.size(); ++i) {
        into.relay_outage[i] += from.relay_outage[i];
        into.forward_outage[i] += from.forward_outage[i];
    }
    for (std::size_t i = 0; i < into.mask_count.size(); ++i) {
        into.mask_count[i] += from.mask_count[i];
        into.out_given_mask_opportunistic[i] += from.out_given_mask_opportunistic[i];
        into.out_given_mask_statistical[i] += from.out_given_mask_statistical[i];
    }
}

} // namespace

ChannelDraw draw_channels(const ScenarioConfig& cfg, std::uint64_t seed,
                          std::uint64_t trial) {
    const int m = cfg.m();
    ChannelDraw d;
    d.ur.resize(m);
    d.sr.resize(m);
    d.dr.resize(m);
    d.rs.resize(m);
    d.rd.resize(m);
    d.rv.resize(m);
    const std::uint64_t ts = detail::trial_state(detail::mix64(seed), trial);
    int k = 0;
    const auto next = [&](double mean) {
        return detail::exp_sample(detail::draw_bits(ts, k++), mean);
    };
    d.uv = next(cfg.sigma2_uv());
    d.sv = next(cfg.sigma2_sv());
    d.dv = next(cfg.sigma2_dv());
    d.us = next(cfg.sigma2_us());
    d.ud = next(cfg.sigma2_ud());
    d.ds = next(cfg.sigma2_sd());
    d.sd = next(cfg.sigma2_sd());
    for (int i = 0; i < m; ++i) {
        d.ur[i] = next(cfg.sigma2_ur(i));
        d.sr[i] = next(cfg.sigma2_sr(i));
        d.dr[i] = next(cfg.sigma2_dr(i));
        d.rs[i] = next(cfg.sigma2_sr(i));
        d.rd[i] = next(cfg.sigma2_dr(i));
        d.rv[i] = next(cfg.sigma2_rv(i));
    }
    return d;
}

TrialOutcome simulate_trial(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                            const ChannelDraw& draw, SelectionMode mode) {
    const SimContext ctx = make_context(cfg, alloc);
    const auto msz = static_cast<std::size_t>(ctx.m);
    if (draw.ur.size() < msz || draw.sr.size() < msz || draw.dr.size() < msz ||
        draw.rs.size() < msz || draw.rd.size() < msz || draw.rv.size() < msz) {
        throw validation_error("channel draw is missing per-relay gains for M=" +
                               std::to_string(ctx.m));
    }
    const GainView v = view_of(draw);
    const Eval e = evaluate(ctx, v);
    TrialOutcome out;
    out.decode_mask = e.decode_mask;
    out.primary_outage_phase1 = e.p1;
    if (mode == SelectionMode::opportunistic) {
        out.transmitter = opportunistic_tx(e.decode_mask, e.forward_ok);
        out.secondary_outage = e.decode_mask == 0
                                   ? e.out_empty
                                   : (e.decode_mask & e.forward_ok) == 0;
    } else {
        out.transmitter = statistical_tx(ctx, e.decode_mask);
        out.secondary_outage = e.decode_mask == 0
                                   ? e.out_empty
                                   : !((e.forward_ok >> out.transmitter) & 1u);
    }
    out.primary_outage_phase2 = phase2_outage(ctx, v, out.transmitter);
    return out;
}

Tallies collect(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                std::uint64_t trials, std::uint64_t seed) {
    const int m = cfg.m();
    if (m > analytic::kMaxExactRelays) {
        throw capacity_error("collect: per-mask tallies over 2^" + std::to_string(m) +
                             " decode sets refused (M_max = " +
                             std::to_string(analytic::kMaxExactRelays) + ")");
    }
    const SimContext ctx = make_context(cfg, alloc);
    const std::uint64_t hashed = detail::mix64(seed);

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::uint64_t n_workers =
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(
                                       {hw, 16, trials / 65536 + 1}));

    std::vector<Tallies> parts(n_workers);
    for (auto& p : parts) resize_tallies(p, m);
    if (n_workers == 1) {
        run_range(ctx, hashed, 0, trials, parts[0]);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        const std::uint64_t chunk = trials / n_workers;
        const std::uint64_t rem = trials % n_workers;
        std::uint64_t lo = 0;
        for (std::uint64_t w = 0; w < n_workers; ++w) {
            const std::uint64_t hi = lo + chunk + (w < rem ? 1 : 0);
            workers.emplace_back([&, lo, hi, w] {
                run_range(ctx, hashed, lo, hi, parts[w]);
            });
            lo = hi;
        }
        for (auto& th : workers) th.join();
    }
    Tallies total;
    resize_tallies(total, m);
    for (const auto& p : parts) merge(total, p);
    return total;
}

McEstimate estimate(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                    std::uint64_t n_trials, std::uint64_t seed,
                    SelectionMode mode, const Target& target) {
    if (n_trials < 1000) {
        throw validation_error("estimate: need at least 1000 trials");
    }
    const auto require_relay = [&](std::uint32_t idx) {
        if (idx >= static_cast<std::uint32_t>(cfg.m())) {
            throw validation_error("estimate: relay index " + std::to_string(idx) +
                                   " out of range for M=" + std::to_string(cfg.m()));
        }
    };
    const auto require_mask = [&](std::uint32_t mask) {
        if (cfg.m() > 31 || (mask >> cfg.m()) != 0) {
            throw validation_error("estimate: mask has bits beyond M=" +
                                   std::to_string(cfg.m()));
        }
    };

    const Tallies t = collect(cfg, alloc, n_trials, seed);
    std::uint64_t num = 0;
    std::uint64_t den = t.trials;
    const bool opp = mode == SelectionMode::opportunistic;
    switch (target.kind) {
    case Target::Kind::secondary_outage:
        num = opp ? t.secondary_opportunistic : t.secondary_statistical;
        break;
    case Target::Kind::primary_phase1:
        num = t.primary_phase1;
        break;
    case Target::Kind::primary_phase2:
        num = opp ? t.primary_phase2_opportunistic : t.primary_phase2_statistical;
        break;
    case Target::Kind::relay_outage:
        require_relay(target.index);
        num = t.relay_outage[target.index];
        break;
    case Target::Kind::forward_outage:
        require_relay(target.index);
        num = t.forward_outage[target.index];
        break;
    case Target::Kind::decode_set:
        require_mask(target.index);
        num = t.mask_count[target.index];
        break;
    case Target::Kind::out_given_set:
        require_mask(target.index);
        den = t.mask_count[target.index];
        if (den < kMinConditioningCount) {
            throw insufficient_conditioning(
                "estimate: decode set " + std::to_string(target.index) +
                " observed " + std::to_string(den) + " times; need at least " +
                std::to_string(kMinConditioningCount));
        }
        num = opp ? t.out_given_mask_opportunistic[target.index]
                  : t.out_given_mask_statistical[target.index];
        break;
    }
    McEstimate est;
    est.p_hat = static_cast<double>(num) / static_cast<double>(den);
    est.trials = den;
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                            static_cast<double>(den));
    est.seed = seed;
    est.mode = mode;
    return est;
}

SearchResult exhaustive_power_search(const ScenarioConfig& cfg,
                                     int n_boundary, int n_alpha) {
    if (n_boundary < 50 || n_alpha < 50) {
        throw validation_error(
            "exhaustive_power_search: grid resolution must be at least 50");
    }
    if (cfg.delta_u() == 0.0) {
        throw validation_error(
            "exhaustive_power_search: the QoS boundary is unbounded at delta_u = 0");
    }
    const double g = analytic::compute_g(cfg);
    if (g <= 1.0) {
        throw secondary_forbidden(
            "exhaustive_power_search: no transmit budget exists (g = 1)");
    }
    const auto [A, B] = analytic::interference_coeffs(cfg);
    const double pd_max = (g - 1.0) / B;
    const int m = cfg.m();

    SearchResult res;
    res.pd_cell = pd_max / (n_boundary - 1);
    res.alpha_cell = 1.0 / (n_alpha - 1);

    // Stage 1: walk the constraint boundary. With relays the objective is
    // the worst per-relay decode failure (what the ST powers control); the
    // no-relay scenario minimizes the direct-retransmission outage instead.
    double best_obj = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_boundary; ++k) {
        const double pd = pd_max * static_cast<double>(k) / (n_boundary - 1);
        const double ps = (g / (1.0 + B * pd) - 1.0) / A;
        double obj = 0.0;
        if (m >= 1) {
            for (int i = 0; i < m; ++i) {
                obj = std::max(obj, analytic::relay_outage_prob(cfg, i, ps, pd));
            }
        } else {
            obj = analytic::p_out_given_empty(cfg, ps, pd);
        }
        if (obj < best_obj) {
            best_obj = obj;
            res.Ps = ps;
            res.Pd = pd;
        }
    }

    // Stage 2: relay powers at their caps, forward split by grid search.
    PowerAllocation alloc;
    alloc.Ps = res.Ps;
    alloc.Pd = res.Pd;
    alloc.g = g;
    alloc.Pr.resize(m);
    alloc.alpha.resize(m);
    alloc.beta.resize(m);
    res.Pr.resize(m);
    res.alpha.resize(m);
    for (int i = 0; i < m; ++i) {
        res.Pr[i] = allocation::optimal_relay_power(cfg, i);
        res.alpha[i] =
            oracle::alpha_grid_search(cfg, i, res.Ps, res.Pd, res.Pr[i], n_alpha)
                .alpha;
        alloc.Pr[i] = res.Pr[i];
        alloc.alpha[i] = res.alpha[i];
        alloc.beta[i] = 1.0 - res.alpha[i];
    }
    res.achieved_outage = analytic::total_outage(cfg, alloc).p_total;
    return res;
}

} // namespace ctwr::mc
