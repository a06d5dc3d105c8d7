#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ctwr/allocation.hpp"
#include "ctwr/analytic.hpp"
#include "ctwr/errors.hpp"
#include "ctwr/model.hpp"
#include "ctwr/oracles.hpp"
#include "testutil.hpp"

using namespace ctwr;
using testutil::make_first_setup;
using testutil::make_second_setup;

namespace {

// Partition of unity over decode sets, computed from the public surface.
double decode_set_mass(const ScenarioConfig& cfg, double Ps, double Pd) {
    double sum = analytic::p_empty_set(cfg, Ps, Pd);
    for (std::uint32_t mask = 1; mask < (1u << cfg.m()); ++mask) {
        sum += analytic::p_decoding_set(cfg, mask, Ps, Pd);
    }
    return sum;
}

} // namespace

TEST_CASE("QoS headroom factor g") {
    // Pinned values, independently reproduced by Monte Carlo elsewhere in
    // the suite: g is the largest allowed QoS-constraint product.
    CHECK(analytic::compute_g(make_first_setup(3, 10.0)) ==
          doctest::Approx(1.0039019102524829).epsilon(1e-13));
    CHECK(analytic::compute_g(make_second_setup(4)) ==
          doctest::Approx(1.0099621036533).epsilon(1e-12));
    // Very low primary SNR: the primary alone misses P_th, g clamps to 1.
    CHECK(analytic::compute_g(make_first_setup(1, -20.0)) == 1.0);
    // g grows monotonically with the primary SNR.
    CHECK(analytic::compute_g(make_first_setup(1, 30.0)) >
          analytic::compute_g(make_first_setup(1, 20.0)));
}

TEST_CASE("interference coefficients match their definition") {
    ScenarioConfig cfg = make_first_setup(1);
    const auto [A, B] = analytic::interference_coeffs(cfg);
    // sigma2_sv / sigma2_uv = 10^-1 and P_u = 10, so A = delta_u / 100.
    CHECK(A == doctest::Approx(cfg.delta_u() / 100.0).epsilon(1e-14));
    CHECK(B == doctest::Approx(cfg.delta_u() / 100.0).epsilon(1e-14));
    CHECK(analytic::constraint_lhs(cfg, 2.0, 3.0) ==
          doctest::Approx((1.0 + 2.0 * A) * (1.0 + 3.0 * B)).epsilon(1e-15));
    CHECK(analytic::constraint_lhs(cfg, 0.0, 0.0) == 1.0);
    CHECK_THROWS_AS(analytic::constraint_lhs(cfg, -1.0, 0.0), validation_error);
}

TEST_CASE("primary outage: boundary attains P_th, phase consistency") {
    ScenarioConfig cfg = make_first_setup(3, 10.0);
    PowerAllocation uni = allocation::uniform_allocation(cfg);
    REQUIRE(!uni.forbidden);
    // On the constraint boundary the phase-1 outage equals P_th exactly.
    CHECK(analytic::constraint_lhs(cfg, uni.Ps, uni.Pd) ==
          doctest::Approx(uni.g).epsilon(1e-12));
    CHECK(analytic::primary_outage_phase1(cfg, uni.Ps, uni.Pd) ==
          doctest::Approx(cfg.pth()).epsilon(1e-9));
    // Phase 2 with both STs retransmitting sees the same interference.
    CHECK(analytic::primary_outage_phase2_st(cfg, uni.Ps, uni.Pd) ==
          analytic::primary_outage_phase1(cfg, uni.Ps, uni.Pd));
    // A silent relay leaves the interference-free outage.
    CHECK(analytic::primary_outage_phase2_relay(cfg, 0, 0.0) ==
          doctest::Approx(analytic::primary_outage_phase1(cfg, 0.0, 0.0))
              .epsilon(1e-15));
    // More relay power, more primary outage.
    CHECK(analytic::primary_outage_phase2_relay(cfg, 0, 2.0) >
          analytic::primary_outage_phase2_relay(cfg, 0, 1.0));
}

TEST_CASE("relay decode failure matches quadrature on both setups") {
    const ScenarioConfig f = make_first_setup(3, 10.0);
    const ScenarioConfig s = make_second_setup(4);
    struct Probe {
        const ScenarioConfig* cfg;
        int relay;
        double Ps, Pd;
    };
    const Probe probes[] = {
        {&f, 0, 0.3, 0.4}, {&f, 2, 1.5, 0.2}, {&f, 1, 0.05, 3.0},
        {&s, 0, 0.5, 0.5}, {&s, 3, 2.0, 0.7},
    };
    for (const Probe& p : probes) {
        const double closed = analytic::relay_outage_prob(*p.cfg, p.relay, p.Ps, p.Pd);
        const double quad = oracle::relay_outage_quadrature(*p.cfg, p.relay, p.Ps, p.Pd);
        CHECK(std::fabs(closed - quad) <= 1e-8);
    }
}

TEST_CASE("relay decode failure: zero-threshold and zero-power edges") {
    ScenarioConfig cfg = make_first_setup(1, 10.0);
    // No secondary rates, nothing to decode: failure impossible.
    ScenarioConfig none = cfg.with_rates(Rates{0.6, 0.0, 0.0});
    CHECK(analytic::relay_outage_prob(none, 0, 0.5, 0.5) == 0.0);
    // One-sided rate reduces to the single-stream form; check vs quadrature.
    ScenarioConfig only_d = cfg.with_rates(Rates{0.6, 0.0, 0.3});
    CHECK(std::fabs(analytic::relay_outage_prob(only_d, 0, 0.5, 0.5) -
                    oracle::relay_outage_quadrature(only_d, 0, 0.5, 0.5)) <= 1e-8);
    ScenarioConfig only_s = cfg.with_rates(Rates{0.6, 0.2, 0.0});
    CHECK(std::fabs(analytic::relay_outage_prob(only_s, 0, 0.5, 0.5) -
                    oracle::relay_outage_quadrature(only_s, 0, 0.5, 0.5)) <= 1e-8);
    // A silent ST with a positive threshold fails with certainty.
    CHECK(analytic::relay_outage_prob(cfg, 0, 0.0, 0.5) == 1.0);
    CHECK(analytic::relay_outage_prob(cfg, 0, 0.5, 0.0) == 1.0);
    CHECK_THROWS_AS(analytic::relay_outage_prob(cfg, 0, -0.1, 0.5), validation_error);
}

TEST_CASE("relay decode failure is continuous across the equal-means switch") {
    // First setup is symmetric, so Ps = Pd puts both received mean SNRs on
    // the removable singularity of the distinct-means form.
    ScenarioConfig cfg = make_first_setup(1, 10.0);
    const double p_equal = analytic::relay_outage_prob(cfg, 0, 0.5, 0.5);
    const double p_near =
        analytic::relay_outage_prob(cfg, 0, 0.5, 0.5 * (1.0 + 1e-8));
    CHECK(std::fabs(p_equal - p_near) <= 1e-6 * p_equal);
    // Both branch evaluations agree with the raw-event integral.
    CHECK(std::fabs(p_equal - oracle::relay_outage_quadrature(cfg, 0, 0.5, 0.5)) <=
          1e-8);
    CHECK(std::fabs(p_near - oracle::relay_outage_quadrature(
                                 cfg, 0, 0.5, 0.5 * (1.0 + 1e-8))) <= 1e-6);
    // Branch bookkeeping: equal means inside the tolerance band only.
    CHECK(analytic::relay_outage_terms(cfg, 0, 0.5, 0.5).case_tag ==
          analytic::RelayOutageCase::equal_means);
    CHECK(analytic::relay_outage_terms(cfg, 0, 0.5, 0.6).case_tag ==
          analytic::RelayOutageCase::distinct_means);
    CHECK_THROWS_AS(
        analytic::relay_outage_terms(cfg.with_rates(Rates{0.6, 0.0, 0.3}), 0, 0.5, 0.5),
        domain_error);
    CHECK_THROWS_AS(analytic::relay_outage_terms(cfg, 0, 0.0, 0.5), domain_error);
}

TEST_CASE("relay decode failure decreases in either ST power") {
    ScenarioConfig cfg = make_second_setup(1);
    double prev = analytic::relay_outage_prob(cfg, 0, 0.1, 0.5);
    for (double ps : {0.3, 0.9, 2.7}) {
        const double cur = analytic::relay_outage_prob(cfg, 0, ps, 0.5);
        CHECK(cur < prev);
        prev = cur;
    }
    prev = analytic::relay_outage_prob(cfg, 0, 0.5, 0.1);
    for (double pd : {0.3, 0.9, 2.7}) {
        const double cur = analytic::relay_outage_prob(cfg, 0, 0.5, pd);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("decode-set probabilities form a partition of unity") {
    for (int m : {3, 6}) {
        ScenarioConfig cfg = make_first_setup(m, 10.0);
        CHECK(std::fabs(decode_set_mass(cfg, 0.4, 0.6) - 1.0) <= 1e-9);
    }
    ScenarioConfig cfg = make_second_setup(4);
    CHECK(std::fabs(decode_set_mass(cfg, 1.2, 0.8) - 1.0) <= 1e-9);
    // Mask validation.
    CHECK_THROWS_AS(analytic::p_decoding_set(cfg, 1u << 4, 0.4, 0.6),
                    validation_error);
}

TEST_CASE("direct retransmission outage: edges and raw-event integral") {
    ScenarioConfig cfg = make_first_setup(1, 10.0);
    // No secondary rates: never in outage. No power: always in outage.
    CHECK(analytic::p_out_given_empty(cfg.with_rates(Rates{0.6, 0.0, 0.0}), 1.0,
                                      1.0) == 0.0);
    CHECK(analytic::p_out_given_empty(cfg, 0.0, 0.0) == 1.0);
    CHECK(analytic::p_out_given_empty(cfg, 1.0, 0.5) <
          analytic::p_out_given_empty(cfg, 0.5, 0.5));

    // Rebuild the success probability from the raw events: each stream
    // succeeds iff twice its data SNR clears the threshold times the
    // interference-plus-noise at the receiving ST, integrated over the
    // Exp(1)-normalized interference draw.
    const auto side = [&](double delta, double mean_data, double s_int) {
        const double w = cfg.gamma_u() * s_int;
        return oracle::integrate(
            [&](double t) {
                return std::exp(-t) *
                       std::exp(-delta * (w * t + 1.0) / (2.0 * mean_data));
            },
            0.0, 60.0, 1e-12);
    };
    for (auto [ps, pd] : {std::pair{0.4, 0.7}, std::pair{2.0, 0.1}}) {
        const double ref =
            1.0 - side(cfg.delta_d(), pd * cfg.sigma2_sd(), cfg.sigma2_us()) *
                      side(cfg.delta_s(), ps * cfg.sigma2_sd(), cfg.sigma2_ud());
        CHECK(analytic::p_out_given_empty(cfg, ps, pd) ==
              doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("forward-failure high-SNR form: edges and monotonicity") {
    ScenarioConfig cfg = make_second_setup(2);
    PowerAllocation alloc = allocation::full_allocation(cfg);
    REQUIRE(!alloc.forbidden);
    const double p = analytic::st_outage_given_relay(cfg, 0, alloc);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    // More relay power helps.
    PowerAllocation more = alloc;
    more.Pr[0] *= 2.0;
    CHECK(analytic::st_outage_given_relay(cfg, 0, more) < p);
    // Zero rates: no events to fail.
    ScenarioConfig none = cfg.with_rates(Rates{0.6, 0.0, 0.0});
    PowerAllocation plain = alloc;
    CHECK(analytic::st_outage_given_relay(none, 0, plain) == 0.0);
    // alpha + beta must partition the relay power.
    PowerAllocation bad = alloc;
    bad.beta[0] = bad.alpha[0]; // breaks alpha + beta = 1
    CHECK_THROWS_AS(analytic::st_outage_given_relay(cfg, 0, bad), validation_error);
}

TEST_CASE("conditional outage given a decode set matches 2-D quadrature") {
    const ScenarioConfig f = make_first_setup(3, 10.0);
    const ScenarioConfig s = make_second_setup(4);
    const PowerAllocation af = allocation::full_allocation(f);
    const PowerAllocation as = allocation::full_allocation(s);
    const PowerAllocation uf = allocation::uniform_allocation(f);
    REQUIRE(!af.forbidden);
    REQUIRE(!as.forbidden);

    struct Probe {
        const ScenarioConfig* cfg;
        const PowerAllocation* alloc;
        std::uint32_t mask;
    };
    const Probe probes[] = {
        {&f, &af, 0b001}, {&f, &af, 0b110}, {&f, &af, 0b111}, {&f, &uf, 0b011},
        {&s, &as, 0b0010}, {&s, &as, 0b1001}, {&s, &as, 0b1101},
    };
    for (const Probe& p : probes) {
        const double closed = analytic::p_out_given_set(*p.cfg, p.mask, *p.alloc);
        const double quad = oracle::out_given_set_quadrature(*p.cfg, p.mask, *p.alloc);
        CHECK(std::fabs(closed - quad) <= 1e-6);
    }
    CHECK_THROWS_AS(analytic::p_out_given_set(f, 0, af), domain_error);
}

TEST_CASE("sub-subset factor terms: invariants and the removable singularity") {
    ScenarioConfig cfg = make_first_setup(1, 10.0);
    PowerAllocation alloc;
    alloc.Ps = 0.3;
    alloc.Pd = 0.4;
    alloc.Pr = {0.8};
    alloc.alpha = {0.5};
    alloc.beta = {0.5};
    // beta * Pr * sigma2_sr equals Pd * sigma2_sd here (both links share the
    // same mean), which puts the s-side factor exactly on the singularity.
    REQUIRE(alloc.beta[0] * alloc.Pr[0] * cfg.sigma2_sr(0) ==
            doctest::Approx(alloc.Pd * cfg.sigma2_sd()).epsilon(1e-15));
    analytic::SubsetTerms t = analytic::subset_terms(cfg, 0b1, alloc);
    CHECK(t.singular_x);
    CHECK(!t.singular_y);
    CHECK(t.omega > 0.0);
    CHECK(t.xi > 0.0);
    CHECK(t.lambda > 0.0);
    CHECK(t.psi > 0.0);
    CHECK(t.norm_x > 0.0);
    CHECK(t.norm_y > 0.0);
    // The factors assemble to the conditional outage of the singleton set.
    const double via_terms = 1.0 - t.norm_x * (t.omega + t.lambda) *
                                       t.norm_y * (t.xi + t.psi);
    CHECK(analytic::p_out_given_set(cfg, 0b1, alloc) ==
          doctest::Approx(via_terms).epsilon(1e-12));
    // Even on the singularity the closed form tracks the quadrature.
    CHECK(std::fabs(analytic::p_out_given_set(cfg, 0b1, alloc) -
                    oracle::out_given_set_quadrature(cfg, 0b1, alloc)) <= 1e-6);
    CHECK_THROWS_AS(analytic::subset_terms(cfg, 0, alloc), domain_error);
    PowerAllocation silent = alloc;
    silent.Ps = 0.0;
    CHECK_THROWS_AS(analytic::subset_terms(cfg, 0b1, silent), domain_error);
}

TEST_CASE("total outage breakdown reassembles and matches pinned references") {
    ScenarioConfig f = make_first_setup(3, 10.0);
    PowerAllocation alloc = allocation::full_allocation(f);
    OutageBreakdown bd = analytic::total_outage(f, alloc);
    CHECK(bd.per_subset.size() == 7);
    double sum = bd.p_empty * bd.p_out_given_empty;
    double mass = bd.p_empty;
    for (std::size_t k = 0; k < bd.per_subset.size(); ++k) {
        const auto& e = bd.per_subset[k];
        CHECK(e.mask == k + 1); // ascending mask order
        CHECK(e.p_set == doctest::Approx(analytic::p_decoding_set(
                             f, e.mask, alloc.Ps, alloc.Pd)).epsilon(1e-12));
        sum += e.p_set * e.p_out_given_set;
        mass += e.p_set;
    }
    CHECK(bd.p_total == doctest::Approx(sum).epsilon(1e-12));
    CHECK(std::fabs(mass - 1.0) <= 1e-9);
    // Pinned totals, reproduced by an independent implementation and by
    // Monte Carlo (see the validation battery).
    CHECK(bd.p_total == doctest::Approx(0.6538605695274944).epsilon(1e-10));
    ScenarioConfig s = make_second_setup(4);
    CHECK(analytic::total_outage(s, allocation::uniform_allocation(s)).p_total ==
          doctest::Approx(0.17554155015369335).epsilon(1e-10));
}

TEST_CASE("exact enumeration refuses more than 16 relays") {
    ScenarioConfig big = make_first_setup(17, 10.0);
    PowerAllocation alloc;
    alloc.Ps = 0.4;
    alloc.Pd = 0.4;
    alloc.Pr.assign(17, 0.5);
    alloc.alpha.assign(17, 0.5);
    alloc.beta.assign(17, 0.5);
    CHECK_THROWS_AS(analytic::total_outage(big, alloc), capacity_error);
    CHECK_THROWS_AS(analytic::p_out_given_set(big, 0x1FFFFu, alloc), capacity_error);
    // A small decode set within a large M is still fine.
    CHECK(analytic::p_out_given_set(big, 0b101u, alloc) >= 0.0);
}

TEST_CASE("probability outputs stay in range on randomized scenarios") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> power(0.0, 5.0);
    for (int k = 0; k < 50; ++k) {
        const int m = 1 + static_cast<int>(rng() % 4);
        ScenarioConfig cfg = testutil::random_scenario(rng, m);
        const double ps = power(rng);
        const double pd = power(rng);
        for (int i = 0; i < m; ++i) {
            const double p = analytic::relay_outage_prob(cfg, i, ps, pd);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        const double pe = analytic::p_out_given_empty(cfg, ps, pd);
        CHECK(pe >= 0.0);
        CHECK(pe <= 1.0);
        CHECK(std::fabs(decode_set_mass(cfg, ps, pd) - 1.0) <= 1e-9);
        PowerAllocation alloc = allocation::make_allocation(cfg, AllocMode::uniform);
        const double total = analytic::total_outage(cfg, alloc).p_total;
        CHECK(total >= 0.0);
        CHECK(total <= 1.0);
    }
}
