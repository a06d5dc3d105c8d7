#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ctwr/errors.hpp"

namespace ctwr {

// dB <-> linear conversions. Throws validation_error on non-finite input.
double db_to_linear(double x_db);
double linear_to_db(double x_linear);

struct Rates {
    double Ru = 0.0; // primary rate, transmitted every phase
    double Rs = 0.0; // rate of the message s sends (decoded at d)
    double Rd = 0.0; // rate of the message d sends (decoded at s)
};

// SINR thresholds implied by the rates. The secondary exchange spans two
// phases, so its thresholds carry the factor 2 in the exponent; delta_total
// is the threshold of the sum-rate event and satisfies
// delta_total = (delta_s + 1)(delta_d + 1) - 1.
struct Thresholds {
    double delta_u = 0.0;
    double delta_total = 0.0;
    double delta_s = 0.0;
    double delta_d = 0.0;
};

Thresholds thresholds(const Rates& rates);

// Mean channel gains per unordered node pair, linear scale. Node labels are
// "u", "v", "s", "d" and "r1".."rM"; keys are normalized lexicographically so
// get("u","s") and get("s","u") answer identically.
class LinkStats {
public:
    static std::string canonical_key(std::string_view a, std::string_view b);

    void set(std::string_view a, std::string_view b, double sigma2);
    double get(std::string_view a, std::string_view b) const;
    bool has(std::string_view a, std::string_view b) const;

    const std::map<std::string, double>& entries() const { return sigma2_; }

private:
    std::map<std::string, double> sigma2_;
};

// Node label of the i-th relay (0-based index -> "r1", "r2", ...).
std::string relay_node_name(int relay_index);

// Immutable scenario: rates, primary power, noise power, primary outage
// threshold, relay count and link statistics. Validates on construction and
// caches flattened per-link values for the hot paths. Extra links beyond the
// configured M are allowed (so one file can serve sweeps over M).
class ScenarioConfig {
public:
    ScenarioConfig(Rates rates, double pu, double n0, double pth, int m,
                   LinkStats links);

    const Rates& rates() const { return rates_; }
    double pu() const { return pu_; }
    double n0() const { return n0_; }
    double pth() const { return pth_; }
    int m() const { return m_; }
    double gamma_u() const { return pu_ / n0_; }
    const LinkStats& links() const { return links_; }

    double delta_u() const { return thresholds_.delta_u; }
    double delta_total() const { return thresholds_.delta_total; }
    double delta_s() const { return thresholds_.delta_s; }
    double delta_d() const { return thresholds_.delta_d; }

    double sigma2_uv() const { return s_uv_; }
    double sigma2_sd() const { return s_sd_; }
    double sigma2_us() const { return s_us_; }
    double sigma2_ud() const { return s_ud_; }
    double sigma2_sv() const { return s_sv_; }
    double sigma2_dv() const { return s_dv_; }
    double sigma2_sr(int i) const { return s_sr_[check_relay(i)]; }
    double sigma2_dr(int i) const { return s_dr_[check_relay(i)]; }
    double sigma2_ur(int i) const { return s_ur_[check_relay(i)]; }
    double sigma2_rv(int i) const { return s_rv_[check_relay(i)]; }

    // Rebuilders for sweeps; each revalidates the modified scenario.
    ScenarioConfig with_pu(double pu) const;
    ScenarioConfig with_n0(double n0) const;
    ScenarioConfig with_pth(double pth) const;
    ScenarioConfig with_m(int m) const;
    ScenarioConfig with_rates(const Rates& rates) const;

private:
    std::size_t check_relay(int i) const;

    Rates rates_;
    double pu_ = 0.0;
    double n0_ = 0.0;
    double pth_ = 0.0;
    int m_ = 0;
    LinkStats links_;

    Thresholds thresholds_;
    double s_uv_ = 0.0, s_sd_ = 0.0, s_us_ = 0.0, s_ud_ = 0.0;
    double s_sv_ = 0.0, s_dv_ = 0.0;
    std::vector<double> s_sr_, s_dr_, s_ur_, s_rv_;
};

Thresholds thresholds(const ScenarioConfig& cfg);

// Scenario JSON:
//   { "rates": {"Ru":0.6,"Rs":0.2,"Rd":0.3},
//     "gamma_u_dB": 10.0,          (or "P_u_dB"; exactly one of the two)
//     "N0_dB": 0.0, "P_th": 0.02, "M": 3,
//     "links": {"u,v": 5.0, "s,r1": 5.0, ...} }   (values in dB)
// Unknown keys are rejected. Unordered link keys are normalized.
ScenarioConfig scenario_from_json_text(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);
std::string scenario_to_json_text(const ScenarioConfig& cfg);

// Secondary transmit powers and per-relay forward power ratios. alpha[i] is
// the fraction of relay i's power spent on the link toward d (carrying the
// message s sent), beta[i] = 1 - alpha[i] the fraction toward s.
struct PowerAllocation {
    double Ps = 0.0;
    double Pd = 0.0;
    std::vector<double> Pr;
    std::vector<double> alpha;
    std::vector<double> beta;
    double g = 1.0;          // QoS headroom factor used when allocating
    bool forbidden = false;  // true when g = 1 left no transmit budget
};

// How the forwarding relay is chosen among the decode set in simulation:
// per realization (outage only if every decoded relay fails a forward link)
// or by long-run statistics (fixed ranking, chosen before the trial).
enum class SelectionMode { opportunistic, statistical };

// Power allocation scheme: "uniform" splits the boundary budget evenly with
// alpha = 1/2; "lemma" is the closed-form optimized scheme (named after the
// closed-form optimality lemmas implemented in the allocation module).
enum class AllocMode { uniform, lemma };

std::string to_string(SelectionMode mode);
std::string to_string(AllocMode mode);
SelectionMode selection_mode_from_string(const std::string& s);
AllocMode alloc_mode_from_string(const std::string& s);

// Decomposition of the secondary outage probability over decode sets.
struct OutageBreakdown {
    struct SubsetEntry {
        std::uint32_t mask = 0;        // bit i set = relay i decoded
        double p_set = 0.0;            // P(decode set = mask)
        double p_out_given_set = 0.0;  // P(secondary outage | mask)
    };
    double p_empty = 1.0;
    double p_out_given_empty = 0.0;
    std::vector<SubsetEntry> per_subset; // ascending mask order, 1 .. 2^M-1
    double p_total = 0.0;
};

} // namespace ctwr
