#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctwr/model.hpp"

namespace ctwr::sweep {

// Swept scenario parameter. gamma_u_dB rescales the primary power at fixed
// N0; N0_dB rescales the noise at fixed primary power; P_th replaces the
// QoS threshold.
enum class SweepVariable { gamma_u_dB, P_th, N0_dB };

SweepVariable sweep_variable_from_string(const std::string& s);
std::string to_string(SweepVariable v);

struct VariantSpec {
    int M = 0;
    AllocMode alloc = AllocMode::lemma;
    SelectionMode select = SelectionMode::opportunistic;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::gamma_u_dB;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    std::vector<VariantSpec> variants;
    std::uint64_t mc_trials = 1000000;
    std::uint64_t seed = 12345;
};

// One output row. p_analytic is the exact closed-form total outage of the
// allocation (opportunistic forwarding semantics); p_asymptotic is the
// large-gamma_u floor for the row's allocation mode; p_mc is the simulated
// outage under the row's selection mode. Forbidden rows carry zero powers
// and are evaluated honestly (outage 1).
struct SweepRow {
    double x = 0.0;
    int M = 0;
    AllocMode alloc = AllocMode::lemma;
    SelectionMode select = SelectionMode::opportunistic;
    double p_analytic = 1.0;
    double p_asymptotic = 1.0;
    double p_mc = 1.0;
    double mc_se = 0.0;
    double g = 1.0;
    bool forbidden = true;
    double Ps = 0.0;
    double Pd = 0.0;
    std::vector<double> Pr;
    std::vector<double> alpha;
};

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec);

// CSV with a fixed schema; per-relay columns are semicolon-joined lists.
// Formatting is locale-free and byte-stable for identical inputs.
std::string csv_header();
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string to_csv(const std::vector<SweepRow>& rows);

// Closed-form allocation vs brute-force search across an N0 range. Per N0:
//  - Pd_lemma / Pd_search: the closed-form boundary point vs the stage-1
//    boundary-walk optimum (independent operating points; agreement within
//    one pd_cell is the meaningful comparison);
//  - alpha_lemma / alpha_search: the closed-form forward split vs an
//    n_alpha-point grid argmin of the same objective at the closed form's
//    operating point (pins the stationary point at grid resolution);
//  - p_out_lemma / p_out_search: total outage achieved by each scheme's own
//    full allocation.
// Forbidden rows carry empty power and alpha cells.
struct PaCompareRow {
    double n0_db = 0.0;
    double g = 1.0;
    bool forbidden = true;
    double Pd_lemma = 0.0;
    double Pd_search = 0.0;
    double alpha_lemma = 0.0;  // relay 1
    double alpha_search = 0.0; // relay 1
    double p_out_lemma = 1.0;
    double p_out_search = 1.0;
    double pd_cell = 0.0;
    double alpha_cell = 0.0;
};

std::vector<PaCompareRow> power_allocation_compare(const ScenarioConfig& base,
                                                   double n0_start_db,
                                                   double n0_stop_db,
                                                   double n0_step_db,
                                                   int n_boundary = 400,
                                                   int n_alpha = 10000);

std::string pa_compare_csv_header();
void write_pa_compare_csv(std::ostream& out, const std::vector<PaCompareRow>& rows);
std::string pa_compare_to_csv(const std::vector<PaCompareRow>& rows);

} // namespace ctwr::sweep
