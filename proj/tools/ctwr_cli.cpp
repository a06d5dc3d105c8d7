#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctwr/allocation.hpp"
#include "ctwr/analytic.hpp"
#include "ctwr/model.hpp"
#include "ctwr/sweep.hpp"
#include "ctwr/validate.hpp"

namespace {

struct RangeSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
};

RangeSpec parse_range(const std::string& text) {
    RangeSpec r;
    char trailing = 0;
    const int n = std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &r.start, &r.stop,
                              &r.step, &trailing);
    if (n != 3) {
        throw ctwr::validation_error("range must have the form start:stop:step, got '" +
                                     text + "'");
    }
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ctwr::validation_error("cannot open output file '" + path + "'");
    }
    out << text;
}

int run_sweep_cmd(const std::string& scenario_path, const std::string& var,
                  const std::string& range, std::vector<int> ms,
                  const std::vector<std::string>& modes,
                  const std::vector<std::string>& selects, std::uint64_t trials,
                  std::uint64_t seed, const std::string& out_path) {
    const ctwr::ScenarioConfig base = ctwr::load_scenario_file(scenario_path);
    ctwr::sweep::SweepSpec spec;
    spec.variable = ctwr::sweep::sweep_variable_from_string(var);
    const RangeSpec r = parse_range(range);
    spec.start = r.start;
    spec.stop = r.stop;
    spec.step = r.step;
    spec.mc_trials = trials;
    spec.seed = seed;
    if (ms.empty()) ms.push_back(base.m());
    for (const int m : ms) {
        for (const std::string& mode : modes) {
            for (const std::string& select : selects) {
                ctwr::sweep::VariantSpec v;
                v.M = m;
                v.alloc = ctwr::alloc_mode_from_string(mode);
                v.select = ctwr::selection_mode_from_string(select);
                spec.variants.push_back(v);
            }
        }
    }
    const auto rows = ctwr::sweep::run_sweep(base, spec);
    write_text(out_path, ctwr::sweep::to_csv(rows));
    return 0;
}

int run_validate_cmd(const std::string& scenario_path, std::uint64_t trials,
                     std::uint64_t seed) {
    const ctwr::ScenarioConfig cfg = ctwr::load_scenario_file(scenario_path);
    const auto results = ctwr::validate::run_validation(cfg, trials, seed);
    ctwr::validate::print_report(std::cout, results);
    return ctwr::validate::all_passed(results) ? 0 : 1;
}

int run_pa_compare_cmd(const std::string& scenario_path, const std::string& range,
                       int n_boundary, int n_alpha, const std::string& out_path) {
    const ctwr::ScenarioConfig base = ctwr::load_scenario_file(scenario_path);
    const RangeSpec r = parse_range(range);
    const auto rows = ctwr::sweep::power_allocation_compare(
        base, r.start, r.stop, r.step, n_boundary, n_alpha);
    write_text(out_path, ctwr::sweep::pa_compare_to_csv(rows));
    return 0;
}

int run_allocate_cmd(const std::string& scenario_path, const std::string& mode) {
    const ctwr::ScenarioConfig cfg = ctwr::load_scenario_file(scenario_path);
    const ctwr::PowerAllocation alloc =
        ctwr::allocation::make_allocation(cfg, ctwr::alloc_mode_from_string(mode));
    nlohmann::json j;
    j["mode"] = mode;
    j["g"] = alloc.g;
    j["forbidden"] = alloc.forbidden;
    j["P_s"] = alloc.Ps;
    j["P_d"] = alloc.Pd;
    j["P_r"] = alloc.Pr;
    j["alpha"] = alloc.alpha;
    j["beta"] = alloc.beta;
    j["p_out_analytic"] = ctwr::analytic::total_outage(cfg, alloc).p_total;
    std::cout << j.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage analysis and power allocation for a cognitive two-way "
                 "relay network sharing a primary user's band"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path = "-";
    std::uint64_t seed = 12345;

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Sweep one scenario parameter and write a CSV of outage curves");
    std::string var;
    std::string range;
    std::vector<int> ms;
    std::vector<std::string> modes{"lemma"};
    std::vector<std::string> selects{"opportunistic"};
    std::uint64_t sweep_trials = 1000000;
    sweep_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    sweep_cmd->add_option("--var", var, "Swept variable: gamma_u_dB, P_th or N0_dB")
        ->required();
    sweep_cmd->add_option("--range", range, "start:stop:step")->required();
    sweep_cmd->add_option("--m", ms, "Relay counts (default: scenario M)")
        ->delimiter(',');
    sweep_cmd->add_option("--mode", modes, "Allocation modes: uniform and/or lemma")
        ->delimiter(',');
    sweep_cmd
        ->add_option("--select", selects,
                     "Relay selection: opportunistic and/or statistical")
        ->delimiter(',');
    sweep_cmd->add_option("--trials", sweep_trials, "Monte Carlo trials per row");
    sweep_cmd->add_option("--seed", seed, "Monte Carlo seed");
    sweep_cmd->add_option("--out", out_path, "Output CSV path ('-' = stdout)");

    auto* validate_cmd = app.add_subcommand(
        "validate", "Run the closed-form-vs-oracle battery on one scenario");
    std::uint64_t validate_trials = 10000000;
    validate_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    validate_cmd->add_option("--trials", validate_trials, "Monte Carlo trials");
    validate_cmd->add_option("--seed", seed, "Monte Carlo seed");

    auto* pa_cmd = app.add_subcommand(
        "pa-compare",
        "Compare the closed-form allocation against a brute-force grid search "
        "across an N0 range");
    std::string pa_range = "-5:3:1";
    int n_boundary = 400;
    int n_alpha = 10000;
    pa_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    pa_cmd->add_option("--range", pa_range, "N0 range in dB, start:stop:step");
    pa_cmd->add_option("--boundary-grid", n_boundary,
                       "Points on the QoS constraint boundary");
    pa_cmd->add_option("--alpha-grid", n_alpha, "Points on the alpha grid");
    pa_cmd->add_option("--out", out_path, "Output CSV path ('-' = stdout)");

    auto* alloc_cmd = app.add_subcommand(
        "allocate", "Print the power allocation for one scenario as JSON");
    std::string alloc_mode = "lemma";
    alloc_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    alloc_cmd->add_option("--mode", alloc_mode, "uniform or lemma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // 2 = input error, 0 = --help
    }

    try {
        if (sweep_cmd->parsed()) {
            return run_sweep_cmd(scenario_path, var, range, ms, modes, selects,
                                 sweep_trials, seed, out_path);
        }
        if (validate_cmd->parsed()) {
            return run_validate_cmd(scenario_path, validate_trials, seed);
        }
        if (pa_cmd->parsed()) {
            return run_pa_compare_cmd(scenario_path, pa_range, n_boundary, n_alpha,
                                      out_path);
        }
        if (alloc_cmd->parsed()) {
            return run_allocate_cmd(scenario_path, alloc_mode);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
