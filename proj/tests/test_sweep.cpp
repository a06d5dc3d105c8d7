#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ctwr/errors.hpp"
#include "ctwr/model.hpp"
#include "ctwr/sweep.hpp"
#include "ctwr/validate.hpp"
#include "testutil.hpp"

using namespace ctwr;
using testutil::make_first_setup;
using testutil::make_second_setup;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

TEST_CASE("sweep variables round-trip through their names") {
    for (const auto v : {sweep::SweepVariable::gamma_u_dB,
                         sweep::SweepVariable::P_th,
                         sweep::SweepVariable::N0_dB}) {
        CHECK(sweep::sweep_variable_from_string(sweep::to_string(v)) == v);
    }
    CHECK_THROWS_AS(sweep::sweep_variable_from_string("bandwidth"),
                    validation_error);
}

TEST_CASE("run_sweep emits one row per point and variant, in order") {
    const ScenarioConfig base = make_first_setup(2);
    sweep::SweepSpec spec;
    spec.variable = sweep::SweepVariable::gamma_u_dB;
    spec.start = 8.0;
    spec.stop = 12.0;
    spec.step = 2.0;
    spec.mc_trials = 5000;
    spec.seed = 9;
    spec.variants = {
        {0, AllocMode::uniform, SelectionMode::opportunistic},
        {2, AllocMode::lemma, SelectionMode::opportunistic},
        {2, AllocMode::lemma, SelectionMode::statistical},
    };
    const std::vector<sweep::SweepRow> rows = sweep::run_sweep(base, spec);
    REQUIRE(rows.size() == 9);
    const double xs[3] = {8.0, 10.0, 12.0};
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const sweep::SweepRow& r = rows[k];
        const sweep::VariantSpec& v = spec.variants[k % 3];
        CHECK(r.x == xs[k / 3]);
        CHECK(r.M == v.M);
        CHECK(r.alloc == v.alloc);
        CHECK(r.select == v.select);
        CHECK(r.Pr.size() == static_cast<std::size_t>(v.M));
        CHECK(r.alpha.size() == static_cast<std::size_t>(v.M));
        CHECK(r.p_analytic >= 0.0);
        CHECK(r.p_analytic <= 1.0);
        CHECK(r.p_asymptotic >= 0.0);
        CHECK(r.p_asymptotic <= 1.0);
        CHECK(r.p_mc >= 0.0);
        CHECK(r.p_mc <= 1.0);
        CHECK(r.mc_se >= 0.0);
        CHECK(r.g >= 1.0);
    }
    // More primary headroom can only help the secondary.
    CHECK(rows[3].p_analytic <= rows[0].p_analytic + 1e-12);
    CHECK(rows[6].p_analytic <= rows[3].p_analytic + 1e-12);

    sweep::SweepSpec empty = spec;
    empty.variants.clear();
    CHECK_THROWS_AS(sweep::run_sweep(base, empty), validation_error);
}

TEST_CASE("sweep ranges include both endpoints and reject bad steps") {
    const ScenarioConfig base = make_first_setup(1);
    sweep::SweepSpec spec;
    spec.variable = sweep::SweepVariable::P_th;
    spec.start = 0.01;
    spec.stop = 0.04;
    spec.step = 0.01;
    spec.mc_trials = 1000;
    spec.variants = {{1, AllocMode::lemma, SelectionMode::opportunistic}};
    const auto rows = sweep::run_sweep(base, spec);
    REQUIRE(rows.size() == 4);
    CHECK(rows.front().x == 0.01);
    CHECK(rows.back().x == doctest::Approx(0.04).epsilon(1e-12));
    // A laxer outage budget can only lower the secondary outage.
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].p_analytic <= rows[k - 1].p_analytic + 1e-12);
    }

    for (double bad_step : {0.0, -1.0}) {
        sweep::SweepSpec b = spec;
        b.step = bad_step;
        CHECK_THROWS_AS(sweep::run_sweep(base, b), validation_error);
    }
    sweep::SweepSpec rev = spec;
    rev.start = 0.04;
    rev.stop = 0.01;
    CHECK_THROWS_AS(sweep::run_sweep(base, rev), validation_error);
}

TEST_CASE("noise sweeps degrade the secondary monotonically") {
    const ScenarioConfig base = make_second_setup(1);
    sweep::SweepSpec spec;
    spec.variable = sweep::SweepVariable::N0_dB;
    spec.start = -3.0;
    spec.stop = -1.0;
    spec.step = 1.0;
    spec.mc_trials = 1000;
    spec.variants = {{1, AllocMode::lemma, SelectionMode::opportunistic}};
    const auto rows = sweep::run_sweep(base, spec);
    REQUIRE(rows.size() == 3);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].p_analytic >= rows[k - 1].p_analytic - 1e-12);
    }
}

TEST_CASE("forbidden rows carry zero powers and an honest outage of one") {
    const ScenarioConfig base = make_first_setup(2);
    sweep::SweepSpec spec;
    spec.variable = sweep::SweepVariable::gamma_u_dB;
    spec.start = 5.0;
    spec.stop = 5.0;
    spec.step = 1.0;
    spec.mc_trials = 5000;
    spec.variants = {{2, AllocMode::lemma, SelectionMode::opportunistic}};
    const auto rows = sweep::run_sweep(base, spec);
    REQUIRE(rows.size() == 1);
    const sweep::SweepRow& r = rows[0];
    CHECK(r.forbidden);
    CHECK(r.g == 1.0);
    CHECK(r.Ps == 0.0);
    CHECK(r.Pd == 0.0);
    CHECK(r.Pr == std::vector<double>{0.0, 0.0});
    CHECK(r.p_analytic == 1.0);
    // The Monte Carlo run sees every trial fail, not a synthesized constant.
    CHECK(r.p_mc == 1.0);
    CHECK(r.mc_se == 0.0);

    const auto fields = split_fields(split_lines(sweep::to_csv(rows))[1]);
    REQUIRE(fields.size() == 14);
    CHECK(fields[9] == "1");      // forbidden flag
    CHECK(fields[12] == "0;0");   // per-relay powers, semicolon-joined
}

TEST_CASE("sweep CSV uses the documented header and is byte-stable") {
    CHECK(sweep::csv_header() ==
          "x,M,alloc,select,p_analytic,p_asymptotic,p_mc,mc_se,g,forbidden,"
          "P_s,P_d,P_r,alpha");

    const ScenarioConfig base = make_first_setup(2);
    sweep::SweepSpec spec;
    spec.variable = sweep::SweepVariable::gamma_u_dB;
    spec.start = 8.0;
    spec.stop = 10.0;
    spec.step = 1.0;
    spec.mc_trials = 5000;
    spec.seed = 77;
    spec.variants = {{2, AllocMode::lemma, SelectionMode::opportunistic}};
    const std::string once = sweep::to_csv(sweep::run_sweep(base, spec));
    const std::string twice = sweep::to_csv(sweep::run_sweep(base, spec));
    CHECK(once == twice);

    const auto lines = split_lines(once);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == sweep::csv_header());
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto fields = split_fields(lines[k]);
        REQUIRE(fields.size() == 14);
        CHECK(fields[1] == "2");
        CHECK(fields[2] == "lemma");
        CHECK(fields[3] == "opportunistic");
        CHECK(fields[12].find(';') != std::string::npos);
    }

    std::ostringstream streamed;
    sweep::write_csv(streamed, sweep::run_sweep(base, spec));
    CHECK(streamed.str() == once);
}

TEST_CASE("allocation comparison flags the noise level with no budget") {
    const ScenarioConfig base = make_second_setup(2);
    const auto rows = sweep::power_allocation_compare(base, 2.0, 3.0, 1.0, 200, 400);
    REQUIRE(rows.size() == 2);

    const sweep::PaCompareRow& ok = rows[0];
    CHECK(!ok.forbidden);
    CHECK(ok.g > 1.0);
    CHECK(std::fabs(ok.Pd_lemma - ok.Pd_search) <= ok.pd_cell);
    CHECK(std::fabs(ok.alpha_lemma - ok.alpha_search) <= ok.alpha_cell + 1e-12);
    CHECK(ok.p_out_lemma > 0.0);
    CHECK(ok.p_out_lemma < 1.0);
    CHECK(ok.p_out_search > 0.0);
    CHECK(ok.p_out_search < 1.0);
    CHECK(ok.pd_cell > 0.0);
    CHECK(ok.alpha_cell == doctest::Approx(1.0 / 399.0).epsilon(1e-15));

    const sweep::PaCompareRow& no = rows[1];
    CHECK(no.forbidden);
    CHECK(no.g == 1.0);
    CHECK(no.p_out_lemma == 1.0);
    CHECK(no.p_out_search == 1.0);

    CHECK(sweep::pa_compare_csv_header() ==
          "n0_dB,g,forbidden,Pd_lemma,Pd_search,alpha_lemma,alpha_search,"
          "p_out_lemma,p_out_search,pd_cell,alpha_cell");
    const auto lines = split_lines(sweep::pa_compare_to_csv(rows));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == sweep::pa_compare_csv_header());
    CHECK(split_fields(lines[1]).size() == 11);
    // Forbidden rows keep the schema but leave the power cells empty.
    CHECK(lines[2] == "3,1,1,,,,,1,1,,");

    CHECK_THROWS_AS(
        sweep::power_allocation_compare(make_second_setup(0), 2.0, 3.0, 1.0),
        validation_error);
}

TEST_CASE("validation battery passes on a healthy scenario") {
    const ScenarioConfig cfg = make_first_setup(2);
    const auto results = validate::run_validation(cfg, 200000, 3);
    REQUIRE(!results.empty());
    for (const auto& r : results) CHECK(!r.name.empty());
    CHECK(validate::all_passed(results));

    std::ostringstream report;
    validate::print_report(report, results);
    const std::string text = report.str();
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
    CHECK(text.find(std::to_string(results.size()) + "/" +
                    std::to_string(results.size()) + " checks passed") !=
          std::string::npos);
    CHECK(split_lines(text).size() == results.size() + 2);
}

TEST_CASE("validation report marks failures") {
    validate::CheckResult bad;
    bad.name = "deliberately failing check";
    bad.value = 1.0;
    bad.reference = 0.0;
    bad.tolerance = 0.1;
    bad.pass = false;
    const std::vector<validate::CheckResult> results{bad};
    CHECK(!validate::all_passed(results));
    std::ostringstream report;
    validate::print_report(report, results);
    CHECK(report.str().find("FAIL") != std::string::npos);
    CHECK(report.str().find("0/1 checks passed") != std::string::npos);
}
