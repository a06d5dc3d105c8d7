#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctwr/allocation.hpp"
#include "ctwr/analytic.hpp"
#include "ctwr/asymptotic.hpp"
#include "ctwr/model.hpp"
#include "ctwr/montecarlo.hpp"
#include "ctwr/oracles.hpp"
#include "ctwr/sweep.hpp"
#include "ctwr/validate.hpp"

namespace py = pybind11;

PYBIND11_MODULE(ctwr, m) {
    m.doc() = "Outage analysis and power allocation for a cognitive two-way "
              "relay network sharing a primary user's band";

    // Exceptions, base first so subclass catches work from Python.
    auto base = py::register_exception<ctwr::error>(m, "Error");
    py::register_exception<ctwr::validation_error>(m, "ValidationError", base);
    py::register_exception<ctwr::numerical_consistency_error>(
        m, "NumericalConsistencyError", base);
    py::register_exception<ctwr::domain_error>(m, "DomainError", base);
    py::register_exception<ctwr::capacity_error>(m, "CapacityError", base);
    py::register_exception<ctwr::secondary_forbidden>(m, "SecondaryForbidden", base);
    py::register_exception<ctwr::insufficient_conditioning>(
        m, "InsufficientConditioning", base);

    py::enum_<ctwr::SelectionMode>(m, "SelectionMode")
        .value("opportunistic", ctwr::SelectionMode::opportunistic)
        .value("statistical", ctwr::SelectionMode::statistical);
    py::enum_<ctwr::AllocMode>(m, "AllocMode")
        .value("uniform", ctwr::AllocMode::uniform)
        .value("lemma", ctwr::AllocMode::lemma);

    m.def("db_to_linear", &ctwr::db_to_linear, py::arg("x_db"));
    m.def("linear_to_db", &ctwr::linear_to_db, py::arg("x_linear"));

    py::class_<ctwr::Rates>(m, "Rates")
        .def(py::init([](double Ru, double Rs, double Rd) {
                 return ctwr::Rates{Ru, Rs, Rd};
             }),
             py::arg("Ru"), py::arg("Rs"), py::arg("Rd"))
        .def_readwrite("Ru", &ctwr::Rates::Ru)
        .def_readwrite("Rs", &ctwr::Rates::Rs)
        .def_readwrite("Rd", &ctwr::Rates::Rd);

    py::class_<ctwr::Thresholds>(m, "Thresholds")
        .def_readonly("delta_u", &ctwr::Thresholds::delta_u)
        .def_readonly("delta_total", &ctwr::Thresholds::delta_total)
        .def_readonly("delta_s", &ctwr::Thresholds::delta_s)
        .def_readonly("delta_d", &ctwr::Thresholds::delta_d);
    m.def("thresholds",
          py::overload_cast<const ctwr::Rates&>(&ctwr::thresholds),
          py::arg("rates"));

    py::class_<ctwr::LinkStats>(m, "LinkStats")
        .def(py::init<>())
        .def("set", &ctwr::LinkStats::set, py::arg("a"), py::arg("b"),
             py::arg("sigma2"))
        .def("get", &ctwr::LinkStats::get, py::arg("a"), py::arg("b"))
        .def("has", &ctwr::LinkStats::has, py::arg("a"), py::arg("b"))
        .def("entries", &ctwr::LinkStats::entries);

    m.def("relay_node_name", &ctwr::relay_node_name, py::arg("relay_index"));

    py::class_<ctwr::ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<ctwr::Rates, double, double, double, int, ctwr::LinkStats>(),
             py::arg("rates"), py::arg("pu"), py::arg("n0"), py::arg("pth"),
             py::arg("m"), py::arg("links"))
        .def_property_readonly("rates", &ctwr::ScenarioConfig::rates)
        .def_property_readonly("pu", &ctwr::ScenarioConfig::pu)
        .def_property_readonly("n0", &ctwr::ScenarioConfig::n0)
        .def_property_readonly("pth", &ctwr::ScenarioConfig::pth)
        .def_property_readonly("m", &ctwr::ScenarioConfig::m)
        .def_property_readonly("gamma_u", &ctwr::ScenarioConfig::gamma_u)
        .def_property_readonly("delta_u", &ctwr::ScenarioConfig::delta_u)
        .def_property_readonly("delta_total", &ctwr::ScenarioConfig::delta_total)
        .def_property_readonly("delta_s", &ctwr::ScenarioConfig::delta_s)
        .def_property_readonly("delta_d", &ctwr::ScenarioConfig::delta_d)
        .def_property_readonly("links", &ctwr::ScenarioConfig::links)
        .def("sigma2_uv", &ctwr::ScenarioConfig::sigma2_uv)
        .def("sigma2_sd", &ctwr::ScenarioConfig::sigma2_sd)
        .def("sigma2_us", &ctwr::ScenarioConfig::sigma2_us)
        .def("sigma2_ud", &ctwr::ScenarioConfig::sigma2_ud)
        .def("sigma2_sv", &ctwr::ScenarioConfig::sigma2_sv)
        .def("sigma2_dv", &ctwr::ScenarioConfig::sigma2_dv)
        .def("sigma2_sr", &ctwr::ScenarioConfig::sigma2_sr, py::arg("i"))
        .def("sigma2_dr", &ctwr::ScenarioConfig::sigma2_dr, py::arg("i"))
        .def("sigma2_ur", &ctwr::ScenarioConfig::sigma2_ur, py::arg("i"))
        .def("sigma2_rv", &ctwr::ScenarioConfig::sigma2_rv, py::arg("i"))
        .def("with_pu", &ctwr::ScenarioConfig::with_pu, py::arg("pu"))
        .def("with_n0", &ctwr::ScenarioConfig::with_n0, py::arg("n0"))
        .def("with_pth", &ctwr::ScenarioConfig::with_pth, py::arg("pth"))
        .def("with_m", &ctwr::ScenarioConfig::with_m, py::arg("m"))
        .def("with_rates", &ctwr::ScenarioConfig::with_rates, py::arg("rates"));

    m.def("scenario_from_json_text", &ctwr::scenario_from_json_text,
          py::arg("json_text"));
    m.def("load_scenario_file", &ctwr::load_scenario_file, py::arg("path"));
    m.def("scenario_to_json_text", &ctwr::scenario_to_json_text, py::arg("cfg"));

    py::class_<ctwr::PowerAllocation>(m, "PowerAllocation")
        .def(py::init<>())
        .def_readwrite("Ps", &ctwr::PowerAllocation::Ps)
        .def_readwrite("Pd", &ctwr::PowerAllocation::Pd)
        .def_readwrite("Pr", &ctwr::PowerAllocation::Pr)
        .def_readwrite("alpha", &ctwr::PowerAllocation::alpha)
        .def_readwrite("beta", &ctwr::PowerAllocation::beta)
        .def_readwrite("g", &ctwr::PowerAllocation::g)
        .def_readwrite("forbidden", &ctwr::PowerAllocation::forbidden);

    py::class_<ctwr::OutageBreakdown::SubsetEntry>(m, "SubsetEntry")
        .def_readonly("mask", &ctwr::OutageBreakdown::SubsetEntry::mask)
        .def_readonly("p_set", &ctwr::OutageBreakdown::SubsetEntry::p_set)
        .def_readonly("p_out_given_set",
                      &ctwr::OutageBreakdown::SubsetEntry::p_out_given_set);
    py::class_<ctwr::OutageBreakdown>(m, "OutageBreakdown")
        .def_readonly("p_empty", &ctwr::OutageBreakdown::p_empty)
        .def_readonly("p_out_given_empty",
                      &ctwr::OutageBreakdown::p_out_given_empty)
        .def_readonly("per_subset", &ctwr::OutageBreakdown::per_subset)
        .def_readonly("p_total", &ctwr::OutageBreakdown::p_total);

    // Closed forms.
    m.def("compute_g", &ctwr::analytic::compute_g, py::arg("cfg"));
    m.def("constraint_lhs", &ctwr::analytic::constraint_lhs, py::arg("cfg"),
          py::arg("Ps"), py::arg("Pd"));
    m.def("primary_outage_phase1", &ctwr::analytic::primary_outage_phase1,
          py::arg("cfg"), py::arg("Ps"), py::arg("Pd"));
    m.def("primary_outage_phase2_relay",
          &ctwr::analytic::primary_outage_phase2_relay, py::arg("cfg"),
          py::arg("relay"), py::arg("Pr"));
    m.def("primary_outage_phase2_st", &ctwr::analytic::primary_outage_phase2_st,
          py::arg("cfg"), py::arg("Ps"), py::arg("Pd"));
    m.def("relay_outage_prob", &ctwr::analytic::relay_outage_prob, py::arg("cfg"),
          py::arg("relay"), py::arg("Ps"), py::arg("Pd"));
    m.def("st_outage_given_relay", &ctwr::analytic::st_outage_given_relay,
          py::arg("cfg"), py::arg("relay"), py::arg("alloc"));
    m.def("p_empty_set", &ctwr::analytic::p_empty_set, py::arg("cfg"),
          py::arg("Ps"), py::arg("Pd"));
    m.def("p_out_given_empty", &ctwr::analytic::p_out_given_empty, py::arg("cfg"),
          py::arg("Ps"), py::arg("Pd"));
    m.def("p_decoding_set", &ctwr::analytic::p_decoding_set, py::arg("cfg"),
          py::arg("mask"), py::arg("Ps"), py::arg("Pd"));
    m.def("p_out_given_set", &ctwr::analytic::p_out_given_set, py::arg("cfg"),
          py::arg("mask"), py::arg("alloc"));
    m.def("total_outage", &ctwr::analytic::total_outage, py::arg("cfg"),
          py::arg("alloc"));

    // Allocation.
    py::class_<ctwr::allocation::StPowerCandidates>(m, "StPowerCandidates")
        .def_readonly("Ps_ratio", &ctwr::allocation::StPowerCandidates::Ps_ratio)
        .def_readonly("Pd_ratio", &ctwr::allocation::StPowerCandidates::Pd_ratio)
        .def_readonly("Ps_lagrange",
                      &ctwr::allocation::StPowerCandidates::Ps_lagrange)
        .def_readonly("Pd_lagrange",
                      &ctwr::allocation::StPowerCandidates::Pd_lagrange)
        .def_readonly("chosen", &ctwr::allocation::StPowerCandidates::chosen)
        .def_readonly("achieved", &ctwr::allocation::StPowerCandidates::achieved)
        .def("Ps", &ctwr::allocation::StPowerCandidates::Ps)
        .def("Pd", &ctwr::allocation::StPowerCandidates::Pd);
    py::class_<ctwr::allocation::LimitingRelayResult>(m, "LimitingRelayResult")
        .def_readonly("r_min", &ctwr::allocation::LimitingRelayResult::r_min)
        .def_readonly("powers", &ctwr::allocation::LimitingRelayResult::powers);
    py::class_<ctwr::allocation::RatioTerms>(m, "RatioTerms")
        .def(py::init([](double a, double b, double c, double d) {
                 return ctwr::allocation::RatioTerms{a, b, c, d};
             }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
        .def_readwrite("a", &ctwr::allocation::RatioTerms::a)
        .def_readwrite("b", &ctwr::allocation::RatioTerms::b)
        .def_readwrite("c", &ctwr::allocation::RatioTerms::c)
        .def_readwrite("d", &ctwr::allocation::RatioTerms::d);

    m.def("optimal_st_powers", &ctwr::allocation::optimal_st_powers, py::arg("cfg"),
          py::arg("limiting_relay"));
    m.def("find_r_min", &ctwr::allocation::find_r_min, py::arg("cfg"));
    m.def("optimal_relay_power", &ctwr::allocation::optimal_relay_power,
          py::arg("cfg"), py::arg("relay"));
    m.def("ratio_terms", &ctwr::allocation::ratio_terms, py::arg("cfg"),
          py::arg("relay"), py::arg("Ps"), py::arg("Pd"), py::arg("Pr"));
    m.def("optimal_alpha", &ctwr::allocation::optimal_alpha, py::arg("terms"));
    m.def("optimal_ratios", &ctwr::allocation::optimal_ratios, py::arg("cfg"),
          py::arg("relay"), py::arg("Ps"), py::arg("Pd"), py::arg("Pr"));
    m.def("select_relay", &ctwr::allocation::select_relay, py::arg("cfg"),
          py::arg("mask"), py::arg("alloc"));
    m.def("symmetric_boundary_power", &ctwr::allocation::symmetric_boundary_power,
          py::arg("cfg"));
    m.def("full_allocation", &ctwr::allocation::full_allocation, py::arg("cfg"));
    m.def("uniform_allocation", &ctwr::allocation::uniform_allocation,
          py::arg("cfg"));
    m.def("make_allocation", &ctwr::allocation::make_allocation, py::arg("cfg"),
          py::arg("mode"));
    m.def("allocation_feasible", &ctwr::allocation::allocation_feasible,
          py::arg("cfg"), py::arg("alloc"), py::arg("rel_tol") = 1e-9);

    // Asymptotics.
    py::class_<ctwr::asymptotic::AsymptoticCoefficients>(m,
                                                         "AsymptoticCoefficients")
        .def_readonly("g_prime", &ctwr::asymptotic::AsymptoticCoefficients::g_prime)
        .def_readonly("rho_s", &ctwr::asymptotic::AsymptoticCoefficients::rho_s)
        .def_readonly("rho_d", &ctwr::asymptotic::AsymptoticCoefficients::rho_d)
        .def_readonly("rho_s_ratio",
                      &ctwr::asymptotic::AsymptoticCoefficients::rho_s_ratio)
        .def_readonly("rho_d_ratio",
                      &ctwr::asymptotic::AsymptoticCoefficients::rho_d_ratio)
        .def_readonly("rho_s_lagrange",
                      &ctwr::asymptotic::AsymptoticCoefficients::rho_s_lagrange)
        .def_readonly("rho_d_lagrange",
                      &ctwr::asymptotic::AsymptoticCoefficients::rho_d_lagrange)
        .def_readonly("chosen", &ctwr::asymptotic::AsymptoticCoefficients::chosen)
        .def_readonly("r_min", &ctwr::asymptotic::AsymptoticCoefficients::r_min)
        .def_readonly("rho_r", &ctwr::asymptotic::AsymptoticCoefficients::rho_r)
        .def_readonly("alpha", &ctwr::asymptotic::AsymptoticCoefficients::alpha)
        .def_readonly("beta", &ctwr::asymptotic::AsymptoticCoefficients::beta);
    m.def("asymptotic_allocation", &ctwr::asymptotic::asymptotic_allocation,
          py::arg("cfg"));
    m.def("asymptotic_uniform_allocation",
          &ctwr::asymptotic::asymptotic_uniform_allocation, py::arg("cfg"));
    m.def("asymptotic_relay_outage", &ctwr::asymptotic::asymptotic_relay_outage,
          py::arg("cfg"), py::arg("relay"), py::arg("rho_s"), py::arg("rho_d"));
    m.def("asymptotic_out_given_empty",
          &ctwr::asymptotic::asymptotic_out_given_empty, py::arg("cfg"),
          py::arg("rho_s"), py::arg("rho_d"));
    m.def("asymptotic_out_given_set", &ctwr::asymptotic::asymptotic_out_given_set,
          py::arg("cfg"), py::arg("mask"), py::arg("coeffs"));
    m.def("asymptotic_total_outage",
          py::overload_cast<const ctwr::ScenarioConfig&,
                            const ctwr::asymptotic::AsymptoticCoefficients&>(
              &ctwr::asymptotic::asymptotic_total_outage),
          py::arg("cfg"), py::arg("coeffs"));
    m.def("asymptotic_total_outage",
          py::overload_cast<const ctwr::ScenarioConfig&>(
              &ctwr::asymptotic::asymptotic_total_outage),
          py::arg("cfg"));

    // Monte Carlo.
    py::class_<ctwr::mc::ChannelDraw>(m, "ChannelDraw")
        .def_readonly("uv", &ctwr::mc::ChannelDraw::uv)
        .def_readonly("sv", &ctwr::mc::ChannelDraw::sv)
        .def_readonly("dv", &ctwr::mc::ChannelDraw::dv)
        .def_readonly("us", &ctwr::mc::ChannelDraw::us)
        .def_readonly("ud", &ctwr::mc::ChannelDraw::ud)
        .def_readonly("ds", &ctwr::mc::ChannelDraw::ds)
        .def_readonly("sd", &ctwr::mc::ChannelDraw::sd)
        .def_readonly("ur", &ctwr::mc::ChannelDraw::ur)
        .def_readonly("sr", &ctwr::mc::ChannelDraw::sr)
        .def_readonly("dr", &ctwr::mc::ChannelDraw::dr)
        .def_readonly("rs", &ctwr::mc::ChannelDraw::rs)
        .def_readonly("rd", &ctwr::mc::ChannelDraw::rd)
        .def_readonly("rv", &ctwr::mc::ChannelDraw::rv);
    py::class_<ctwr::mc::TrialOutcome>(m, "TrialOutcome")
        .def_readonly("secondary_outage", &ctwr::mc::TrialOutcome::secondary_outage)
        .def_readonly("primary_outage_phase1",
                      &ctwr::mc::TrialOutcome::primary_outage_phase1)
        .def_readonly("primary_outage_phase2",
                      &ctwr::mc::TrialOutcome::primary_outage_phase2)
        .def_readonly("decode_mask", &ctwr::mc::TrialOutcome::decode_mask)
        .def_readonly("transmitter", &ctwr::mc::TrialOutcome::transmitter);
    py::class_<ctwr::mc::McEstimate>(m, "McEstimate")
        .def_readonly("p_hat", &ctwr::mc::McEstimate::p_hat)
        .def_readonly("trials", &ctwr::mc::McEstimate::trials)
        .def_readonly("std_err", &ctwr::mc::McEstimate::std_err)
        .def_readonly("seed", &ctwr::mc::McEstimate::seed)
        .def_readonly("mode", &ctwr::mc::McEstimate::mode);
    py::enum_<ctwr::mc::Target::Kind>(m, "TargetKind")
        .value("secondary_outage", ctwr::mc::Target::Kind::secondary_outage)
        .value("primary_phase1", ctwr::mc::Target::Kind::primary_phase1)
        .value("primary_phase2", ctwr::mc::Target::Kind::primary_phase2)
        .value("relay_outage", ctwr::mc::Target::Kind::relay_outage)
        .value("forward_outage", ctwr::mc::Target::Kind::forward_outage)
        .value("decode_set", ctwr::mc::Target::Kind::decode_set)
        .value("out_given_set", ctwr::mc::Target::Kind::out_given_set);
    py::class_<ctwr::mc::Target>(m, "Target")
        .def(py::init([](ctwr::mc::Target::Kind kind, std::uint32_t index) {
                 return ctwr::mc::Target{kind, index};
             }),
             py::arg("kind"), py::arg("index") = 0)
        .def_readwrite("kind", &ctwr::mc::Target::kind)
        .def_readwrite("index", &ctwr::mc::Target::index);
    py::class_<ctwr::mc::SearchResult>(m, "SearchResult")
        .def_readonly("Ps", &ctwr::mc::SearchResult::Ps)
        .def_readonly("Pd", &ctwr::mc::SearchResult::Pd)
        .def_readonly("Pr", &ctwr::mc::SearchResult::Pr)
        .def_readonly("alpha", &ctwr::mc::SearchResult::alpha)
        .def_readonly("achieved_outage", &ctwr::mc::SearchResult::achieved_outage)
        .def_readonly("pd_cell", &ctwr::mc::SearchResult::pd_cell)
        .def_readonly("alpha_cell", &ctwr::mc::SearchResult::alpha_cell);

    m.def("draw_channels", &ctwr::mc::draw_channels, py::arg("cfg"),
          py::arg("seed"), py::arg("trial"));
    m.def("simulate_trial", &ctwr::mc::simulate_trial, py::arg("cfg"),
          py::arg("alloc"), py::arg("draw"), py::arg("mode"));
    m.def("estimate", &ctwr::mc::estimate, py::arg("cfg"), py::arg("alloc"),
          py::arg("n_trials"), py::arg("seed"), py::arg("mode"), py::arg("target"),
          py::call_guard<py::gil_scoped_release>());
    m.def("exhaustive_power_search", &ctwr::mc::exhaustive_power_search,
          py::arg("cfg"), py::arg("n_boundary") = 400, py::arg("n_alpha") = 10000,
          py::call_guard<py::gil_scoped_release>());

    // Oracles (reference implementations).
    m.def("relay_outage_quadrature", &ctwr::oracle::relay_outage_quadrature,
          py::arg("cfg"), py::arg("relay"), py::arg("Ps"), py::arg("Pd"),
          py::arg("tol") = 1e-10);
    m.def("out_given_set_quadrature", &ctwr::oracle::out_given_set_quadrature,
          py::arg("cfg"), py::arg("mask"), py::arg("alloc"),
          py::arg("tol") = 1e-9);

    // Sweeps and validation.
    py::enum_<ctwr::sweep::SweepVariable>(m, "SweepVariable")
        .value("gamma_u_dB", ctwr::sweep::SweepVariable::gamma_u_dB)
        .value("P_th", ctwr::sweep::SweepVariable::P_th)
        .value("N0_dB", ctwr::sweep::SweepVariable::N0_dB);
    py::class_<ctwr::sweep::VariantSpec>(m, "VariantSpec")
        .def(py::init([](int M, ctwr::AllocMode alloc, ctwr::SelectionMode select) {
                 return ctwr::sweep::VariantSpec{M, alloc, select};
             }),
             py::arg("M"), py::arg("alloc") = ctwr::AllocMode::lemma,
             py::arg("select") = ctwr::SelectionMode::opportunistic)
        .def_readwrite("M", &ctwr::sweep::VariantSpec::M)
        .def_readwrite("alloc", &ctwr::sweep::VariantSpec::alloc)
        .def_readwrite("select", &ctwr::sweep::VariantSpec::select);
    py::class_<ctwr::sweep::SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("variable", &ctwr::sweep::SweepSpec::variable)
        .def_readwrite("start", &ctwr::sweep::SweepSpec::start)
        .def_readwrite("stop", &ctwr::sweep::SweepSpec::stop)
        .def_readwrite("step", &ctwr::sweep::SweepSpec::step)
        .def_readwrite("variants", &ctwr::sweep::SweepSpec::variants)
        .def_readwrite("mc_trials", &ctwr::sweep::SweepSpec::mc_trials)
        .def_readwrite("seed", &ctwr::sweep::SweepSpec::seed);
    py::class_<ctwr::sweep::SweepRow>(m, "SweepRow")
        .def_readonly("x", &ctwr::sweep::SweepRow::x)
        .def_readonly("M", &ctwr::sweep::SweepRow::M)
        .def_readonly("alloc", &ctwr::sweep::SweepRow::alloc)
        .def_readonly("select", &ctwr::sweep::SweepRow::select)
        .def_readonly("p_analytic", &ctwr::sweep::SweepRow::p_analytic)
        .def_readonly("p_asymptotic", &ctwr::sweep::SweepRow::p_asymptotic)
        .def_readonly("p_mc", &ctwr::sweep::SweepRow::p_mc)
        .def_readonly("mc_se", &ctwr::sweep::SweepRow::mc_se)
        .def_readonly("g", &ctwr::sweep::SweepRow::g)
        .def_readonly("forbidden", &ctwr::sweep::SweepRow::forbidden)
        .def_readonly("Ps", &ctwr::sweep::SweepRow::Ps)
        .def_readonly("Pd", &ctwr::sweep::SweepRow::Pd)
        .def_readonly("Pr", &ctwr::sweep::SweepRow::Pr)
        .def_readonly("alpha", &ctwr::sweep::SweepRow::alpha);
    m.def("run_sweep", &ctwr::sweep::run_sweep, py::arg("base"), py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_to_csv", &ctwr::sweep::to_csv, py::arg("rows"));
    py::class_<ctwr::sweep::PaCompareRow>(m, "PaCompareRow")
        .def_readonly("n0_db", &ctwr::sweep::PaCompareRow::n0_db)
        .def_readonly("g", &ctwr::sweep::PaCompareRow::g)
        .def_readonly("forbidden", &ctwr::sweep::PaCompareRow::forbidden)
        .def_readonly("Pd_lemma", &ctwr::sweep::PaCompareRow::Pd_lemma)
        .def_readonly("Pd_search", &ctwr::sweep::PaCompareRow::Pd_search)
        .def_readonly("alpha_lemma", &ctwr::sweep::PaCompareRow::alpha_lemma)
        .def_readonly("alpha_search", &ctwr::sweep::PaCompareRow::alpha_search)
        .def_readonly("p_out_lemma", &ctwr::sweep::PaCompareRow::p_out_lemma)
        .def_readonly("p_out_search", &ctwr::sweep::PaCompareRow::p_out_search)
        .def_readonly("pd_cell", &ctwr::sweep::PaCompareRow::pd_cell)
        .def_readonly("alpha_cell", &ctwr::sweep::PaCompareRow::alpha_cell);
    m.def("power_allocation_compare", &ctwr::sweep::power_allocation_compare,
          py::arg("base"), py::arg("n0_start_db"), py::arg("n0_stop_db"),
          py::arg("n0_step_db"), py::arg("n_boundary") = 400,
          py::arg("n_alpha") = 10000,
          py::call_guard<py::gil_scoped_release>());
    m.def("pa_compare_to_csv", &ctwr::sweep::pa_compare_to_csv, py::arg("rows"));

    py::class_<ctwr::validate::CheckResult>(m, "CheckResult")
        .def_readonly("name", &ctwr::validate::CheckResult::name)
        .def_readonly("value", &ctwr::validate::CheckResult::value)
        .def_readonly("reference", &ctwr::validate::CheckResult::reference)
        .def_readonly("tolerance", &ctwr::validate::CheckResult::tolerance)
        .def_readonly("pass", &ctwr::validate::CheckResult::pass)
        .def_readonly("detail", &ctwr::validate::CheckResult::detail);
    m.def("run_validation", &ctwr::validate::run_validation, py::arg("cfg"),
          py::arg("trials"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("all_passed", &ctwr::validate::all_passed, py::arg("results"));
}
