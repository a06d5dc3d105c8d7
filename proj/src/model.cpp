#include "ctwr/model.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctwr/detail/numeric.hpp"

namespace ctwr {

using nlohmann::json;

double db_to_linear(double x_db) {
    if (!std::isfinite(x_db)) {
        throw validation_error("db_to_linear: non-finite input");
    }
    return std::pow(10.0, x_db / 10.0);
}

double linear_to_db(double x_linear) {
    if (!std::isfinite(x_linear) || x_linear <= 0.0) {
        throw validation_error("linear_to_db: input must be finite and > 0");
    }
    return 10.0 * std::log10(x_linear);
}

Thresholds thresholds(const Rates& rates) {
    for (double r : {rates.Ru, rates.Rs, rates.Rd}) {
        if (!std::isfinite(r) || r < 0.0) {
            throw validation_error("thresholds: rates must be finite and >= 0");
        }
    }
    Thresholds t;
    t.delta_u = std::exp2(rates.Ru) - 1.0;
    t.delta_s = std::exp2(2.0 * rates.Rs) - 1.0;
    t.delta_d = std::exp2(2.0 * rates.Rd) - 1.0;
    t.delta_total = std::exp2(2.0 * (rates.Rs + rates.Rd)) - 1.0;
    return t;
}

Thresholds thresholds(const ScenarioConfig& cfg) { return thresholds(cfg.rates()); }

namespace {

bool valid_node_name(std::string_view node) {
    static const std::regex re("^(u|v|s|d|r[1-9][0-9]*)$");
    return std::regex_match(node.begin(), node.end(), re);
}

std::string trim(std::string_view sv) {
    size_t b = 0, e = sv.size();
    while (b < e && std::isspace(static_cast<unsigned char>(sv[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(sv[e - 1]))) --e;
    return std::string(sv.substr(b, e - b));
}

} // namespace

std::string LinkStats::canonical_key(std::string_view a, std::string_view b) {
    std::string na = trim(a);
    std::string nb = trim(b);
    if (!valid_node_name(na) || !valid_node_name(nb)) {
        throw validation_error("LinkStats: invalid node name in link (" +
                               na + "," + nb + ")");
    }
    if (na == nb) {
        throw validation_error("LinkStats: link endpoints must differ (" + na + ")");
    }
    if (nb < na) std::swap(na, nb);
    return na + "," + nb;
}

void LinkStats::set(std::string_view a, std::string_view b, double sigma2) {
    if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
        throw validation_error("LinkStats: mean gain for (" + std::string(a) + "," +
                               std::string(b) + ") must be finite and > 0");
    }
    sigma2_[canonical_key(a, b)] = sigma2;
}

double LinkStats::get(std::string_view a, std::string_view b) const {
    auto it = sigma2_.find(canonical_key(a, b));
    if (it == sigma2_.end()) {
        throw validation_error("LinkStats: missing link (" + std::string(a) + "," +
                               std::string(b) + ")");
    }
    return it->second;
}

bool LinkStats::has(std::string_view a, std::string_view b) const {
    return sigma2_.count(canonical_key(a, b)) > 0;
}

std::string relay_node_name(int relay_index) {
    if (relay_index < 0) {
        throw validation_error("relay_node_name: negative index");
    }
    return "r" + std::to_string(relay_index + 1);
}

ScenarioConfig::ScenarioConfig(Rates rates, double pu, double n0, double pth,
                               int m, LinkStats links)
    : rates_(rates), pu_(pu), n0_(n0), pth_(pth), m_(m), links_(std::move(links)) {
    thresholds_ = thresholds(rates_);
    if (!std::isfinite(pu_) || pu_ <= 0.0) {
        throw validation_error("ScenarioConfig: P_u must be finite and > 0");
    }
    if (!std::isfinite(n0_) || n0_ <= 0.0) {
        throw validation_error("ScenarioConfig: N0 must be finite and > 0");
    }
    if (!std::isfinite(pth_) || pth_ <= 0.0 || pth_ >= 1.0) {
        throw validation_error("ScenarioConfig: P_th must lie in (0,1)");
    }
    if (m_ < 0) {
        throw validation_error("ScenarioConfig: M must be >= 0");
    }
    s_uv_ = links_.get("u", "v");
    s_sd_ = links_.get("s", "d");
    s_us_ = links_.get("u", "s");
    s_ud_ = links_.get("u", "d");
    s_sv_ = links_.get("s", "v");
    s_dv_ = links_.get("d", "v");
    s_sr_.resize(m_);
    s_dr_.resize(m_);
    s_ur_.resize(m_);
    s_rv_.resize(m_);
    for (int i = 0; i < m_; ++i) {
        const std::string r = relay_node_name(i);
        s_sr_[i] = links_.get("s", r);
        s_dr_[i] = links_.get("d", r);
        s_ur_[i] = links_.get("u", r);
        s_rv_[i] = links_.get(r, "v");
    }
}

std::size_t ScenarioConfig::check_relay(int i) const {
    if (i < 0 || i >= m_) {
        throw validation_error("ScenarioConfig: relay index " + std::to_string(i) +
                               " out of range for M=" + std::to_string(m_));
    }
    return static_cast<std::size_t>(i);
}

ScenarioConfig ScenarioConfig::with_pu(double pu) const {
    return ScenarioConfig(rates_, pu, n0_, pth_, m_, links_);
}
ScenarioConfig ScenarioConfig::with_n0(double n0) const {
    return ScenarioConfig(rates_, pu_, n0, pth_, m_, links_);
}
ScenarioConfig ScenarioConfig::with_pth(double pth) const {
    return ScenarioConfig(rates_, pu_, n0_, pth, m_, links_);
}
ScenarioConfig ScenarioConfig::with_m(int m) const {
    return ScenarioConfig(rates_, pu_, n0_, pth_, m, links_);
}
ScenarioConfig ScenarioConfig::with_rates(const Rates& rates) const {
    return ScenarioConfig(rates, pu_, n0_, pth_, m_, links_);
}

namespace {

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw validation_error("scenario: missing or non-numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
}

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) {
        throw validation_error("scenario: top level must be a JSON object");
    }
    static const char* known[] = {"rates",  "P_u_dB", "gamma_u_dB",
                                  "N0_dB",  "P_th",   "M",
                                  "links"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) {
            throw validation_error("scenario: unknown field '" + key + "'");
        }
    }
    if (!j.contains("rates") || !j.at("rates").is_object()) {
        throw validation_error("scenario: missing 'rates' object");
    }
    const json& jr = j.at("rates");
    for (const auto& [key, value] : jr.items()) {
        (void)value;
        if (key != "Ru" && key != "Rs" && key != "Rd") {
            throw validation_error("scenario: unknown rate field '" + key + "'");
        }
    }
    Rates rates;
    rates.Ru = require_number(jr, "Ru");
    rates.Rs = require_number(jr, "Rs");
    rates.Rd = require_number(jr, "Rd");

    const bool has_pu = j.contains("P_u_dB");
    const bool has_gu = j.contains("gamma_u_dB");
    if (has_pu == has_gu) {
        throw validation_error(
            "scenario: specify exactly one of 'P_u_dB' and 'gamma_u_dB'");
    }
    const double n0 = db_to_linear(require_number(j, "N0_dB"));
    const double pu = has_pu ? db_to_linear(require_number(j, "P_u_dB"))
                             : n0 * db_to_linear(require_number(j, "gamma_u_dB"));
    const double pth = require_number(j, "P_th");
    if (!j.contains("M") || !j.at("M").is_number_integer()) {
        throw validation_error("scenario: missing or non-integer field 'M'");
    }
    const int m = j.at("M").get<int>();

    if (!j.contains("links") || !j.at("links").is_object()) {
        throw validation_error("scenario: missing 'links' object");
    }
    LinkStats links;
    for (const auto& [key, value] : j.at("links").items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos) {
            throw validation_error("scenario: link key '" + key +
                                   "' must be 'node,node'");
        }
        if (!value.is_number()) {
            throw validation_error("scenario: link '" + key + "' must map to dB value");
        }
        links.set(key.substr(0, comma), key.substr(comma + 1),
                  db_to_linear(value.get<double>()));
    }
    return ScenarioConfig(rates, pu, n0, pth, m, std::move(links));
}

} // namespace

ScenarioConfig scenario_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("scenario: JSON parse error: ") + e.what());
    }
    return scenario_from_json(j);
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw validation_error("scenario: cannot open file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

std::string scenario_to_json_text(const ScenarioConfig& cfg) {
    json j;
    j["rates"] = {{"Ru", cfg.rates().Ru}, {"Rs", cfg.rates().Rs}, {"Rd", cfg.rates().Rd}};
    j["P_u_dB"] = linear_to_db(cfg.pu());
    j["N0_dB"] = linear_to_db(cfg.n0());
    j["P_th"] = cfg.pth();
    j["M"] = cfg.m();
    json links = json::object();
    for (const auto& [key, sigma2] : cfg.links().entries()) {
        links[key] = linear_to_db(sigma2);
    }
    j["links"] = links;
    return j.dump(2);
}

std::string to_string(SelectionMode mode) {
    return mode == SelectionMode::statistical ? "statistical" : "opportunistic";
}

std::string to_string(AllocMode mode) {
    return mode == AllocMode::uniform ? "uniform" : "lemma";
}

SelectionMode selection_mode_from_string(const std::string& s) {
    if (s == "statistical") return SelectionMode::statistical;
    if (s == "opportunistic") return SelectionMode::opportunistic;
    throw validation_error("unknown selection mode '" + s +
                           "' (expected statistical|opportunistic)");
}

AllocMode alloc_mode_from_string(const std::string& s) {
    if (s == "uniform") return AllocMode::uniform;
    if (s == "lemma") return AllocMode::lemma;
    throw validation_error("unknown allocation mode '" + s +
                           "' (expected uniform|lemma)");
}

} // namespace ctwr
