#include "ropt/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace ropt {

namespace {

using nlohmann::ordered_json;

std::vector<Knot> parse_knots(const ordered_json& j, const std::string& where) {
    if (!j.is_array())
        throw ScenarioParseError(where + " must be an array of [x, y] pairs");
    std::vector<Knot> knots;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number())
            throw ScenarioParseError(where + " must be an array of [x, y] pairs");
        knots.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return knots;
}

ordered_json knots_to_json(const std::vector<Knot>& knots) {
    ordered_json out = ordered_json::array();
    for (const auto& k : knots) out.push_back(ordered_json::array({k.x, k.y}));
    return out;
}

void reject_unknown_keys(const ordered_json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ScenarioParseError("unknown key \"" + it.key() + "\" in " + where);
}

double require_number(const ordered_json& j, const std::string& key) {
    if (!j.contains(key)) throw ScenarioParseError("missing key \"" + key + "\"");
    if (!j.at(key).is_number())
        throw ScenarioParseError("key \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

}  // namespace

Environment Scenario::build_environment() const {
    CostModel cost = [&] {
        switch (cost_family) {
            case CostFamily::Uniform: return CostModel::uniform(theta_low, theta_high);
            case CostFamily::Power: return CostModel::power(theta_low, theta_high, exponent);
            case CostFamily::PiecewiseLinearDensity:
                return CostModel::piecewise_linear_density(theta_low, theta_high,
                                                           density_knots);
        }
        throw std::logic_error("unreachable cost family");
    }();
    std::vector<PiecewiseLinearCurve> extras;
    for (const auto& knots : extra_demand_knots) extras.emplace_back(knots);
    return Environment(std::move(cost), PiecewiseLinearCurve(conjectured_demand_knots),
                       PiecewiseLinearCurve(lowest_demand_knots), std::move(extras),
                       quantity_cap);
}

nlohmann::ordered_json Scenario::to_json() const {
    ordered_json j;
    j["theta_low"] = theta_low;
    j["theta_high"] = theta_high;
    j["cost_family"] = to_string(cost_family);
    ordered_json params = ordered_json::object();
    if (cost_family == CostFamily::Power) params["exponent"] = exponent;
    if (cost_family == CostFamily::PiecewiseLinearDensity)
        params["density_knots"] = knots_to_json(density_knots);
    j["cost_params"] = params;
    j["conjectured_demand_knots"] = knots_to_json(conjectured_demand_knots);
    j["lowest_demand_knots"] = knots_to_json(lowest_demand_knots);
    if (!extra_demand_knots.empty()) {
        ordered_json extras = ordered_json::array();
        for (const auto& knots : extra_demand_knots) extras.push_back(knots_to_json(knots));
        j["extra_demand_knots"] = extras;
    }
    j["quantity_cap"] = quantity_cap;
    ordered_json s;
    s["grid_points"] = solver.grid_points;
    s["tol_constraint"] = solver.tol_constraint;
    s["tol_objective"] = solver.tol_objective;
    s["max_iters"] = solver.max_iters;
    s["seed"] = solver.seed;
    j["solver"] = s;
    ordered_json o;
    o["out_dir"] = output.out_dir;
    o["verbose"] = output.verbose;
    j["output"] = o;
    return j;
}

Scenario parse_scenario(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw ScenarioParseError("scenario must be a JSON object");
    reject_unknown_keys(j,
                        {"theta_low", "theta_high", "cost_family", "cost_params",
                         "conjectured_demand_knots", "lowest_demand_knots",
                         "extra_demand_knots", "quantity_cap", "solver", "output"},
                        "scenario");
    Scenario sc;
    sc.theta_low = require_number(j, "theta_low");
    sc.theta_high = require_number(j, "theta_high");
    if (!j.contains("cost_family") || !j.at("cost_family").is_string())
        throw ScenarioParseError("key \"cost_family\" must be a string");
    try {
        sc.cost_family = cost_family_from_string(j.at("cost_family").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ScenarioParseError(e.what());
    }
    const ordered_json params =
        j.contains("cost_params") ? j.at("cost_params") : ordered_json::object();
    reject_unknown_keys(params, {"exponent", "density_knots"}, "cost_params");
    if (sc.cost_family == CostFamily::Power) sc.exponent = require_number(params, "exponent");
    if (sc.cost_family == CostFamily::PiecewiseLinearDensity) {
        if (!params.contains("density_knots"))
            throw ScenarioParseError("missing key \"density_knots\"");
        sc.density_knots = parse_knots(params.at("density_knots"), "density_knots");
    }
    if (!j.contains("conjectured_demand_knots"))
        throw ScenarioParseError("missing key \"conjectured_demand_knots\"");
    sc.conjectured_demand_knots =
        parse_knots(j.at("conjectured_demand_knots"), "conjectured_demand_knots");
    if (!j.contains("lowest_demand_knots"))
        throw ScenarioParseError("missing key \"lowest_demand_knots\"");
    sc.lowest_demand_knots = parse_knots(j.at("lowest_demand_knots"), "lowest_demand_knots");
    if (j.contains("extra_demand_knots")) {
        if (!j.at("extra_demand_knots").is_array())
            throw ScenarioParseError("extra_demand_knots must be a list of knot arrays");
        for (const auto& one : j.at("extra_demand_knots"))
            sc.extra_demand_knots.push_back(parse_knots(one, "extra_demand_knots entry"));
    }
    sc.quantity_cap = require_number(j, "quantity_cap");

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        reject_unknown_keys(
            s, {"grid_points", "tol_constraint", "tol_objective", "max_iters", "seed"},
            "solver");
        if (s.contains("grid_points"))
            sc.solver.grid_points = s.at("grid_points").get<std::size_t>();
        if (s.contains("tol_constraint"))
            sc.solver.tol_constraint = s.at("tol_constraint").get<double>();
        if (s.contains("tol_objective"))
            sc.solver.tol_objective = s.at("tol_objective").get<double>();
        if (s.contains("max_iters")) sc.solver.max_iters = s.at("max_iters").get<std::size_t>();
        if (s.contains("seed")) sc.solver.seed = s.at("seed").get<unsigned>();
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        reject_unknown_keys(o, {"out_dir", "verbose"}, "output");
        if (o.contains("out_dir")) sc.output.out_dir = o.at("out_dir").get<std::string>();
        if (o.contains("verbose")) sc.output.verbose = o.at("verbose").get<bool>();
    }
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError("cannot open scenario file: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports byte offsets; recover line/column for diagnostics
        std::ifstream again(path);
        std::string text((std::istreambuf_iterator<char>(again)),
                         std::istreambuf_iterator<char>());
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ScenarioParseError("parse error at line " + std::to_string(line) + ", column " +
                                 std::to_string(col) + ": " + e.what());
    }
    return parse_scenario(j);
}

std::string csv_row(const std::vector<double>& values) {
    std::string row;
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        if (i) row += ',';
        row += buf;
    }
    row += '\n';
    return row;
}

}  // namespace ropt
