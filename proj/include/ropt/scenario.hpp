#pragma once

#include <string>

#include <json.hpp>

#include "ropt/environment.hpp"
#include "ropt/solver.hpp"

namespace ropt {

/// Malformed scenario file (JSON syntax, unknown key, wrong shape).
/// Distinct from domain validation failures, which produce a report.
struct ScenarioParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    std::string out_dir = ".";
    bool verbose = false;
};

/// Parsed scenario file: environment primitives plus optional solver and
/// output blocks.
struct Scenario {
    double theta_low = 0.0;
    double theta_high = 0.0;
    CostFamily cost_family = CostFamily::Uniform;
    double exponent = 1.0;                    // power family
    std::vector<Knot> density_knots;          // piecewise-linear-density family
    std::vector<Knot> conjectured_demand_knots;
    std::vector<Knot> lowest_demand_knots;
    std::vector<std::vector<Knot>> extra_demand_knots;
    double quantity_cap = 0.0;
    SolverOptions solver;
    OutputOptions output;

    Environment build_environment() const;
    nlohmann::ordered_json to_json() const;
};

Scenario parse_scenario(const nlohmann::ordered_json& j);
Scenario parse_scenario_file(const std::string& path);

/// One CSV row formatter: 17 significant digits, comma-delimited, LF.
std::string csv_row(const std::vector<double>& values);

}  // namespace ropt
