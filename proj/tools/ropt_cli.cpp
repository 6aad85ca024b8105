#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ropt/oracle.hpp"
#include "ropt/regulation.hpp"
#include "ropt/scenario.hpp"

namespace {

using namespace ropt;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitPrecondition = 4;

struct Overrides {
    std::size_t grid_points = 0;
    unsigned seed = 0;
    bool seed_set = false;
    std::string out_dir;
    bool verbose = false;
    double tol_constraint = 0.0;
    double tol_objective = 0.0;
    std::size_t max_iters = 0;
};

void apply(Scenario& sc, const Overrides& ov) {
    if (ov.grid_points) sc.solver.grid_points = ov.grid_points;
    if (ov.seed_set) sc.solver.seed = ov.seed;
    if (!ov.out_dir.empty()) sc.output.out_dir = ov.out_dir;
    if (ov.verbose) sc.output.verbose = true;
    if (ov.tol_constraint > 0) sc.solver.tol_constraint = ov.tol_constraint;
    if (ov.tol_objective > 0) sc.solver.tol_objective = ov.tol_objective;
    if (ov.max_iters) sc.solver.max_iters = ov.max_iters;
}

std::ofstream open_out(const Scenario& sc, const std::string& name) {
    std::filesystem::create_directories(sc.output.out_dir);
    const auto path = std::filesystem::path(sc.output.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

nlohmann::ordered_json summary_json(const Environment& env, const RoptSolution& sol) {
    auto check = shortlist_check(sol.mechanism, env, 1e-7);
    nlohmann::ordered_json j;
    j["g_star"] = max_guarantee(env);
    j["objective"] = sol.objective;
    j["theta_star"] = sol.theta_star;
    j["theta_m"] = sol.theta_m;
    j["floor_optimal"] = sol.floor_optimal;
    j["binding"] = check.find("robustness")->binding;
    j["solver_stats"]["iterations"] = sol.stats.iterations;
    j["solver_stats"]["constraint_violation"] = sol.stats.constraint_violation;
    j["solver_stats"]["gap_estimate"] = sol.stats.gap_estimate;
    j["solver_stats"]["converged"] = sol.stats.converged;
    return j;
}

int cmd_validate(const Scenario& sc) {
    const auto env = sc.build_environment();
    auto report = env.validate();
    std::cout << report.to_json(sc.output.verbose).dump(2) << "\n";
    return report.pass() ? kExitOk : kExitDomain;
}

RoptSolution solve_checked(const Scenario& sc, const Environment& env) {
    auto report = env.validate();
    if (!report.pass()) {
        std::cerr << report.to_json().dump(2) << "\n";
        throw std::invalid_argument("environment validation failed");
    }
    return solve_ropt(env, sc.solver);
}

void write_solution_csv(const Scenario& sc, const Environment& env, const RoptSolution& sol) {
    const auto& grid = sol.mechanism.schedule.grid;
    const auto qbm = baron_myerson(env, grid.size());
    const auto floor_mech = bm_with_floor(env, grid.size());
    const auto rents = sol.mechanism.rents();
    const auto profile = worst_case_profile(sol.mechanism, env);
    auto out = open_out(sc, "solution.csv");
    out << "theta,q_bm,q_floor,q_opt,rent,profile\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << csv_row({grid[i], qbm.values[i], floor_mech.schedule.values[i],
                        sol.mechanism.schedule.values[i], rents[i], profile.values[i]});
}

int cmd_solve(const Scenario& sc) {
    const auto env = sc.build_environment();
    const auto sol = solve_checked(sc, env);
    write_solution_csv(sc, env, sol);
    const auto j = summary_json(env, sol);
    open_out(sc, "summary.json") << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_compare(const Scenario& sc) {
    const auto env = sc.build_environment();
    const auto sol = solve_checked(sc, env);
    const auto rep = compare_regulation(env, sol);
    const auto j = rep.to_json();
    open_out(sc, "comparison.json") << j.dump(2) << "\n";
    std::printf("quantity welfare  %.9f\n", rep.quantity_welfare);
    std::printf("price welfare     %.9f\n", rep.price_welfare);
    std::printf("guarantee (both)  %.9f\n", rep.guarantee_both);
    std::printf("winner            %s\n", to_string(rep.winner).c_str());
    std::printf("floor optimal     %s\n", rep.floor_optimal ? "yes" : "no");
    std::printf("sufficient cond.  %s\n", rep.sufficient_condition.c_str());
    if (rep.outside_coverage) std::printf("note: outside the ranking results' coverage\n");
    return kExitOk;
}

int cmd_figure(const Scenario& sc, int figure_id) {
    const auto env = sc.build_environment();
    const auto sol = solve_checked(sc, env);
    const auto& grid = sol.mechanism.schedule.grid;
    const auto qbm = baron_myerson(env, grid.size());
    const auto floor_mech = bm_with_floor(env, grid.size());
    if (figure_id == 1 || figure_id == 2) {
        if (figure_id == 2 && sol.floor_optimal) {
            std::cerr << "figure 2 illustrates the general solution; the floor mechanism "
                         "is already optimal for this scenario\n";
            return kExitPrecondition;
        }
        auto out = open_out(sc, "figure" + std::to_string(figure_id) + ".csv");
        out << (figure_id == 1 ? "theta,q_bm,q_star,d_low,d_star\n"
                               : "theta,q_bm,q_star,d_low,d_star,q_opt\n");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<double> row = {grid[i], qbm.values[i], floor_mech.schedule.values[i],
                                       env.lowest_demand().value(grid[i]),
                                       env.conjectured_demand().value(grid[i])};
            if (figure_id == 2) row.push_back(sol.mechanism.schedule.values[i]);
            out << csv_row(row);
        }
        return kExitOk;
    }
    const auto reg = bm_with_price_cap(env, grid.size());
    auto out = open_out(sc, "figure3.csv");
    out << "theta,z_star,p_opt,theta_high\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << csv_row({grid[i], env.cost().virtual_cost(grid[i]), reg.prices[i],
                        env.theta_high()});
    return kExitOk;
}

int cmd_sweep(Scenario sc, const std::string& parameter, const std::vector<double>& values) {
    // Supported parameters: lowest-demand-y:<i>, conjectured-demand-y:<i>,
    // exponent, grid-points.
    auto apply_value = [&](Scenario& s, double v) -> bool {
        if (parameter == "grid-points") {
            s.solver.grid_points = static_cast<std::size_t>(v);
            return true;
        }
        if (parameter == "exponent") {
            if (s.cost_family != CostFamily::Power) return false;
            s.exponent = v;
            return true;
        }
        const auto colon = parameter.find(':');
        if (colon == std::string::npos) return false;
        const std::string head = parameter.substr(0, colon);
        const std::size_t idx = std::stoul(parameter.substr(colon + 1));
        std::vector<Knot>* knots = nullptr;
        if (head == "lowest-demand-y") knots = &s.lowest_demand_knots;
        if (head == "conjectured-demand-y") knots = &s.conjectured_demand_knots;
        if (!knots || idx >= knots->size()) return false;
        (*knots)[idx].y = v;
        return true;
    };

    auto out = open_out(sc, "sweep.csv");
    out << "value,g_star,quantity_welfare,price_welfare,winner\n";
    for (double v : values) {
        Scenario s = sc;
        if (!apply_value(s, v)) {
            std::cerr << "parameter \"" << parameter << "\" is not sweepable\n";
            return kExitDomain;
        }
        const auto env = s.build_environment();
        const auto sol = solve_checked(s, env);
        const auto rep = compare_regulation(env, sol);
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%s\n", v, rep.guarantee_both,
                      rep.quantity_welfare, rep.price_welfare, to_string(rep.winner).c_str());
        out << buf;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robustly optimal procurement mechanisms and price regulation"};
    app.require_subcommand(1);

    Overrides ov;
    app.add_option("--grid-points", ov.grid_points, "override grid resolution");
    auto* seed_opt = app.add_option("--seed", ov.seed, "solver seed");
    app.add_option("--out-dir", ov.out_dir, "output directory");
    app.add_flag("--verbose", ov.verbose, "verbose reports");
    app.add_option("--tol-constraint", ov.tol_constraint, "constraint tolerance");
    app.add_option("--tol-objective", ov.tol_objective, "objective tolerance");
    app.add_option("--max-iters", ov.max_iters, "iteration budget");

    std::string path;
    int figure_id = 1;
    std::string sweep_parameter;
    std::vector<double> sweep_values;

    app.fallthrough();  // global flags may follow the verb
    auto* validate = app.add_subcommand("validate", "check a scenario's assumptions");
    validate->add_option("scenario", path, "scenario file")->required();
    auto* solve = app.add_subcommand("solve", "solve the robust procurement program");
    solve->add_option("scenario", path, "scenario file")->required();
    auto* compare = app.add_subcommand("compare", "rank price vs quantity regulation");
    compare->add_option("scenario", path, "scenario file")->required();
    auto* figure = app.add_subcommand("figure", "emit plottable schedule data");
    figure->add_option("scenario", path, "scenario file")->required();
    figure->add_option("--id", figure_id, "figure number (1-3)")
        ->check(CLI::Range(1, 3))
        ->required();
    auto* sweep = app.add_subcommand("sweep", "re-solve across a parameter range");
    sweep->add_option("scenario", path, "scenario file")->required();
    sweep->add_option("--parameter", sweep_parameter, "parameter name")->required();
    sweep->add_option("--values", sweep_values, "parameter values");

    CLI11_PARSE(app, argc, argv);

    try {
        Scenario sc = ropt::parse_scenario_file(path);
        ov.seed_set = seed_opt->count() > 0;
        apply(sc, ov);
        if (validate->parsed()) return cmd_validate(sc);
        if (solve->parsed()) return cmd_solve(sc);
        if (compare->parsed()) return cmd_compare(sc);
        if (figure->parsed()) return cmd_figure(sc, figure_id);
        if (sweep->parsed()) return cmd_sweep(sc, sweep_parameter, sweep_values);
    } catch (const ropt::ScenarioParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitDomain;
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}
