#include "ropt/regulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ropt/grid.hpp"

namespace ropt {

namespace {

constexpr double kGx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

}  // namespace

std::string to_string(Winner w) {
    switch (w) {
        case Winner::Quantity: return "quantity";
        case Winner::Price: return "price";
        case Winner::Equivalent: return "equivalent";
    }
    return "equivalent";
}

nlohmann::ordered_json ComparisonReport::to_json() const {
    nlohmann::ordered_json j;
    j["quantity_welfare"] = quantity_welfare;
    j["price_welfare"] = price_welfare;
    j["winner"] = to_string(winner);
    j["guarantee_both"] = guarantee_both;
    j["premise_flags"]["floor_optimal"] = floor_optimal;
    j["premise_flags"]["demand_match_top"] = demand_match_top;
    j["premise_flags"]["sufficient_condition"] = sufficient_condition;
    j["premise_flags"]["outside_coverage"] = outside_coverage;
    return j;
}

PriceRegulation bm_with_price_cap(const Environment& env, std::size_t grid_points) {
    PriceRegulation reg;
    reg.grid = make_grid(env.theta_low(), env.theta_high(), grid_points);
    reg.prices.resize(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i)
        reg.prices[i] = std::min(env.cost().virtual_cost(reg.grid[i]), env.theta_high());
    return reg;
}

std::vector<double> ex_post_welfare(const PriceRegulation& reg, const Environment& env,
                                    std::size_t demand_index) {
    if (demand_index >= env.demands().size())
        throw std::invalid_argument("demand index out of range");
    const auto& demand = env.demands()[demand_index];
    auto q = reg.traded_quantities(demand);
    auto u = reg.rents(demand, demand_index);
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        w[i] = demand.gross_value(q[i]) - reg.grid[i] * q[i] - u[i];
    return w;
}

VerificationReport price_shortlist_check(const PriceRegulation& reg, const Environment& env,
                                         double tol) {
    VerificationReport report;
    report.subject = "price_shortlist";

    {
        std::vector<double> th, slack;
        for (std::size_t i = 1; i < reg.grid.size(); ++i) {
            th.push_back(reg.grid[i]);
            slack.push_back(reg.prices[i] - reg.prices[i - 1]);
        }
        report.checks.push_back(CheckResult::pointwise("prices_increasing", th, slack, tol));
    }

    report.checks.push_back(CheckResult::scalar(
        "zero_rent_top_lowest_demand",
        -std::abs(reg.top_rent_for(Environment::kLowestDemand)), tol));
    {
        std::vector<double> idx, slack;
        for (std::size_t d = 0; d < env.demands().size(); ++d) {
            idx.push_back(static_cast<double>(d));
            slack.push_back(reg.top_rent_for(d));
        }
        report.checks.push_back(
            CheckResult::pointwise("nonnegative_top_rents", idx, slack, tol));
    }

    report.checks.push_back(CheckResult::scalar(
        "cap_at_top", -std::abs(reg.prices.back() - env.theta_high()), tol));

    const double gstar = max_guarantee(env);
    for (std::size_t d = 0; d < env.demands().size(); ++d) {
        auto w = ex_post_welfare(reg, env, d);
        std::vector<double> slack(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) slack[i] = w[i] - gstar;
        report.checks.push_back(CheckResult::pointwise(
            "ex_post_welfare_demand_" + std::to_string(d), reg.grid, slack, tol));
    }
    return report;
}

std::pair<double, double> rent_band(const Environment& env, std::size_t demand_index) {
    if (demand_index >= env.demands().size())
        throw std::invalid_argument("demand index out of range");
    const auto& demand = env.demands()[demand_index];
    if (demand_index == Environment::kLowestDemand ||
        demand_index == Environment::kConjecturedDemand ||
        demand == env.lowest_demand() || demand == env.conjectured_demand())
        return {0.0, 0.0};
    const double q_top = demand.value(env.theta_high());
    const double upper =
        demand.gross_value(q_top) - env.theta_high() * q_top - max_guarantee(env);
    return {0.0, std::max(0.0, upper)};
}

double capped_price_welfare(const Environment& env, const PriceRegulation& reg) {
    // Expected welfare under (D*, F*): rents telescope against the virtual
    // cost, leaving the virtual surplus at the traded quantity D*(p(theta)).
    const auto& dstar = env.conjectured_demand();
    const auto& cost = env.cost();
    const double cap = env.theta_high();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < reg.grid.size(); ++i) {
        const double a = reg.grid[i], b = reg.grid[i + 1];
        const double h = 0.5 * (b - a), c = 0.5 * (a + b);
        for (int k = 0; k < 3; ++k) {
            const double theta = c + h * kGx[k];
            const double z = cost.virtual_cost(theta);
            const double q = dstar.value(std::min(z, cap));
            acc += h * kGw[k] * (dstar.gross_value(q) - z * q) * cost.pdf(theta);
        }
    }
    return acc - reg.top_rent_for(Environment::kConjecturedDemand);
}

VerificationReport corollary6_conditions(const Environment& env, std::size_t grid_points) {
    VerificationReport report;
    report.subject = "regulation_ranking_primitives";

    const auto& dstar = env.conjectured_demand();
    const auto& low = env.lowest_demand();
    const double tlo = env.theta_low(), thi = env.theta_high();
    const auto floor_sched = bm_with_floor(env, grid_points).schedule;
    auto qsuf = floor_sched.suffix_integrals();

    const double match_bottom = -std::abs(dstar.value(tlo) - low.value(tlo));
    const double match_top = -std::abs(dstar.value(thi) - low.value(thi));
    report.checks.push_back(CheckResult::scalar("demand_match_bottom", match_bottom, 1e-9));
    report.checks.push_back(CheckResult::scalar("demand_match_top", match_top, 1e-9));

    // Majorization of the floored Bayesian schedule by the lowest demand at
    // every theta; its worst violation doubles as the price-side existence
    // condition.
    std::vector<double> slack(floor_sched.grid.size());
    double worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < slack.size(); ++i) {
        slack[i] = low.integral(floor_sched.grid[i], thi) - qsuf[i];
        worst_violation = std::max(worst_violation, -slack[i]);
    }
    report.checks.push_back(
        CheckResult::pointwise("majorization_all_theta", floor_sched.grid, slack, 1e-9));
    report.checks.push_back(
        CheckResult::scalar("majorization_violation_exists", worst_violation, -1e-9));

    // Bottom-type inequality: total schedule mass exceeds the lowest-demand
    // mass net of the deadweight loss of trading D*(theta_low) there.
    const double dwl = env.deadweight_loss(tlo, dstar.value(tlo));
    const double bottom = qsuf.front() - (low.integral(tlo, thi) - dwl);
    report.checks.push_back(CheckResult::scalar("bottom_dwl_inequality", bottom, -1e-9));

    const bool quantity_trigger = match_bottom >= -1e-9 &&
                                  report.find("majorization_all_theta")->pass &&
                                  dstar.value(thi) - low.value(thi) > 1e-9;
    const bool price_trigger =
        match_top >= -1e-9 && (worst_violation > 1e-9 || bottom > 1e-9);

    CheckResult trig;
    trig.name = "triggered";
    trig.pass = true;
    trig.worst_slack = 0.0;
    trig.note = quantity_trigger ? "quantity" : (price_trigger ? "price" : "none");
    report.checks.push_back(trig);
    return report;
}

ComparisonReport compare_regulation(const Environment& env, const RoptSolution& ropt) {
    ComparisonReport rep;
    rep.quantity_welfare = ropt.objective;
    const auto reg = bm_with_price_cap(env, ropt.mechanism.schedule.grid.size());
    rep.price_welfare = capped_price_welfare(env, reg);
    rep.guarantee_both = max_guarantee(env);
    rep.floor_optimal = ropt.floor_optimal;

    const double gap_top = env.conjectured_demand().value(env.theta_high()) -
                           env.lowest_demand().value(env.theta_high());
    rep.demand_match_top = std::abs(gap_top) <= 1e-9;
    rep.outside_coverage = !rep.floor_optimal && gap_top > 1e-9;

    auto cor6 = corollary6_conditions(env, ropt.mechanism.schedule.grid.size());
    rep.sufficient_condition = cor6.find("triggered")->note;

    const double diff = rep.quantity_welfare - rep.price_welfare;
    if (std::abs(diff) <= 1e-7)
        rep.winner = Winner::Equivalent;
    else
        rep.winner = diff > 0 ? Winner::Quantity : Winner::Price;
    return rep;
}

}  // namespace ropt
