#include "ropt/guarantee.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ropt/grid.hpp"

namespace ropt {

namespace {

// Worst-case welfare at one grid point: V_low(q) - theta*q - u.
double pointwise_worst_case(const Environment& env, double theta, double q, double u) {
    return env.lowest_demand().gross_value(q) - theta * q - u;
}

}  // namespace

GuaranteeProfile worst_case_profile(const QuantityMechanism& mech, const Environment& env) {
    const auto& grid = mech.schedule.grid;
    const auto& q = mech.schedule.values;
    auto u = mech.rents();

    GuaranteeProfile prof;
    prof.grid = grid;
    prof.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        prof.values[i] = pointwise_worst_case(env, grid[i], q[i], u[i]);

    prof.minimum = *std::min_element(prof.values.begin(), prof.values.end());
    prof.argmin_max = grid.front();
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (prof.values[i] <= prof.minimum + 1e-9) prof.argmin_max = grid[i];
    return prof;
}

double max_guarantee(const Environment& env) {
    const double ql = env.efficient_floor();
    return env.lowest_demand().gross_value(ql) - env.theta_high() * ql;
}

VerificationReport shortlist_check(const QuantityMechanism& mech, const Environment& env,
                                   double tol, bool crossing_fast_path) {
    VerificationReport report;
    report.subject = "shortlist";

    report.checks.push_back(
        CheckResult::scalar("top_rent_zero", -std::abs(mech.top_rent), tol));

    const double gstar = max_guarantee(env);
    if (!crossing_fast_path) {
        auto prof = worst_case_profile(mech, env);
        std::vector<double> slack(prof.values.size());
        for (std::size_t i = 0; i < slack.size(); ++i) slack[i] = prof.values[i] - gstar;
        report.checks.push_back(
            CheckResult::pointwise("robustness", prof.grid, slack, tol));
        return report;
    }

    // Candidate minimizers: endpoints plus below-to-above crossings of q vs
    // D_low (the profile is monotone in between).
    const auto& grid = mech.schedule.grid;
    const auto& q = mech.schedule.values;
    const auto& low = env.lowest_demand();
    auto u = mech.rents();
    std::vector<double> thetas, slack;
    auto push = [&](double theta, double qv, double uv) {
        thetas.push_back(theta);
        slack.push_back(pointwise_worst_case(env, theta, qv, uv) - gstar);
    };
    push(grid.front(), q.front(), u.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double prev = q[i - 1] - low.value(grid[i - 1]);
        const double cur = q[i] - low.value(grid[i]);
        if (prev <= 0.0 && cur > 0.0) push(grid[i], q[i], u[i]);
    }
    push(grid.back(), q.back(), u.back());
    report.checks.push_back(CheckResult::pointwise("robustness", thetas, slack, tol));
    return report;
}

VerificationReport majorization_check(const QuantitySchedule& schedule, const Environment& env,
                                      MajorizationForm form, double tol) {
    const auto& grid = schedule.grid;
    const auto& q = schedule.values;
    if (grid.empty()) throw std::invalid_argument("empty schedule");
    const auto& low = env.lowest_demand();
    const double theta_high = env.theta_high();
    auto qsuf = schedule.suffix_integrals();

    // Exact suffix integrals of the lowest demand along the type axis.
    auto demand_suffix = [&](double theta) { return low.integral(theta, theta_high); };

    VerificationReport report;
    report.subject = "majorization";
    std::vector<double> slack(grid.size());
    switch (form) {
        case MajorizationForm::Pointwise:
            for (std::size_t i = 0; i < grid.size(); ++i)
                slack[i] = demand_suffix(grid[i]) - qsuf[i];
            report.checks.push_back(
                CheckResult::pointwise("pointwise_majorization", grid, slack, tol));
            break;
        case MajorizationForm::Dwl:
            for (std::size_t i = 0; i < grid.size(); ++i)
                slack[i] = demand_suffix(grid[i]) - qsuf[i] - env.deadweight_loss(grid[i], q[i]);
            report.checks.push_back(
                CheckResult::pointwise("dwl_majorization", grid, slack, tol));
            break;
        case MajorizationForm::Endpoint:
            // Deadweight-loss form at the endpoints, pointwise form in the
            // interior; equivalent to the full deadweight-loss form for
            // weakly decreasing schedules.
            for (std::size_t i = 0; i < grid.size(); ++i) {
                slack[i] = demand_suffix(grid[i]) - qsuf[i];
                if (i == 0 || i + 1 == grid.size())
                    slack[i] -= env.deadweight_loss(grid[i], q[i]);
            }
            report.checks.push_back(
                CheckResult::pointwise("endpoint_majorization", grid, slack, tol));
            break;
    }
    return report;
}

VerificationReport quantity_bound_check(const QuantitySchedule& schedule, const Environment& env,
                                        double tol) {
    const double ql = env.efficient_floor();
    VerificationReport report;
    report.subject = "quantity_bounds";

    std::vector<double> slack(schedule.values.size());
    for (std::size_t i = 0; i < slack.size(); ++i) slack[i] = schedule.values[i] - ql;
    report.checks.push_back(
        CheckResult::pointwise("floor_bound", schedule.grid, slack, tol));
    report.checks.push_back(CheckResult::scalar(
        "top_quantity_is_floor", -std::abs(schedule.values.back() - ql), tol));
    return report;
}

}  // namespace ropt
