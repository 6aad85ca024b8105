#include "ropt/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ropt/grid.hpp"

namespace ropt {

Environment::Environment(CostModel cost, PiecewiseLinearCurve conjectured_demand,
                         PiecewiseLinearCurve lowest_demand,
                         std::vector<PiecewiseLinearCurve> extra_demands, double quantity_cap)
    : cost_(std::move(cost)), quantity_cap_(quantity_cap) {
    if (!(quantity_cap_ > 0.0)) throw std::invalid_argument("quantity_cap must be positive");
    demands_.reserve(2 + extra_demands.size());
    demands_.push_back(std::move(lowest_demand));
    demands_.push_back(std::move(conjectured_demand));
    for (auto& d : extra_demands) demands_.push_back(std::move(d));
}

double Environment::deadweight_loss(double theta, double q) const {
    if (q < 0.0) throw std::invalid_argument("quantity must be nonnegative");
    if (theta < theta_low() - 1e-12 || theta > theta_high() + 1e-12)
        throw std::invalid_argument("theta outside the cost support");
    const PiecewiseLinearCurve& low = lowest_demand();
    const double p_q = low.inverse(q);
    // Signed limits: integral over [theta, P(q)] of (D(y) - q) dy.
    return low.integral(theta, p_q) - q * (p_q - theta);
}

VerificationReport Environment::validate(std::size_t regularity_grid_points) const {
    VerificationReport report;
    report.subject = "environment";

    // theta_low > 0 is enforced by CostModel construction; keep the check in
    // the report so scenario diagnostics name it explicitly.
    report.checks.push_back(
        CheckResult::scalar("theta_low_positive", theta_low(), 1e-15));

    // Gains from trade: theta_high < P_low(0+).
    const double p_top = lowest_demand().inverse(0.0);
    report.checks.push_back(
        CheckResult::scalar("gains_from_trade", p_top - theta_high(), 1e-12));

    // Lowest demand is the pointwise minimum of all stored demands, and every
    // demand stays under the cap at theta_low.
    {
        const double p_max = std::max(lowest_demand().zero_price(), theta_high());
        const auto ps = make_grid(0.0, p_max, 501);
        std::vector<double> min_slack;
        min_slack.reserve(ps.size());
        for (double p : ps) {
            double s = std::numeric_limits<double>::infinity();
            for (std::size_t d = 1; d < demands_.size(); ++d)
                s = std::min(s, demands_[d].value(p) - lowest_demand().value(p));
            min_slack.push_back(s);
        }
        report.checks.push_back(
            CheckResult::pointwise("lowest_demand_is_pointwise_min", ps, min_slack, 1e-9));
    }
    {
        std::vector<double> idx, slack;
        for (std::size_t d = 0; d < demands_.size(); ++d) {
            idx.push_back(static_cast<double>(d));
            slack.push_back(quantity_cap_ - demands_[d].value(theta_low()));
        }
        CheckResult c = CheckResult::pointwise("quantity_cap_large", idx, slack, 1e-12);
        // binding entries here are demand indices, not prices
        report.checks.push_back(c);
    }

    // Regularity: virtual cost increasing on the evaluation grid.
    {
        const auto grid = make_grid(theta_low(), theta_high(), regularity_grid_points);
        std::vector<double> mid, slack;
        bool density_ok = true;
        std::vector<double> z(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            try {
                z[i] = cost_.virtual_cost(grid[i]);
            } catch (const std::domain_error&) {
                density_ok = false;
                z[i] = grid[i];
            }
        }
        for (std::size_t i = 1; i < grid.size(); ++i) {
            mid.push_back(grid[i]);
            slack.push_back(z[i] - z[i - 1]);
        }
        report.checks.push_back(
            CheckResult::pointwise("virtual_cost_increasing", mid, slack, 1e-12));
        report.checks.push_back(
            CheckResult::scalar("density_positive", density_ok ? 0.0 : -1.0, 1e-12));
    }

    // cdf endpoints
    report.checks.push_back(CheckResult::scalar(
        "cdf_endpoints",
        -std::max(std::abs(cost_.cdf(theta_low())), std::abs(cost_.cdf(theta_high()) - 1.0)),
        1e-12));

    // Flat demand segments give only weakly concave gross value; flag, never
    // reject.
    {
        CheckResult c;
        c.name = "no_flat_demand_segments";
        bool flat = false;
        for (const auto& d : demands_) flat = flat || d.has_flat_segment();
        c.pass = true;
        c.worst_slack = flat ? 0.0 : 1.0;
        c.note = flat ? "a demand curve has a flat segment; gross value is only weakly concave there"
                      : "";
        report.checks.push_back(c);
    }

    return report;
}

}  // namespace ropt
