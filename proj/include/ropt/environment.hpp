#pragma once

#include <cstddef>
#include <vector>

#include "ropt/cost.hpp"
#include "ropt/curve.hpp"
#include "ropt/report.hpp"

namespace ropt {

/// Full primitive tuple: cost technology, conjectured demand D*, lowest
/// admissible demand, optional extra demands, and the quantity cap.
///
/// Demand list convention used everywhere (price regulations index into it):
/// index 0 = lowest demand, index 1 = conjectured demand, 2.. = extras.
class Environment {
public:
    static constexpr std::size_t kLowestDemand = 0;
    static constexpr std::size_t kConjecturedDemand = 1;

    Environment(CostModel cost, PiecewiseLinearCurve conjectured_demand,
                PiecewiseLinearCurve lowest_demand,
                std::vector<PiecewiseLinearCurve> extra_demands, double quantity_cap);

    const CostModel& cost() const { return cost_; }
    const PiecewiseLinearCurve& conjectured_demand() const { return demands_[kConjecturedDemand]; }
    const PiecewiseLinearCurve& lowest_demand() const { return demands_[kLowestDemand]; }
    const std::vector<PiecewiseLinearCurve>& demands() const { return demands_; }
    double quantity_cap() const { return quantity_cap_; }
    double theta_low() const { return cost_.theta_low(); }
    double theta_high() const { return cost_.theta_high(); }

    /// q_l = lowest_demand(theta_high), the efficient quantity at the lowest
    /// demand and highest cost.
    double efficient_floor() const { return demands_[kLowestDemand].value(theta_high()); }

    /// Deadweight loss under the lowest demand of trading q instead of
    /// lowest_demand(theta): signed-limit integral of (D_low(y) - q) over
    /// [theta, P_low(q)]. Always nonnegative.
    double deadweight_loss(double theta, double q) const;

    VerificationReport validate(std::size_t regularity_grid_points = 2001) const;

private:
    CostModel cost_;
    std::vector<PiecewiseLinearCurve> demands_;
    double quantity_cap_;
};

}  // namespace ropt
