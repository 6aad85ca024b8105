#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ropt/environment.hpp"

namespace ropt {

/// Weakly decreasing quantity schedule sampled on a theta grid; piecewise
/// linear between grid points.
struct QuantitySchedule {
    std::vector<double> grid;
    std::vector<double> values;

    double value_at(double theta) const;
    /// Integral of the schedule over [theta, grid.back()], exact trapezoid.
    double suffix_integral(double theta) const;
    std::vector<double> suffix_integrals() const;

    /// Monotonicity + range check; throws std::invalid_argument on violation.
    void validate(double quantity_cap, double tol = 1e-9) const;
};

/// IC/IR quantity mechanism: schedule plus the top type's rent u(theta_high).
/// Rents and transfers are derived from the envelope formula, never stored.
struct QuantityMechanism {
    QuantitySchedule schedule;
    double top_rent = 0.0;

    std::vector<double> rents() const;
    double rent_at(double theta) const;
};

/// Price regulation: weakly increasing price schedule plus one top-rent
/// constant per stored demand (indexing the environment's demand list).
/// The full rent surface is reconstructed from the envelope formula.
struct PriceRegulation {
    std::vector<double> grid;
    std::vector<double> prices;
    std::map<std::size_t, double> top_rents;

    double top_rent_for(std::size_t demand_index) const {
        auto it = top_rents.find(demand_index);
        return it == top_rents.end() ? 0.0 : it->second;
    }
    /// Quantities traded under demand D at the regulated prices.
    std::vector<double> traded_quantities(const PiecewiseLinearCurve& demand) const;
    /// Rent schedule of the monopolist under demand D.
    std::vector<double> rents(const PiecewiseLinearCurve& demand, std::size_t demand_index) const;
};

std::vector<std::pair<double, double>> rent_schedule(const QuantityMechanism& mech);
std::vector<std::pair<double, double>> transfers(const QuantityMechanism& mech);

/// Ex-ante welfare under demand curve `demand` and a cost distribution given
/// as probability weights on the mechanism's grid.
double welfare(const QuantityMechanism& mech, const PiecewiseLinearCurve& demand,
               const std::vector<double>& cost_grid_weights);

/// Expected welfare under the conjectured model (V*, F*), virtual-surplus
/// form with per-cell Gauss-Legendre integration against the closed-form cdf.
double conjectured_welfare(const QuantityMechanism& mech, const Environment& env);

/// The constant short-list mechanism: q = q_l everywhere, zero top rent.
QuantityMechanism constant_mechanism(const Environment& env, std::size_t grid_points = 1001);

double price_welfare(const PriceRegulation& reg, const Environment& env,
                     std::size_t demand_index, const std::vector<double>& cost_grid_weights);

}  // namespace ropt
