#pragma once

#include <string>
#include <vector>

#include "ropt/curve.hpp"

namespace ropt {

enum class CostFamily { Uniform, Power, PiecewiseLinearDensity };

std::string to_string(CostFamily family);
CostFamily cost_family_from_string(const std::string& name);

/// Conjectured cost technology F* on [theta_low, theta_high], theta_low > 0.
/// All families have closed-form cdf, so cell masses used as integration
/// weights carry no discretization bias.
class CostModel {
public:
    static CostModel uniform(double theta_low, double theta_high);
    /// F(t) = ((t - lo)/(hi - lo))^exponent, exponent > 0.
    static CostModel power(double theta_low, double theta_high, double exponent);
    /// Density proportional to a piecewise-linear function over the support.
    static CostModel piecewise_linear_density(double theta_low, double theta_high,
                                              std::vector<Knot> density_knots);

    double cdf(double theta) const;
    double pdf(double theta) const;
    /// z(theta) = theta + F(theta)/f(theta).
    double virtual_cost(double theta) const;
    double cell_mass(double a, double b) const { return cdf(b) - cdf(a); }

    double theta_low() const { return lo_; }
    double theta_high() const { return hi_; }
    CostFamily family() const { return family_; }
    double exponent() const { return exponent_; }
    const std::vector<Knot>& density_knots() const { return density_knots_; }

    bool operator==(const CostModel& other) const;

private:
    CostModel(CostFamily family, double lo, double hi);

    CostFamily family_;
    double lo_;
    double hi_;
    double exponent_ = 1.0;
    std::vector<Knot> density_knots_;   // unnormalized
    std::vector<double> density_cum_;   // cumulative unnormalized mass at knots
    double density_total_ = 1.0;
};

}  // namespace ropt
