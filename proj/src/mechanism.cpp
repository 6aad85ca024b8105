#include "ropt/mechanism.hpp"

#include <cmath>
#include <stdexcept>

#include "ropt/grid.hpp"

namespace ropt {

namespace {

// 3-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

void check_weights(const std::vector<double>& w, std::size_t n) {
    if (w.size() != n) throw std::invalid_argument("weight vector does not match the grid");
    double s = 0.0;
    for (double v : w) {
        if (v < -1e-12) throw std::invalid_argument("negative probability weight");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("cost weights must sum to one");
}

}  // namespace

double QuantitySchedule::value_at(double theta) const { return interp(grid, values, theta); }

std::vector<double> QuantitySchedule::suffix_integrals() const {
    return suffix_trapezoid(grid, values);
}

double QuantitySchedule::suffix_integral(double theta) const {
    auto suffix = suffix_trapezoid(grid, values);
    return suffix_integral_at(grid, values, suffix, theta);
}

void QuantitySchedule::validate(double quantity_cap, double tol) const {
    if (grid.size() != values.size() || grid.size() < 2)
        throw std::invalid_argument("schedule grid/value mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < -tol || values[i] > quantity_cap + tol)
            throw std::invalid_argument("schedule value outside [0, quantity_cap]");
        if (i > 0 && values[i] > values[i - 1] + tol)
            throw std::invalid_argument("schedule must be weakly decreasing");
    }
}

std::vector<double> QuantityMechanism::rents() const {
    auto suffix = schedule.suffix_integrals();
    for (double& u : suffix) u += top_rent;
    return suffix;
}

double QuantityMechanism::rent_at(double theta) const {
    auto suffix = schedule.suffix_integrals();
    return top_rent + suffix_integral_at(schedule.grid, schedule.values, suffix, theta);
}

std::vector<double> PriceRegulation::traded_quantities(const PiecewiseLinearCurve& demand) const {
    std::vector<double> q(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) q[i] = demand.value(prices[i]);
    return q;
}

std::vector<double> PriceRegulation::rents(const PiecewiseLinearCurve& demand,
                                           std::size_t demand_index) const {
    auto q = traded_quantities(demand);
    auto u = suffix_trapezoid(grid, q);
    const double top = top_rent_for(demand_index);
    for (double& v : u) v += top;
    return u;
}

std::vector<std::pair<double, double>> rent_schedule(const QuantityMechanism& mech) {
    auto u = mech.rents();
    std::vector<std::pair<double, double>> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = {mech.schedule.grid[i], u[i]};
    return out;
}

std::vector<std::pair<double, double>> transfers(const QuantityMechanism& mech) {
    auto u = mech.rents();
    std::vector<std::pair<double, double>> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double theta = mech.schedule.grid[i];
        out[i] = {theta, u[i] + theta * mech.schedule.values[i]};
    }
    return out;
}

double welfare(const QuantityMechanism& mech, const PiecewiseLinearCurve& demand,
               const std::vector<double>& cost_grid_weights) {
    const auto& grid = mech.schedule.grid;
    check_weights(cost_grid_weights, grid.size());
    auto u = mech.rents();
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (cost_grid_weights[i] == 0.0) continue;
        const double q = mech.schedule.values[i];
        acc += cost_grid_weights[i] * (demand.gross_value(q) - grid[i] * q - u[i]);
    }
    return acc;
}

double conjectured_welfare(const QuantityMechanism& mech, const Environment& env) {
    const auto& grid = mech.schedule.grid;
    const auto& q = mech.schedule.values;
    const auto& dstar = env.conjectured_demand();
    const auto& cost = env.cost();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        const double h = 0.5 * (b - a);
        const double c = 0.5 * (a + b);
        for (int k = 0; k < 3; ++k) {
            const double theta = c + h * kGx[k];
            const double t = (theta - a) / (b - a);
            const double qv = q[i] + t * (q[i + 1] - q[i]);
            const double z = cost.virtual_cost(theta);
            acc += h * kGw[k] * (dstar.gross_value(qv) - z * qv) * cost.pdf(theta);
        }
    }
    return acc - mech.top_rent;
}

QuantityMechanism constant_mechanism(const Environment& env, std::size_t grid_points) {
    QuantityMechanism m;
    m.schedule.grid = make_grid(env.theta_low(), env.theta_high(), grid_points);
    m.schedule.values.assign(grid_points, env.efficient_floor());
    m.top_rent = 0.0;
    return m;
}

double price_welfare(const PriceRegulation& reg, const Environment& env,
                     std::size_t demand_index, const std::vector<double>& cost_grid_weights) {
    if (demand_index >= env.demands().size())
        throw std::invalid_argument("demand index out of range");
    check_weights(cost_grid_weights, reg.grid.size());
    const auto& demand = env.demands()[demand_index];
    auto q = reg.traded_quantities(demand);
    auto u = reg.rents(demand, demand_index);
    double acc = 0.0;
    for (std::size_t i = 0; i < reg.grid.size(); ++i) {
        if (cost_grid_weights[i] == 0.0) continue;
        acc += cost_grid_weights[i] *
               (demand.gross_value(q[i]) - reg.grid[i] * q[i] - u[i]);
    }
    return acc;
}

}  // namespace ropt
