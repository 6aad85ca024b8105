#include "ropt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "ropt/grid.hpp"

namespace ropt {

namespace {

// Quarter-step weight compositions: positive multiples of 1/4 summing to 1,
// exactly `parts` of them.
std::vector<std::vector<double>> quarter_compositions(std::size_t parts) {
    std::vector<std::vector<double>> out;
    std::vector<int> cur(parts, 1);
    // distribute the remaining quarters over the parts
    const int total = 4;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == parts) {
            cur[i] = left;
            std::vector<double> w(parts);
            for (std::size_t k = 0; k < parts; ++k) w[k] = cur[k] / 4.0;
            out.push_back(w);
            return;
        }
        for (int v = 1; v <= left - static_cast<int>(parts - i - 1); ++v) {
            cur[i] = v;
            rec(i + 1, left - v);
        }
    };
    if (parts >= 1 && parts <= 4) rec(0, total);
    return out;
}

// Minimum over Dirac atoms and quarter-step mixtures of per-atom welfare
// tables, one table per demand.
double enumerate_min(const std::vector<std::vector<double>>& tables,
                     const std::vector<std::size_t>& demand_indices,
                     const std::vector<double>& atoms, std::size_t depth,
                     AdversaryWitness* witness) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < tables.size(); ++t) {
        const auto& w = tables[t];
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            if (w[a] < best) {
                best = w[a];
                if (witness) {
                    witness->demand_index = demand_indices[t];
                    witness->atoms = {atoms[a]};
                    witness->weights = {1.0};
                }
            }
        }
        for (std::size_t parts = 2; parts <= std::min<std::size_t>(depth, 4); ++parts) {
            const auto comps = quarter_compositions(parts);
            std::vector<std::size_t> idx(parts);
            // combinations of `parts` distinct atoms
            std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                                    std::size_t start) {
                if (pos == parts) {
                    for (const auto& c : comps) {
                        double v = 0.0;
                        for (std::size_t k = 0; k < parts; ++k) v += c[k] * w[idx[k]];
                        if (v < best) {
                            best = v;
                            if (witness) {
                                witness->demand_index = demand_indices[t];
                                witness->atoms.clear();
                                for (auto i : idx) witness->atoms.push_back(atoms[i]);
                                witness->weights = c;
                            }
                        }
                    }
                    return;
                }
                for (std::size_t i = start; i < atoms.size(); ++i) {
                    idx[pos] = i;
                    rec(pos + 1, i + 1);
                }
            };
            rec(0, 0);
        }
    }
    return best;
}

std::vector<double> sorted_descending_unit(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> s(n);
    for (double& v : s) v = unif(rng);
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

}  // namespace

AdversaryGrid AdversaryGrid::uniform(const Environment& env, std::size_t n_atoms,
                                     std::size_t mixture_depth) {
    AdversaryGrid g;
    g.cost_atoms = make_grid(env.theta_low(), env.theta_high(), n_atoms);
    for (std::size_t d = 0; d < env.demands().size(); ++d) g.demand_indices.push_back(d);
    g.mixture_depth = mixture_depth;
    return g;
}

double brute_force_guarantee(const QuantityMechanism& mech, const Environment& env,
                             const AdversaryGrid& grid, AdversaryWitness* witness) {
    const auto& s = mech.schedule;
    auto suffix = s.suffix_integrals();
    std::vector<std::vector<double>> tables(grid.demand_indices.size());
    for (std::size_t t = 0; t < grid.demand_indices.size(); ++t) {
        const auto& demand = env.demands()[grid.demand_indices[t]];
        auto& w = tables[t];
        w.resize(grid.cost_atoms.size());
        for (std::size_t a = 0; a < grid.cost_atoms.size(); ++a) {
            const double theta = grid.cost_atoms[a];
            const double q = s.value_at(theta);
            const double u =
                mech.top_rent + suffix_integral_at(s.grid, s.values, suffix, theta);
            w[a] = demand.gross_value(q) - theta * q - u;
        }
    }
    return enumerate_min(tables, grid.demand_indices, grid.cost_atoms, grid.mixture_depth,
                         witness);
}

double brute_force_guarantee(const PriceRegulation& reg, const Environment& env,
                             const AdversaryGrid& grid, AdversaryWitness* witness) {
    std::vector<std::vector<double>> tables(grid.demand_indices.size());
    for (std::size_t t = 0; t < grid.demand_indices.size(); ++t) {
        const std::size_t d = grid.demand_indices[t];
        const auto& demand = env.demands()[d];
        auto q_grid = reg.traded_quantities(demand);
        auto suffix = suffix_trapezoid(reg.grid, q_grid);
        auto& w = tables[t];
        w.resize(grid.cost_atoms.size());
        for (std::size_t a = 0; a < grid.cost_atoms.size(); ++a) {
            const double theta = grid.cost_atoms[a];
            const double p = interp(reg.grid, reg.prices, theta);
            const double q = demand.value(p);
            const double u = reg.top_rent_for(d) +
                             suffix_integral_at(reg.grid, q_grid, suffix, theta);
            w[a] = demand.gross_value(q) - theta * q - u;
        }
    }
    return enumerate_min(tables, grid.demand_indices, grid.cost_atoms, grid.mixture_depth,
                         witness);
}

std::vector<QuantitySchedule> random_feasible_schedules(const Environment& env, std::size_t n,
                                                        unsigned seed,
                                                        std::size_t grid_points) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto grid = make_grid(env.theta_low(), env.theta_high(), grid_points);
    const auto& low = env.lowest_demand();
    const double ql = env.efficient_floor();
    const double gstar = max_guarantee(env);
    std::vector<double> dlow(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) dlow[i] = low.value(grid[i]);

    auto feasible = [&](const std::vector<double>& q) {
        auto u = suffix_trapezoid(grid, q);
        for (std::size_t j = 0; j < grid_points; ++j)
            if (low.gross_value(q[j]) - grid[j] * q[j] - u[j] - gstar < -1e-9) return false;
        return true;
    };

    std::vector<QuantitySchedule> out;
    out.reserve(n);
    std::size_t attempts = 0;
    while (out.size() < n) {
        ++attempts;
        if (attempts >= 1000000 &&
            static_cast<double>(out.size()) < 0.001 * static_cast<double>(attempts))
            throw std::runtime_error("feasible-schedule sampler starved: acceptance below 0.1%");
        auto s = sorted_descending_unit(rng, grid_points);
        const double gamma = std::exp(unif(rng) * 2.0 - 1.0);
        std::vector<double> q(grid_points);
        if (unif(rng) < 0.7) {
            // Envelope draw: q between the floor and the lowest demand, which
            // keeps the worst-case profile decreasing and hence feasible.
            for (std::size_t i = 0; i < grid_points; ++i)
                q[i] = ql + std::pow(s[i], gamma) * (std::max(dlow[i], ql) - ql);
        } else {
            const double amp = 1.0 + 0.6 * unif(rng);
            for (std::size_t i = 0; i < grid_points; ++i) {
                const double cap =
                    std::min(env.quantity_cap(), std::max(ql, amp * dlow[i]));
                q[i] = ql + std::pow(s[i], gamma) * (cap - ql);
            }
            for (std::size_t i = 1; i < grid_points; ++i) q[i] = std::min(q[i], q[i - 1]);
        }
        q.back() = ql;
        if (!feasible(q)) continue;
        out.push_back(QuantitySchedule{grid, std::move(q)});
    }
    return out;
}

std::vector<QuantitySchedule> random_monotone_schedules(const Environment& env, std::size_t n,
                                                        unsigned seed,
                                                        std::size_t grid_points) {
    std::mt19937 rng(seed);
    const auto grid = make_grid(env.theta_low(), env.theta_high(), grid_points);
    const double lo = 0.5 * env.efficient_floor();
    const double hi =
        std::min(env.quantity_cap(), env.conjectured_demand().value(env.theta_low()));
    std::uniform_real_distribution<double> unif(lo, hi);
    std::vector<QuantitySchedule> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> q(grid_points);
        for (double& v : q) v = unif(rng);
        std::sort(q.begin(), q.end(), std::greater<>());
        out.push_back(QuantitySchedule{grid, std::move(q)});
    }
    return out;
}

VerificationReport monotonicity_probe(const QuantitySchedule& schedule, const Environment& env,
                                      double tol) {
    QuantityMechanism mech{schedule, 0.0};
    auto prof = worst_case_profile(mech, env);
    const auto& low = env.lowest_demand();

    std::vector<double> th, slack;
    for (std::size_t i = 0; i + 1 < schedule.grid.size(); ++i) {
        const double s0 = schedule.values[i] - low.value(schedule.grid[i]);
        const double s1 = schedule.values[i + 1] - low.value(schedule.grid[i + 1]);
        double expected;
        if (s0 <= 0.0 && s1 <= 0.0)
            expected = prof.values[i] - prof.values[i + 1];  // weakly decreasing
        else if (s0 > 0.0 && s1 > 0.0)
            expected = prof.values[i + 1] - prof.values[i];  // weakly increasing
        else
            continue;  // sign change within the pair: no within-run claim
        th.push_back(schedule.grid[i + 1]);
        slack.push_back(expected);
    }
    VerificationReport report;
    report.subject = "profile_interval_monotonicity";
    report.checks.push_back(CheckResult::pointwise("interval_monotonicity", th, slack, tol));
    return report;
}

VerificationReport finite_difference_welfare_check(const QuantityMechanism& mech,
                                                   const Environment& env,
                                                   const std::vector<double>& direction,
                                                   double h) {
    const auto& s = mech.schedule;
    if (direction.size() != s.values.size())
        throw std::invalid_argument("direction/grid size mismatch");
    auto grad = virtual_surplus_gradient(env, s);
    double analytic = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) analytic += grad[i] * direction[i];

    QuantitySchedule plus = s, minus = s;
    for (std::size_t i = 0; i < direction.size(); ++i) {
        plus.values[i] += h * direction[i];
        minus.values[i] -= h * direction[i];
    }
    const double fd = (discrete_virtual_surplus(env, plus) -
                       discrete_virtual_surplus(env, minus)) /
                      (2.0 * h);

    const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-8});
    const double rel = std::abs(analytic - fd) / scale;

    VerificationReport report;
    report.subject = "gradient_finite_difference";
    CheckResult c = CheckResult::scalar("gradient_match", 1e-4 - rel, 0.0);
    c.note = "analytic=" + std::to_string(analytic) + " fd=" + std::to_string(fd);
    report.checks.push_back(c);
    return report;
}

Environment random_environment(std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < 200; ++attempt) {
        const double tlo = 0.5 + unif(rng);
        const double thi = tlo + 0.5 + unif(rng);
        CostModel cost = (unif(rng) < 0.5)
                             ? CostModel::uniform(tlo, thi)
                             : CostModel::power(tlo, thi, 0.7 + 2.3 * unif(rng));

        const double a = thi + 0.5 + 1.5 * unif(rng);   // conjectured intercept
        const double b = thi + 0.3 + 1.2 * unif(rng);   // conjectured zero price
        PiecewiseLinearCurve dstar({{0.0, a}, {b, 0.0}});

        const double a2 = a * (0.5 + 0.7 * unif(rng));
        const double b2 = thi + 0.1 + 0.9 * unif(rng);
        PiecewiseLinearCurve line2({{0.0, a2}, {b2, 0.0}});
        auto dlow = PiecewiseLinearCurve::pointwise_min(dstar, line2);

        const double cap = std::max(a, a2) + 1.0;
        try {
            Environment env(cost, dstar, dlow, {}, cap);
            if (env.validate(201).pass()) return env;
        } catch (const std::exception&) {
        }
    }
    throw std::runtime_error("failed to draw a valid random environment");
}

}  // namespace ropt
