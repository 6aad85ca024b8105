#include "ropt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "ropt/grid.hpp"

namespace ropt {

namespace {

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Projection onto weakly decreasing sequences (pool adjacent violators,
// optionally in a diagonal metric), followed by clamping to [lo, hi]. With
// constant bounds the composition is the exact projection onto the
// intersection.
void project_decreasing_box(std::vector<double>& q, double lo, double hi,
                            const std::vector<double>* weights = nullptr) {
    const std::size_t n = q.size();
    // PAVA for a nonincreasing fit: blocks of (weighted sum, weight) scanned
    // left to right, merging whenever a block mean rises above its
    // predecessor's.
    std::vector<double> sum(n), wsum(n), mean(n);
    std::vector<std::size_t> count(n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = weights ? (*weights)[i] : 1.0;
        sum[m] = wi * q[i];
        wsum[m] = wi;
        count[m] = 1;
        mean[m] = q[i];
        while (m > 0 && mean[m] > mean[m - 1]) {
            sum[m - 1] += sum[m];
            wsum[m - 1] += wsum[m];
            count[m - 1] += count[m];
            mean[m - 1] = sum[m - 1] / wsum[m - 1];
            --m;
        }
        ++m;
    }
    std::size_t pos = 0;
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t k = 0; k < count[b]; ++k) q[pos++] = clamp(mean[b], lo, hi);
}

// Magnitude of the local slope of an inverse curve at q (finite difference;
// used only to precondition, accuracy is immaterial).
double inverse_slope(const PiecewiseLinearCurve& curve, double q) {
    const double delta = 1e-6;
    const double s =
        (curve.inverse(std::max(0.0, q - delta)) - curve.inverse(q + delta)) / (2.0 * delta);
    return std::max(0.0, s);
}

struct Discretization {
    std::vector<double> grid;
    std::vector<double> z;        // virtual costs
    std::vector<double> w;        // cell masses
    double h = 0.0;               // uniform spacing
    double gstar = 0.0;
    double ql = 0.0;
    double qcap = 0.0;
};

Discretization discretize(const Environment& env, std::size_t n) {
    Discretization d;
    d.grid = make_grid(env.theta_low(), env.theta_high(), n);
    d.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.z[i] = env.cost().virtual_cost(d.grid[i]);
    d.w = cell_masses(env.cost(), d.grid);
    d.h = (env.theta_high() - env.theta_low()) / static_cast<double>(n - 1);
    d.gstar = max_guarantee(env);
    d.ql = env.efficient_floor();
    d.qcap = env.quantity_cap();
    return d;
}

// Discretized expected virtual surplus (the solver objective).
double virtual_surplus(const Discretization& d, const Environment& env,
                       const std::vector<double>& q) {
    const auto& dstar = env.conjectured_demand();
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        acc += d.w[i] * (dstar.gross_value(q[i]) - d.z[i] * q[i]);
    return acc;
}

// Robustness slacks g_j = V_low(q_j) - theta_j q_j - u_j - G*.
void robustness_slacks(const Discretization& d, const Environment& env,
                       const std::vector<double>& q, std::vector<double>& g) {
    const auto& low = env.lowest_demand();
    auto u = suffix_trapezoid(d.grid, q);
    g.resize(q.size());
    for (std::size_t j = 0; j < q.size(); ++j)
        g[j] = low.gross_value(q[j]) - d.grid[j] * q[j] - u[j] - d.gstar;
}

}  // namespace

QuantitySchedule baron_myerson(const Environment& env, std::size_t grid_points) {
    QuantitySchedule s;
    s.grid = make_grid(env.theta_low(), env.theta_high(), grid_points);
    s.values.resize(grid_points);
    const auto& dstar = env.conjectured_demand();
    double prev_z = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double z = env.cost().virtual_cost(s.grid[i]);
        if (z < prev_z - 1e-12)
            throw std::runtime_error("virtual cost is not increasing on the grid");
        prev_z = z;
        s.values[i] = clamp(dstar.value(z), 0.0, env.quantity_cap());
    }
    return s;
}

QuantityMechanism bm_with_floor(const Environment& env, std::size_t grid_points) {
    QuantityMechanism m;
    m.schedule = baron_myerson(env, grid_points);
    const double ql = env.efficient_floor();
    for (double& q : m.schedule.values) q = std::max(q, ql);
    m.top_rent = 0.0;
    return m;
}

VerificationReport check_floor_optimal(const Environment& env, std::size_t grid_points) {
    const auto mech = bm_with_floor(env, grid_points);
    const auto& s = mech.schedule;
    const auto& low = env.lowest_demand();

    VerificationReport report;
    report.subject = "floor_optimality";

    const double demand_mass = low.integral(env.theta_low(), env.theta_high());
    const double dwl = env.deadweight_loss(env.theta_low(), s.values.front());
    const double q_mass = s.suffix_integrals().front();
    report.checks.push_back(
        CheckResult::scalar("dwl_at_theta_low", demand_mass - dwl - q_mass, 1e-9));

    auto maj = majorization_check(s, env, MajorizationForm::Pointwise, 1e-9);
    report.checks.push_back(maj.checks.front());
    return report;
}

double theta_star(const Environment& env) {
    const auto& dstar = env.conjectured_demand();
    const double ql = env.efficient_floor();
    auto qbm = [&](double theta) {
        return clamp(dstar.value(env.cost().virtual_cost(theta)), 0.0, env.quantity_cap());
    };
    double lo = env.theta_low(), hi = env.theta_high();
    if (qbm(hi) >= ql) return hi;
    if (qbm(lo) <= ql) return lo;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (qbm(mid) > ql ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double theta_m(const Environment& env, std::size_t grid_points) {
    const auto mech = bm_with_floor(env, grid_points);
    return worst_case_profile(mech, env).argmin_max;
}

RoptSolution solve_ropt(const Environment& env, const SolverOptions& options) {
    const std::size_t n = options.grid_points;
    RoptSolution sol;
    sol.theta_star = theta_star(env);
    sol.theta_m = theta_m(env, n);

    auto floor_report = check_floor_optimal(env, n);
    sol.floor_optimal = floor_report.pass();

    auto floor_mech = bm_with_floor(env, n);
    if (sol.floor_optimal && !options.force_general) {
        sol.mechanism = floor_mech;
        sol.objective = conjectured_welfare(sol.mechanism, env);
        sol.stats = {};
        return sol;
    }

    const Discretization d = discretize(env, n);
    std::vector<double> q =
        options.initial ? options.initial->values : floor_mech.schedule.values;
    if (q.size() != n) throw std::invalid_argument("initial schedule grid mismatch");
    project_decreasing_box(q, d.ql, d.qcap);

    const auto& dstar = env.conjectured_demand();
    const auto& low = env.lowest_demand();

    std::vector<double> lambda(n, 0.0), g(n), m(n), grad(n), precond(n), trial(n), gtrial(n);
    double mu = 16.0;

    auto aug_value = [&](const std::vector<double>& qq, std::vector<double>& gg) {
        robustness_slacks(d, env, qq, gg);
        double penalty = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double mm = std::max(0.0, lambda[j] - mu * gg[j]);
            penalty += (mm * mm - lambda[j] * lambda[j]) / (2.0 * mu);
        }
        return -virtual_surplus(d, env, qq) + penalty;
    };

    auto violation = [&](const std::vector<double>& gg) {
        double v = 0.0;
        for (double x : gg) v = std::max(v, -x);
        return v;
    };

    std::size_t iters = 0;
    double step = 1.0;
    double obj_prev = virtual_surplus(d, env, q);
    std::size_t stall = 0;
    bool converged = false;

    // Gradient and diagonal curvature estimate of the augmented Lagrangian
    // at a point with precomputed slacks. The rent term of each constraint
    // contributes trapezoid weights, accumulated via a running prefix sum of
    // the active multipliers.
    auto al_grad = [&](const std::vector<double>& qq, const std::vector<double>& gg,
                       std::vector<double>& grad_out, std::vector<double>& precond_out) {
        double prefix = 0.0;
        double active_below = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mi = std::max(0.0, lambda[i] - mu * gg[i]);
            const double pstar = dstar.inverse(qq[i]);
            const double plow = low.inverse(qq[i]);
            double gi = -d.w[i] * (pstar - d.z[i]) - mi * (plow - d.grid[i]);
            const double own = (i + 1 < n) ? 0.5 * d.h : 0.0;
            const double cross = (i + 1 < n) ? d.h : 0.5 * d.h;
            gi += mi * own + prefix * cross;
            grad_out[i] = gi;
            // Curvature: objective and multiplier terms, the penalty's own
            // entry for active constraints, and the accumulated rent-term
            // coupling of the active constraints below.
            const bool active = mi > 0.0 || gg[i] < 1e-6;
            const double a_ii = plow - d.grid[i] - own;
            const double penalty_curv =
                (active ? mu * a_ii * a_ii : 0.0) + mu * active_below * d.h * d.h;
            precond_out[i] = std::max(d.w[i] * inverse_slope(dstar, qq[i]) +
                                          mi * inverse_slope(low, qq[i]) + penalty_curv,
                                      1e-4 * d.h);
            prefix += mi;
            if (active) active_below += 1.0;
        }
    };

    std::vector<double> y(n), gy(n), q_prev(n);
    while (iters < options.max_iters) {
        // Inner loop: accelerated preconditioned projected gradient on the
        // augmented Lagrangian, with backtracking and restart on increase.
        double L = aug_value(q, g);
        y = q;
        gy = g;
        q_prev = q;
        double t_momentum = 1.0;
        std::size_t inner = 0;
        const std::size_t inner_budget = std::min<std::size_t>(800, options.max_iters - iters);
        while (inner < inner_budget) {
            al_grad(y, gy, grad, precond);
            const double Ly = aug_value(y, gtrial);
            bool moved = false;
            double Lt = 0.0;
            for (int bt = 0; bt < 40; ++bt) {
                for (std::size_t i = 0; i < n; ++i)
                    trial[i] = y[i] - step * grad[i] / precond[i];
                project_decreasing_box(trial, d.ql, d.qcap, &precond);
                double model = 0.0, move2 = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double delta = trial[i] - y[i];
                    model += grad[i] * delta + 0.5 / step * precond[i] * delta * delta;
                    move2 += delta * delta;
                }
                if (move2 == 0.0) break;
                Lt = aug_value(trial, gtrial);
                if (Lt <= Ly + model + 1e-12) {
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            ++inner;
            ++iters;
            if (!moved) {
                if (t_momentum > 1.0) {
                    // momentum stalled: restart from the current iterate
                    t_momentum = 1.0;
                    y = q;
                    gy = g;
                    continue;
                }
                break;
            }
            if (Lt > L) {
                // accelerated step overshot: restart without accepting
                t_momentum = 1.0;
                y = q;
                gy = g;
                continue;
            }
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
            for (std::size_t i = 0; i < n; ++i)
                y[i] = clamp(trial[i] + (t_momentum - 1.0) / t_next * (trial[i] - q_prev[i]),
                             d.ql, d.qcap);
            q_prev = trial;
            q = trial;
            robustness_slacks(d, env, q, g);
            robustness_slacks(d, env, y, gy);
            t_momentum = t_next;
            const double improvement = L - Lt;
            L = Lt;
            step *= 1.1;
            if (improvement < 1e-15 * std::max(1.0, std::abs(L)) && t_momentum > 8.0) break;
        }

        // Multiplier / penalty update.
        for (std::size_t j = 0; j < n; ++j) lambda[j] = std::max(0.0, lambda[j] - mu * g[j]);
        const double viol = violation(g);
        const double obj = virtual_surplus(d, env, q);
        const double rel = std::abs(obj - obj_prev) / std::max(1.0, std::abs(obj));

        // First-order optimality at the updated multipliers: projected
        // Newton-like step of the plain Lagrangian (its length approximates
        // the distance to the stationary point) plus complementarity.
        double stationarity = 0.0, complementarity = 0.0;
        {
            double prefix = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double pstar = dstar.inverse(q[i]);
                const double plow = low.inverse(q[i]);
                double gi = -d.w[i] * (pstar - d.z[i]) - lambda[i] * (plow - d.grid[i]);
                const double own = (i + 1 < n) ? 0.5 * d.h : 0.0;
                const double cross = (i + 1 < n) ? d.h : 0.5 * d.h;
                gi += lambda[i] * own + prefix * cross;
                const double curv =
                    std::max(d.w[i] * inverse_slope(dstar, q[i]) +
                                 lambda[i] * inverse_slope(low, q[i]),
                             1e-4 * d.h);
                precond[i] = curv;
                trial[i] = q[i] - gi / curv;
                prefix += lambda[i];
            }
            project_decreasing_box(trial, d.ql, d.qcap, &precond);
            for (std::size_t i = 0; i < n; ++i)
                stationarity = std::max(stationarity, std::abs(q[i] - trial[i]));
            for (std::size_t j = 0; j < n; ++j)
                complementarity = std::max(complementarity, lambda[j] * std::abs(g[j]));
        }
        if (std::getenv("ROPT_SOLVER_TRACE"))
            std::fprintf(stderr, "iters=%zu viol=%.3e stat=%.3e comp=%.3e rel=%.3e mu=%.3e obj=%.12f\n",
                         iters, viol, stationarity, complementarity, rel, mu, obj);
        const bool kkt = viol < options.tol_constraint && stationarity < 1e-6 &&
                         complementarity < 1e-7;
        // Fallback stop: feasible and the objective has flattened out
        // (relative change per 50 iterations below tol_objective).
        const double rel50 = rel * 50.0 / static_cast<double>(std::max<std::size_t>(inner, 1));
        const bool stalled = viol < options.tol_constraint && rel50 < options.tol_objective;
        if (kkt || (stalled && ++stall >= 2)) {
            converged = true;
            break;
        }
        if (!stalled) stall = 0;
        obj_prev = obj;
        if (viol > 0.1 * options.tol_constraint && mu < 1e9) mu *= 4.0;
    }

    sol.mechanism.schedule.grid = d.grid;
    sol.mechanism.schedule.values = q;
    sol.mechanism.top_rent = 0.0;
    sol.objective = conjectured_welfare(sol.mechanism, env);
    robustness_slacks(d, env, q, g);
    sol.stats.iterations = iters;
    sol.stats.constraint_violation = violation(g);
    double comp = 0.0;
    for (std::size_t j = 0; j < n; ++j) comp += std::abs(lambda[j] * g[j]);
    sol.stats.gap_estimate = comp;
    sol.stats.converged = converged;
    if (!converged && sol.stats.constraint_violation > options.tol_constraint)
        throw std::runtime_error("solver failed to converge within the iteration budget");
    return sol;
}

double discrete_virtual_surplus(const Environment& env, const QuantitySchedule& schedule) {
    const auto& dstar = env.conjectured_demand();
    auto w = cell_masses(env.cost(), schedule.grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < schedule.grid.size(); ++i) {
        const double z = env.cost().virtual_cost(schedule.grid[i]);
        acc += w[i] * (dstar.gross_value(schedule.values[i]) - z * schedule.values[i]);
    }
    return acc;
}

std::vector<double> virtual_surplus_gradient(const Environment& env,
                                             const QuantitySchedule& schedule) {
    const auto& dstar = env.conjectured_demand();
    auto w = cell_masses(env.cost(), schedule.grid);
    std::vector<double> g(schedule.grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double z = env.cost().virtual_cost(schedule.grid[i]);
        g[i] = w[i] * (dstar.inverse(schedule.values[i]) - z);
    }
    return g;
}

VerificationReport verify_prop2_structure(const RoptSolution& sol, const Environment& env) {
    VerificationReport report;
    report.subject = "general_solution_structure";
    if (sol.floor_optimal) {
        CheckResult c;
        c.name = "skipped";
        c.pass = true;
        c.worst_slack = 0.0;
        c.note = "floor mechanism is robustly optimal; structure check not applicable";
        report.checks.push_back(c);
        return report;
    }

    const double tol = 1e-5;
    const auto& grid = sol.mechanism.schedule.grid;
    const auto& q = sol.mechanism.schedule.values;
    const auto qbm = baron_myerson(env, grid.size());
    const double ql = env.efficient_floor();

    // (a) q = q_l at and above theta_star.
    {
        std::vector<double> th, slack;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid[i] >= sol.theta_star - tol) {
                th.push_back(grid[i]);
                slack.push_back(-std::abs(q[i] - ql));
            }
        report.checks.push_back(CheckResult::pointwise("floor_above_theta_star", th, slack, tol));
    }
    // (b) q <= q_bm below theta_star (bottom grid point excluded), strictly
    // somewhere on [theta_m, theta_star).
    {
        std::vector<double> th, slack;
        double max_gap = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (grid[i] >= sol.theta_star) break;
            th.push_back(grid[i]);
            slack.push_back(qbm.values[i] - q[i]);
            if (grid[i] >= sol.theta_m) max_gap = std::max(max_gap, qbm.values[i] - q[i]);
        }
        report.checks.push_back(CheckResult::pointwise("below_bm_under_theta_star", th, slack, tol));
        report.checks.push_back(
            CheckResult::scalar("strictly_below_bm_on_middle_region", max_gap - tol, 0.0));
    }
    // (c) q = q_bm below theta_m; vacuous when theta_m is the bottom type.
    {
        std::vector<double> th, slack;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (grid[i] >= sol.theta_m) break;
            th.push_back(grid[i]);
            slack.push_back(-std::abs(q[i] - qbm.values[i]));
        }
        if (th.empty()) {
            CheckResult c;
            c.name = "bm_below_theta_m";
            c.pass = true;
            c.worst_slack = 0.0;
            c.note = "vacuous: theta_m is the bottom type";
            report.checks.push_back(c);
        } else {
            report.checks.push_back(CheckResult::pointwise("bm_below_theta_m", th, slack, tol));
        }
    }
    return report;
}

}  // namespace ropt
