#pragma once

#include <cstddef>
#include <optional>

#include "ropt/guarantee.hpp"
#include "ropt/mechanism.hpp"

namespace ropt {

struct SolverOptions {
    std::size_t grid_points = 1001;
    double tol_constraint = 1e-8;
    double tol_objective = 1e-10;
    std::size_t max_iters = 100000;
    unsigned seed = 0;
    /// Skip the analytic shortcut and always run the constrained solver.
    bool force_general = false;
    /// Optional starting schedule (defaults to the floor schedule).
    std::optional<QuantitySchedule> initial;
};

struct SolverStats {
    std::size_t iterations = 0;
    double constraint_violation = 0.0;
    double gap_estimate = 0.0;
    bool converged = true;
};

struct RoptSolution {
    QuantityMechanism mechanism;
    double objective = 0.0;
    double theta_star = 0.0;
    double theta_m = 0.0;
    bool floor_optimal = false;
    SolverStats stats;
};

/// q_bm(theta) = D*(z*(theta)) clamped to [0, quantity_cap]. Throws if the
/// virtual cost is not increasing on the grid (no ironing).
QuantitySchedule baron_myerson(const Environment& env, std::size_t grid_points = 1001);

/// q*(theta) = max{q_bm(theta), q_l}, zero top rent.
QuantityMechanism bm_with_floor(const Environment& env, std::size_t grid_points = 1001);

/// Necessary and sufficient conditions for the floor mechanism to be
/// robustly optimal: the deadweight-loss inequality at theta_low and
/// pointwise majorization of q* by the lowest demand.
VerificationReport check_floor_optimal(const Environment& env, std::size_t grid_points = 1001);

/// The theta at which q_bm crosses the floor q_l (theta_high if it never
/// does). Bisection to 1e-10.
double theta_star(const Environment& env);

/// Largest theta minimizing the worst-case welfare profile of the floor
/// mechanism.
double theta_m(const Environment& env, std::size_t grid_points = 1001);

/// Maximizes expected virtual surplus over weakly decreasing schedules above
/// the floor subject to the robustness constraints. Returns the floor
/// mechanism directly when check_floor_optimal passes; otherwise runs an
/// augmented-Lagrangian projected-gradient solver seeded at the floor
/// schedule.
RoptSolution solve_ropt(const Environment& env, const SolverOptions& options = {});

/// Discretized objective used by the solver: sum of cell-mass-weighted
/// virtual surplus at the grid values.
double discrete_virtual_surplus(const Environment& env, const QuantitySchedule& schedule);

/// Its exact per-coordinate gradient w_i [P*(q_i) - z*_i].
std::vector<double> virtual_surplus_gradient(const Environment& env,
                                             const QuantitySchedule& schedule);

/// Structure of the general solution when the floor mechanism is not
/// optimal: q = q_l above theta_star, q <= q_bm below (strictly on part of
/// [theta_m, theta_star)), q = q_bm below theta_m. Solver-grade tolerances.
VerificationReport verify_prop2_structure(const RoptSolution& sol, const Environment& env);

}  // namespace ropt
