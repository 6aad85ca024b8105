#pragma once

#include <random>

#include "ropt/regulation.hpp"

namespace ropt {

/// Discretization of Nature's choice set: candidate cost atoms, candidate
/// demands (indices into the environment's list), and the maximum support
/// size of a cost mixture.
struct AdversaryGrid {
    std::vector<double> cost_atoms;
    std::vector<std::size_t> demand_indices;
    std::size_t mixture_depth = 1;

    static AdversaryGrid uniform(const Environment& env, std::size_t n_atoms,
                                 std::size_t mixture_depth = 1);
};

/// Where the brute-force minimum was attained.
struct AdversaryWitness {
    std::size_t demand_index = 0;
    std::vector<double> atoms;
    std::vector<double> weights;
};

/// Minimum welfare over the adversary grid: every stored demand crossed with
/// every Dirac and (for depth > 1) quarter-step mixture on the cost atoms.
double brute_force_guarantee(const QuantityMechanism& mech, const Environment& env,
                             const AdversaryGrid& grid, AdversaryWitness* witness = nullptr);

/// Same enumeration for a price regulation, over its ex-post welfare.
double brute_force_guarantee(const PriceRegulation& reg, const Environment& env,
                             const AdversaryGrid& grid, AdversaryWitness* witness = nullptr);

/// n weakly decreasing schedules with q(theta_high) = q_l satisfying the
/// short-list constraints; rejection sampling, deterministic in seed.
/// Throws if the acceptance rate starves (< 0.1% over 1e6 draws).
std::vector<QuantitySchedule> random_feasible_schedules(const Environment& env, std::size_t n,
                                                        unsigned seed,
                                                        std::size_t grid_points = 1001);

/// n weakly decreasing schedules with no feasibility requirement beyond
/// IC/IR shape; used to probe guarantee bounds and Dirac extremality.
std::vector<QuantitySchedule> random_monotone_schedules(const Environment& env, std::size_t n,
                                                        unsigned seed,
                                                        std::size_t grid_points = 201);

/// Interval monotonicity of the worst-case welfare profile: weakly
/// decreasing where q <= D_low, weakly increasing where q > D_low.
VerificationReport monotonicity_probe(const QuantitySchedule& schedule, const Environment& env,
                                      double tol = 1e-9);

/// Central finite differences of the discrete solver objective along a
/// schedule direction vs the analytic virtual-surplus gradient.
VerificationReport finite_difference_welfare_check(const QuantityMechanism& mech,
                                                   const Environment& env,
                                                   const std::vector<double>& direction,
                                                   double h);

/// Random validated environments (seeded) for property tests.
Environment random_environment(std::mt19937& rng);

}  // namespace ropt
