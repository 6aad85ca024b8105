#pragma once

#include <string>

#include "ropt/solver.hpp"

namespace ropt {

enum class Winner { Quantity, Price, Equivalent };

std::string to_string(Winner w);

/// Ranking of price vs quantity regulation under the conjectured model,
/// with the premise flags of the sufficient-condition results.
struct ComparisonReport {
    double quantity_welfare = 0.0;
    double price_welfare = 0.0;
    Winner winner = Winner::Equivalent;
    double guarantee_both = 0.0;
    bool floor_optimal = false;
    bool demand_match_top = false;     // D*(theta_high) = D_low(theta_high)
    std::string sufficient_condition;  // "quantity" | "price" | "none"
    bool outside_coverage = false;     // floor not optimal and demand gap at the top

    nlohmann::ordered_json to_json() const;
};

/// p(theta) = min{z*(theta), theta_high}, zero top rents.
PriceRegulation bm_with_price_cap(const Environment& env, std::size_t grid_points = 1001);

/// Ex-post welfare of a price regulation at cost theta (grid index i) under
/// a stored demand: V_D(D(p)) - theta D(p) - rent.
std::vector<double> ex_post_welfare(const PriceRegulation& reg, const Environment& env,
                                    std::size_t demand_index);

/// Short-list conditions for price regulations: increasing prices, rent
/// normalizations, cap at the top, and ex-post welfare at least G* for every
/// stored demand.
VerificationReport price_shortlist_check(const PriceRegulation& reg, const Environment& env,
                                         double tol = 1e-9);

/// Admissible top-rent interval for a stored demand; collapses to {0} for
/// the lowest and conjectured demands.
std::pair<double, double> rent_band(const Environment& env, std::size_t demand_index);

/// Welfare of the capped price regulation under the conjectured model.
double capped_price_welfare(const Environment& env, const PriceRegulation& reg);

ComparisonReport compare_regulation(const Environment& env, const RoptSolution& ropt);

/// Primitive sufficient conditions for the regulation ranking: the
/// inverse-hazard-rate majorization at every theta (quantity side) and its
/// violation or the bottom-type deadweight-loss inequality (price side).
VerificationReport corollary6_conditions(const Environment& env, std::size_t grid_points = 1001);

}  // namespace ropt
