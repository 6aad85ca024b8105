// Acceptance gate: one line per criterion, exit status 0 only if all pass.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "fixtures.hpp"
#include "ropt/oracle.hpp"
#include "ropt/regulation.hpp"
#include "ropt/solver.hpp"

using namespace ropt;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
    if (!pass) ++failures;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<QuantitySchedule> pinned_population(const Environment& env, std::size_t n,
                                                unsigned seed) {
    auto schedules = random_monotone_schedules(env, n, seed);
    const double ql = env.efficient_floor();
    for (auto& s : schedules) {
        for (auto& v : s.values) v = std::max(v, ql);
        s.values.back() = ql;
    }
    return schedules;
}

}  // namespace

int main() {
    auto env1 = s1();
    auto env2 = s2();
    auto env3 = s3();

    {  // 1. guarantee parity with the closed forms and the oracle
        bool ok = true;
        const double g1 = worst_case_profile(bm_with_floor(env1, 1001), env1).minimum;
        const double g2 = worst_case_profile(bm_with_floor(env2, 1001), env2).minimum;
        ok = ok && near(g1, 0.5, 1e-9) && near(max_guarantee(env1), 0.5, 1e-9);
        ok = ok && near(g2, 1.0 / 12.0, 1e-9) && near(max_guarantee(env2), 1.0 / 12.0, 1e-9);
        ok = ok && near(brute_force_guarantee(bm_with_floor(env1, 1001), env1,
                                              AdversaryGrid::uniform(env1, 201)),
                        0.5, 1e-9);
        ok = ok && near(brute_force_guarantee(bm_with_floor(env2, 1001), env2,
                                              AdversaryGrid::uniform(env2, 201)),
                        1.0 / 12.0, 1e-9);
        report(1, ok, "floor-mechanism guarantee equals G* (closed form and oracle)");
    }

    {  // 2. floor-optimality gate with the exact slack on the failing fixture
        const auto r3 = check_floor_optimal(env3);
        bool ok = check_floor_optimal(env1).pass() && check_floor_optimal(env2).pass() &&
                  !r3.pass() && near(r3.find("dwl_at_theta_low")->worst_slack, -0.85, 1e-9);
        report(2, ok, "floor gate passes on S1/S2, fails on S3 by 0.85");
    }

    {  // 3. conjectured-welfare closed forms and grid-refinement drift
        const double w1 = conjectured_welfare(bm_with_floor(env1, 1001), env1);
        const double w2 = conjectured_welfare(bm_with_floor(env2, 1001), env2);
        const double w1c = conjectured_welfare(bm_with_floor(env1, 251), env1);
        const double w2c = conjectured_welfare(bm_with_floor(env2, 251), env2);
        bool ok = near(w1, 7.0 / 12.0, 1e-7) && near(w2, 21.0 / 32.0, 1e-7) &&
                  std::abs(w1 - w1c) < 1e-6 && std::abs(w2 - w2c) < 1e-6;
        report(3, ok, "conjectured welfare 7/12 and 21/32, drift < 1e-6 under refinement");
    }

    RoptSolution sol3;
    {  // 4. general solver on S3
        sol3 = solve_ropt(env3);
        bool ok = !sol3.floor_optimal && sol3.stats.converged;
        ok = ok && shortlist_check(sol3.mechanism, env3, 1e-7).pass();
        ok = ok && sol3.objective >= 0.5 && sol3.objective <= 7.0 / 12.0 - 1e-6;
        double best = -1e9;
        for (const auto& s : random_feasible_schedules(env3, 10000, 2024))
            best = std::max(best, conjectured_welfare({s, 0.0}, env3));
        ok = ok && sol3.objective >= best - 1e-6;
        ok = ok && verify_prop2_structure(sol3, env3).pass();
        report(4, ok, "S3 solver: short-list feasible, beats 10,000 samples, right structure");
    }

    {  // 5. capped price regulation
        bool ok = true;
        auto r1 = bm_with_price_cap(env1, 1001);
        for (const auto* env : {&env1, &env2, &env3}) {
            auto reg = bm_with_price_cap(*env, 1001);
            ok = ok && price_shortlist_check(reg, *env).pass();
            ok = ok && near(brute_force_guarantee(reg, *env, AdversaryGrid::uniform(*env, 201)),
                            max_guarantee(*env), 1e-7);
            ok = ok && reg.prices == r1.prices;
        }
        report(5, ok, "price cap is on the short list, guarantees G*, cost-model-only");
    }

    {  // 6. regulation ranking
        auto rep1 = compare_regulation(env1, solve_ropt(env1));
        auto rep2 = compare_regulation(env2, solve_ropt(env2));
        auto rep3 = compare_regulation(env3, sol3);
        bool ok = rep1.winner == Winner::Equivalent &&
                  std::abs(rep1.quantity_welfare - rep1.price_welfare) < 1e-7;
        ok = ok && rep2.winner == Winner::Quantity &&
             near(rep2.quantity_welfare - rep2.price_welfare, 21.0 / 32.0 - 7.0 / 12.0, 1e-7) &&
             rep2.sufficient_condition == "quantity";
        ok = ok && rep3.winner == Winner::Price &&
             rep3.price_welfare - rep3.quantity_welfare > 1e-7 &&
             rep3.sufficient_condition == "price" &&
             corollary6_conditions(env3).find("bottom_dwl_inequality")->worst_slack > 0.0;
        report(6, ok, "ranking: S1 equivalent, S2 quantity by 21/32 - 7/12, S3 price");
    }

    {  // 7. randomized property suites
        bool ok = true;
        for (const auto* env : {&env1, &env2, &env3}) {
            for (const auto& s : pinned_population(*env, 1000, 314)) {
                const bool a =
                    majorization_check(s, *env, MajorizationForm::Pointwise, 1e-7).pass();
                const bool b = majorization_check(s, *env, MajorizationForm::Dwl, 1e-7).pass();
                const bool c =
                    majorization_check(s, *env, MajorizationForm::Endpoint, 1e-7).pass();
                ok = ok && a == b && b == c;
                ok = ok && monotonicity_probe(s, *env, 1e-7).pass();
            }
        }
        std::mt19937 rng(777);
        for (int k = 0; k < 50; ++k) {
            auto env = random_environment(rng);
            SolverOptions opt;
            opt.grid_points = 301;
            auto sol = solve_ropt(env, opt);
            if (sol.theta_m < env.theta_high() - 1e-9)
                ok = ok && sol.mechanism.schedule.value_at(sol.theta_m) >=
                               env.lowest_demand().value(sol.theta_m) - 1e-3;
        }
        auto shallow = AdversaryGrid::uniform(env2, 13, 1);
        auto deep = AdversaryGrid::uniform(env2, 13, 3);
        for (const auto& s : random_monotone_schedules(env2, 200, 3)) {
            QuantityMechanism mech{s, 0.0};
            ok = ok && near(brute_force_guarantee(mech, env2, deep),
                            brute_force_guarantee(mech, env2, shallow), 1e-9);
        }
        report(7, ok, "majorization equivalence, profile monotonicity, floor bound, Diracs");
    }

    {  // 8. gradient check on random interior coordinates
        bool ok = true;
        std::mt19937 rng(99);
        for (const auto* env : {&env1, &env2, &env3}) {
            auto mech = bm_with_floor(*env, 1001);
            const std::size_t n = mech.schedule.grid.size();
            std::uniform_int_distribution<std::size_t> pick(1, n - 2);
            for (int k = 0; k < 100; ++k) {
                std::vector<double> dir(n, 0.0);
                dir[pick(rng)] = 1.0;
                ok = ok && finite_difference_welfare_check(mech, *env, dir, 1e-4).pass();
            }
        }
        report(8, ok, "analytic vs finite-difference gradient within 1e-4");
    }

    return failures == 0 ? 0 : 1;
}
