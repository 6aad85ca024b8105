#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ropt/oracle.hpp"
#include "ropt/solver.hpp"

using namespace ropt;

TEST_CASE("unconstrained schedule") {
    auto q = baron_myerson(s1(), 1001);
    CHECK(q.value_at(1.0) == doctest::Approx(2.0));
    CHECK(q.value_at(1.5) == doctest::Approx(1.0));
    CHECK(q.value_at(2.0) == doctest::Approx(0.0));
    for (std::size_t i = 0; i < q.grid.size(); ++i)
        CHECK(q.values[i] == doctest::Approx(std::max(4.0 - 2.0 * q.grid[i], 0.0)));
}

TEST_CASE("non-regular cost models are rejected") {
    // steep density rise at the top makes the virtual cost locally decreasing
    auto cost = CostModel::piecewise_linear_density(1.0, 2.0,
                                                    {{1.0, 1.0}, {1.9, 1.0}, {2.0, 10.0}});
    Environment env(cost, PiecewiseLinearCurve({{0.0, 3.0}, {3.0, 0.0}}),
                    PiecewiseLinearCurve({{0.0, 3.0}, {3.0, 0.0}}), {}, 5.0);
    CHECK(!env.validate().find("virtual_cost_increasing")->pass);
    CHECK_THROWS_AS(baron_myerson(env, 1001), std::runtime_error);
}

TEST_CASE("floor mechanism") {
    auto f1 = bm_with_floor(s1(), 1001);
    for (std::size_t i = 0; i < f1.schedule.grid.size(); ++i)
        CHECK(f1.schedule.values[i] ==
              doctest::Approx(std::max(4.0 - 2.0 * f1.schedule.grid[i], 1.0)));
    auto f2 = bm_with_floor(s2(), 1001);
    for (std::size_t i = 0; i < f2.schedule.grid.size(); ++i)
        CHECK(f2.schedule.values[i] ==
              doctest::Approx(std::max(4.0 - 2.0 * f2.schedule.grid[i], 0.5)));
    CHECK(bm_with_floor(s3(), 1001).schedule.value_at(1.8) == doctest::Approx(1.0));
    CHECK(f1.top_rent == 0.0);
}

TEST_CASE("floor optimality gate") {
    CHECK(check_floor_optimal(s1()).pass());

    auto r2 = check_floor_optimal(s2());
    CHECK(r2.pass());
    CHECK(r2.find("dwl_at_theta_low")->worst_slack == doctest::Approx(0.1875).epsilon(1e-9));

    auto r3 = check_floor_optimal(s3());
    CHECK(!r3.pass());
    CHECK(r3.find("dwl_at_theta_low")->worst_slack == doctest::Approx(-0.85).epsilon(1e-9));
}

TEST_CASE("no demand uncertainty implies floor optimality") {
    // D* = D_low: the floor gate always passes
    std::mt19937 rng(99);
    for (int k = 0; k < 20; ++k) {
        auto env = random_environment(rng);
        Environment collapsed(env.cost(), env.lowest_demand(), env.lowest_demand(), {},
                              env.quantity_cap());
        CHECK(check_floor_optimal(collapsed, 301).pass());
    }
}

TEST_CASE("floor crossing point") {
    CHECK(theta_star(s1()) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(theta_star(s2()) == doctest::Approx(1.75).epsilon(1e-9));
    // schedule never reaches the floor: crossing pinned at theta_high
    Environment wide(CostModel::uniform(1.0, 2.0), PiecewiseLinearCurve({{0.0, 3.0}, {4.0, 0.0}}),
                     PiecewiseLinearCurve({{0.0, 0.6}, {4.0, 0.0}}), {}, 5.0);
    CHECK(theta_star(wide) == doctest::Approx(2.0));
}

TEST_CASE("worst-case minimizer of the floor profile") {
    CHECK(theta_m(s1()) == doctest::Approx(2.0));
    CHECK(theta_m(s2()) == doctest::Approx(2.0));
    CHECK(theta_m(s3()) == doctest::Approx(1.0));
}

TEST_CASE("solver on the fixtures") {
    auto sol1 = solve_ropt(s1());
    CHECK(sol1.floor_optimal);
    CHECK(sol1.objective == doctest::Approx(7.0 / 12.0).epsilon(1e-7));

    auto sol2 = solve_ropt(s2());
    CHECK(sol2.floor_optimal);
    CHECK(sol2.objective == doctest::Approx(21.0 / 32.0).epsilon(1e-7));

    auto env3 = s3();
    auto sol3 = solve_ropt(env3);
    CHECK(!sol3.floor_optimal);
    CHECK(sol3.stats.converged);
    CHECK(sol3.objective >= 0.5);
    CHECK(sol3.objective <= 7.0 / 12.0 - 1e-6);
    CHECK(shortlist_check(sol3.mechanism, env3, 1e-7).pass());
    CHECK(worst_case_profile(sol3.mechanism, env3).minimum == doctest::Approx(0.5).epsilon(1e-7));
    // the floor binds above theta_star
    for (std::size_t i = 0; i < sol3.mechanism.schedule.grid.size(); ++i)
        if (sol3.mechanism.schedule.grid[i] >= 1.5 + 1e-6)
            CHECK(sol3.mechanism.schedule.values[i] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("solution structure") {
    auto env3 = s3();
    auto sol3 = solve_ropt(env3);
    CHECK(verify_prop2_structure(sol3, env3).pass());

    // the floor mechanism itself lacks the strict middle-region drop
    RoptSolution fake;
    fake.mechanism = bm_with_floor(env3, sol3.mechanism.schedule.grid.size());
    fake.theta_star = sol3.theta_star;
    fake.theta_m = sol3.theta_m;
    fake.floor_optimal = false;
    auto rep = verify_prop2_structure(fake, env3);
    CHECK(!rep.pass());
    CHECK(!rep.find("strictly_below_bm_on_middle_region")->pass);

    // floor-optimal solutions skip the structure checks
    auto sol1 = solve_ropt(s1());
    auto skipped = verify_prop2_structure(sol1, s1());
    CHECK(skipped.pass());
    CHECK(!skipped.checks.front().note.empty());
}

TEST_CASE("uniqueness off the bottom type") {
    for (auto env : {s1(), s2()}) {
        SolverOptions base;
        auto reference = solve_ropt(env, base);
        REQUIRE(reference.floor_optimal);
        auto starts = random_feasible_schedules(env, 10, 5);
        for (const auto& s0 : starts) {
            SolverOptions opt;
            opt.force_general = true;
            opt.initial = s0;
            auto sol = solve_ropt(env, opt);
            double dev = 0.0;
            for (std::size_t i = 1; i < sol.mechanism.schedule.values.size(); ++i)
                dev = std::max(dev, std::abs(sol.mechanism.schedule.values[i] -
                                             reference.mechanism.schedule.values[i]));
            CHECK(dev <= 1e-5);
        }
    }
}

TEST_CASE("saddle consistency on random environments") {
    std::mt19937 rng(12345);
    for (int k = 0; k < 50; ++k) {
        auto env = random_environment(rng);
        SolverOptions opt;
        opt.grid_points = 301;
        auto sol = solve_ropt(env, opt);
        CHECK(sol.stats.converged);
        CHECK(worst_case_profile(sol.mechanism, env).minimum ==
              doctest::Approx(max_guarantee(env)).epsilon(1e-7));
    }
}

TEST_CASE("quantity at the worst-case cost dominates the lowest demand") {
    std::mt19937 rng(777);
    int applicable = 0;
    for (int k = 0; k < 50; ++k) {
        auto env = random_environment(rng);
        SolverOptions opt;
        opt.grid_points = 301;
        auto sol = solve_ropt(env, opt);
        const double tm = sol.theta_m;
        if (tm >= env.theta_high() - 1e-9) continue;
        ++applicable;
        const double q_tm = sol.mechanism.schedule.value_at(tm);
        const double d_tm = env.lowest_demand().value(tm);
        CHECK(q_tm >= d_tm - 1e-3);  // solver-grade: q at theta_m is interpolated
        if (tm > env.theta_low() + 1e-9) CHECK(q_tm == doctest::Approx(d_tm).epsilon(1e-3));
    }
    CHECK(applicable > 0);
}

TEST_CASE("discrete objective and gradient") {
    auto env = s1();
    auto sched = bm_with_floor(env, 1001).schedule;
    // consistent with the quadrature-based welfare at matching resolution
    QuantityMechanism mech{sched, 0.0};
    CHECK(discrete_virtual_surplus(env, sched) ==
          doctest::Approx(conjectured_welfare(mech, env)).epsilon(1e-5));

    // gradient vanishes where the schedule sits on the unconstrained optimum
    auto grad = virtual_surplus_gradient(env, sched);
    for (std::size_t i = 1; i + 1 < sched.grid.size(); ++i)
        if (sched.grid[i] < 1.5 - 1e-9) CHECK(std::abs(grad[i]) < 1e-9);
}

TEST_CASE("iteration budget exhaustion raises") {
    SolverOptions opt;
    opt.max_iters = 10;
    CHECK_THROWS_WITH_AS(solve_ropt(s3(), opt),
                         "solver failed to converge within the iteration budget",
                         std::runtime_error);
}
