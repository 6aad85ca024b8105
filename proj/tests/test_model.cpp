#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "ropt/environment.hpp"
#include "ropt/grid.hpp"

using namespace ropt;

TEST_CASE("demand curve evaluation") {
    PiecewiseLinearCurve d1({{0.0, 3.0}, {3.0, 0.0}});
    CHECK(d1.value(2.0) == doctest::Approx(1.0));
    CHECK(d1.value(0.0) == doctest::Approx(3.0));
    CHECK(d1.value(3.0) == 0.0);
    CHECK(d1.value(7.5) == 0.0);  // beyond the zero crossing

    // S3 lowest demand: min{3-p, 1.4-0.2p} with a kink at p=2
    auto d3 = s3().lowest_demand();
    CHECK(d3.value(1.0) == doctest::Approx(1.2));
    CHECK(d3.value(2.0) == doctest::Approx(1.0));
    CHECK(d3.value(3.0) == 0.0);
}

TEST_CASE("inverse demand") {
    PiecewiseLinearCurve d1({{0.0, 3.0}, {3.0, 0.0}});
    CHECK(d1.inverse(1.0) == doctest::Approx(2.0));
    CHECK(d1.inverse(0.0) == doctest::Approx(3.0));

    // quantities beyond the intercept price out at zero
    CHECK(s3().lowest_demand().inverse(2.0) == 0.0);
    CHECK(s2().lowest_demand().inverse(2.0) == doctest::Approx(1.0));

    // inverse is a right inverse of value on the decreasing range
    auto low = s2().lowest_demand();
    for (double p : {0.1, 0.9, 1.0, 1.7, 2.2})
        CHECK(low.inverse(low.value(p)) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("gross value") {
    PiecewiseLinearCurve d1({{0.0, 3.0}, {3.0, 0.0}});
    CHECK(d1.gross_value(1.0) == doctest::Approx(2.5));
    CHECK(d1.gross_value(0.0) == 0.0);
    CHECK(s2().lowest_demand().gross_value(0.5) == doctest::Approx(13.0 / 12.0));

    // saturates beyond the intercept: V(q) constant once P(q)=0
    auto d3 = s3().lowest_demand();
    CHECK(d3.gross_value(1.4) == doctest::Approx(d3.gross_value(2.0)));

    // concavity on a sample of quantity pairs
    for (double q = 0.1; q < 1.3; q += 0.2) {
        const double mid = d3.gross_value(q + 0.05);
        CHECK(mid >= 0.5 * (d3.gross_value(q) + d3.gross_value(q + 0.1)) - 1e-12);
    }
}

TEST_CASE("curve integral matches gross value of the inverse") {
    auto low = s2().lowest_demand();
    // integral of D over [a,b] via the closed form vs a fine Riemann sum
    const double a = 0.5, b = 2.2;
    double riemann = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) riemann += low.value(a + (b - a) * (i + 0.5) / n) * (b - a) / n;
    CHECK(low.integral(a, b) == doctest::Approx(riemann).epsilon(1e-7));
    CHECK(low.integral(b, a) == doctest::Approx(-low.integral(a, b)));
    CHECK(low.integral(1.0, 1.0) == 0.0);
}

TEST_CASE("pointwise minimum of curves") {
    PiecewiseLinearCurve a({{0.0, 3.0}, {3.0, 0.0}});
    PiecewiseLinearCurve b({{0.0, 1.4}, {7.0, 0.0}});
    auto m = PiecewiseLinearCurve::pointwise_min(a, b);
    for (double p = 0.0; p <= 7.0; p += 0.01)
        CHECK(m.value(p) == doctest::Approx(std::min(a.value(p), b.value(p))).epsilon(1e-12));
}

TEST_CASE("virtual cost") {
    auto u = CostModel::uniform(1.0, 2.0);
    CHECK(u.virtual_cost(1.5) == doctest::Approx(2.0));
    CHECK(u.virtual_cost(1.0) == doctest::Approx(1.0));
    CHECK(u.virtual_cost(2.0) == doctest::Approx(3.0));

    auto p = CostModel::power(1.0, 2.0, 2.0);
    CHECK(p.virtual_cost(1.0) == doctest::Approx(1.0));
    // F=(t-1)^2, f=2(t-1), z = t + (t-1)/2
    CHECK(p.virtual_cost(1.5) == doctest::Approx(1.75));
}

TEST_CASE("cost families integrate to one") {
    auto pl = CostModel::piecewise_linear_density(1.0, 2.0, {{1.0, 1.0}, {1.5, 2.0}, {2.0, 0.5}});
    CHECK(pl.cdf(1.0) == doctest::Approx(0.0));
    CHECK(pl.cdf(2.0) == doctest::Approx(1.0));
    // cdf consistent with the pdf by midpoint quadrature
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) acc += pl.pdf(1.0 + (i + 0.5) / n) / n;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pl.cell_mass(1.2, 1.6) ==
          doctest::Approx(pl.cdf(1.6) - pl.cdf(1.2)));
}

TEST_CASE("deadweight loss") {
    auto env3 = s3();
    CHECK(env3.deadweight_loss(1.0, 2.0) == doctest::Approx(0.7));
    // efficient quantity: zero loss
    CHECK(env3.deadweight_loss(1.3, env3.lowest_demand().value(1.3)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s1().deadweight_loss(2.0, 1.0) == doctest::Approx(0.0));
    // undersupply is also a loss
    CHECK(env3.deadweight_loss(1.0, 0.5) > 0.0);
}

TEST_CASE("efficient floor") {
    CHECK(s1().efficient_floor() == doctest::Approx(1.0));
    CHECK(s2().efficient_floor() == doctest::Approx(0.5));
    CHECK(s3().efficient_floor() == doctest::Approx(1.0));
}

TEST_CASE("environment validation") {
    CHECK(s1().validate().pass());
    CHECK(s2().validate().pass());
    CHECK(s3().validate().pass());
    CHECK(s1_with_extra_demand().validate().pass());

    // lowest demand above the conjectured one is rejected
    Environment bad(CostModel::uniform(1.0, 2.0), PiecewiseLinearCurve({{0.0, 3.0}, {3.0, 0.0}}),
                    PiecewiseLinearCurve({{0.0, 3.2}, {3.2, 0.0}}), {}, 5.0);
    auto report = bad.validate();
    CHECK(!report.pass());
    CHECK(!report.find("lowest_demand_is_pointwise_min")->pass);

    CHECK_THROWS_WITH_AS(CostModel::uniform(0.0, 1.0), "theta_low must be positive",
                         std::invalid_argument);
}

TEST_CASE("flat demand segments are flagged, not rejected") {
    Environment env(CostModel::uniform(1.0, 2.0),
                    PiecewiseLinearCurve({{0.0, 3.0}, {1.0, 3.0}, {4.0, 0.0}}),
                    PiecewiseLinearCurve({{0.0, 3.0}, {1.0, 3.0}, {4.0, 0.0}}), {}, 5.0);
    auto report = env.validate();
    CHECK(report.pass());
    const auto* c = report.find("no_flat_demand_segments");
    REQUIRE(c != nullptr);
    CHECK(!c->note.empty());
}

TEST_CASE("grid helpers") {
    auto g = make_grid(1.0, 2.0, 11);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 2.0);
    CHECK(g[5] == doctest::Approx(1.5));

    std::vector<double> v(11, 1.0);
    auto suf = suffix_trapezoid(g, v);
    CHECK(suf.front() == doctest::Approx(1.0));
    CHECK(suf.back() == 0.0);
    CHECK(suffix_integral_at(g, v, suf, 1.25) == doctest::Approx(0.75));
    CHECK(interp(g, v, 1.33) == doctest::Approx(1.0));

    auto w = cell_masses(CostModel::uniform(1.0, 2.0), g);
    double total = 0.0;
    for (double x : w) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.front() == doctest::Approx(0.05));
    CHECK(w[5] == doctest::Approx(0.1));
}
