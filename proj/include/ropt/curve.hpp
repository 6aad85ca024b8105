#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ropt {

struct Knot {
    double x = 0.0;
    double y = 0.0;
};

/// Decreasing piecewise-linear curve used for demand (price -> quantity).
/// Left of the first knot the curve is constant, right of the last knot it
/// is extended by zero. All integrals are closed-form (trapezoids of linear
/// pieces), so no quadrature error enters downstream welfare numbers.
class PiecewiseLinearCurve {
public:
    explicit PiecewiseLinearCurve(std::vector<Knot> knots);

    /// D(p). Constant extension left of the first knot, zero beyond the last.
    double value(double p) const;

    /// P(q), the inverse of value(). Returns 0 for q >= D(0).
    double inverse(double q) const;

    /// V(q) = integral of P(s) ds over [0, q].
    double gross_value(double q) const;

    /// Signed integral of D(y) dy over [a, b].
    double integral(double a, double b) const;

    /// D(0)
    double intercept() const { return value(0.0); }

    /// Smallest price at which the curve reaches zero (last knot x if it
    /// never does on its knot range).
    double zero_price() const;

    bool has_flat_segment() const;

    const std::vector<Knot>& knots() const { return knots_; }

    bool operator==(const PiecewiseLinearCurve& other) const {
        if (knots_.size() != other.knots_.size()) return false;
        for (std::size_t i = 0; i < knots_.size(); ++i)
            if (knots_[i].x != other.knots_[i].x || knots_[i].y != other.knots_[i].y) return false;
        return true;
    }

    /// Pointwise minimum of two decreasing curves, as a new knot curve.
    /// Used to build "lowest demand" fixtures like min{3-p, 1.4-0.2p}.
    static PiecewiseLinearCurve pointwise_min(const PiecewiseLinearCurve& a,
                                              const PiecewiseLinearCurve& b);

private:
    std::vector<Knot> knots_;
    // Inverse representation: (q, p) pairs with q ascending, plus cumulative
    // gross value at each point. Built once in the constructor.
    std::vector<Knot> inv_;         // x = q, y = p
    std::vector<double> inv_cum_;   // gross value at inv_[i].x
};

}  // namespace ropt
