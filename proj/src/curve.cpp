#include "ropt/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ropt {

PiecewiseLinearCurve::PiecewiseLinearCurve(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw std::invalid_argument("curve needs at least 2 knots");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (knots_[i].x < 0.0 || knots_[i].y < 0.0)
            throw std::invalid_argument("curve knots must be nonnegative");
        if (i > 0) {
            if (knots_[i].x <= knots_[i - 1].x)
                throw std::invalid_argument("curve knot x must be strictly increasing");
            if (knots_[i].y > knots_[i - 1].y + 1e-15)
                throw std::invalid_argument("curve knot y must be weakly decreasing");
        }
    }

    // Inverse representation, ascending in q. A flat demand segment becomes a
    // zero-width jump in q and contributes nothing to the gross-value integral.
    inv_.reserve(knots_.size() + 1);
    for (auto it = knots_.rbegin(); it != knots_.rend(); ++it)
        inv_.push_back({it->y, it->x});
    // Left constant extension: D(p) = y0 on [0, x0], so P drops to 0 at q = y0.
    if (knots_.front().x > 0.0) inv_.push_back({knots_.front().y, 0.0});

    inv_cum_.resize(inv_.size());
    double acc = 0.0;
    // Below the smallest knot quantity the price sits at the last knot's x.
    acc = inv_.front().x * inv_.front().y;
    inv_cum_[0] = acc;
    for (std::size_t i = 1; i < inv_.size(); ++i) {
        const double dq = inv_[i].x - inv_[i - 1].x;
        acc += 0.5 * (inv_[i].y + inv_[i - 1].y) * dq;
        inv_cum_[i] = acc;
    }
}

double PiecewiseLinearCurve::value(double p) const {
    if (p < 0.0) throw std::invalid_argument("price must be nonnegative");
    if (p <= knots_.front().x) return knots_.front().y;
    if (p >= knots_.back().x) return 0.0;
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), p,
                               [](double v, const Knot& k) { return v < k.x; });
    auto lo = hi - 1;
    const double t = (p - lo->x) / (hi->x - lo->x);
    return lo->y + t * (hi->y - lo->y);
}

double PiecewiseLinearCurve::inverse(double q) const {
    if (q < 0.0) throw std::invalid_argument("quantity must be nonnegative");
    if (q >= intercept()) return 0.0;
    if (q <= inv_.front().x) return inv_.front().y;
    auto hi = std::upper_bound(inv_.begin(), inv_.end(), q,
                               [](double v, const Knot& k) { return v < k.x; });
    auto lo = hi - 1;
    if (hi->x == lo->x) return lo->y;
    const double t = (q - lo->x) / (hi->x - lo->x);
    return lo->y + t * (hi->y - lo->y);
}

double PiecewiseLinearCurve::gross_value(double q) const {
    if (q < 0.0) throw std::invalid_argument("quantity must be nonnegative");
    if (q == 0.0) return 0.0;
    if (q <= inv_.front().x) return inv_.front().y * q;
    if (q >= inv_.back().x) return inv_cum_.back();  // P = 0 beyond saturation
    auto hi = std::upper_bound(inv_.begin(), inv_.end(), q,
                               [](double v, const Knot& k) { return v < k.x; });
    auto lo = hi - 1;
    const double t = (q - lo->x) / (hi->x - lo->x);
    const double p_at_q = lo->y + t * (hi->y - lo->y);
    const double dq = q - lo->x;
    return inv_cum_[lo - inv_.begin()] + 0.5 * (lo->y + p_at_q) * dq;
}

double PiecewiseLinearCurve::integral(double a, double b) const {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    if (a < 0.0) throw std::invalid_argument("integration limits must be nonnegative");
    // Collect breakpoints of D over [a, b] and trapezoid each linear piece.
    double acc = 0.0;
    double prev_p = a;
    double prev_v = value(a);
    for (const Knot& k : knots_) {
        if (k.x <= a) continue;
        if (k.x >= b) break;
        acc += 0.5 * (prev_v + k.y) * (k.x - prev_p);
        prev_p = k.x;
        prev_v = k.y;
    }
    acc += 0.5 * (prev_v + value(b)) * (b - prev_p);
    return sign * acc;
}

double PiecewiseLinearCurve::zero_price() const {
    for (const Knot& k : knots_)
        if (k.y == 0.0) return k.x;
    return knots_.back().x;
}

bool PiecewiseLinearCurve::has_flat_segment() const {
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i].y == knots_[i - 1].y && knots_[i].y > 0.0) return true;
    return false;
}

PiecewiseLinearCurve PiecewiseLinearCurve::pointwise_min(const PiecewiseLinearCurve& a,
                                                         const PiecewiseLinearCurve& b) {
    std::vector<double> xs;
    for (const Knot& k : a.knots()) xs.push_back(k.x);
    for (const Knot& k : b.knots()) xs.push_back(k.x);
    // Crossing points of segment pairs become knots of the min curve.
    for (std::size_t i = 1; i < a.knots().size(); ++i) {
        for (std::size_t j = 1; j < b.knots().size(); ++j) {
            const Knot &a0 = a.knots()[i - 1], &a1 = a.knots()[i];
            const Knot &b0 = b.knots()[j - 1], &b1 = b.knots()[j];
            const double lo = std::max(a0.x, b0.x), hi = std::min(a1.x, b1.x);
            if (lo >= hi) continue;
            const double sa = (a1.y - a0.y) / (a1.x - a0.x);
            const double sb = (b1.y - b0.y) / (b1.x - b0.x);
            if (sa == sb) continue;
            const double x = (b0.y - sb * b0.x - a0.y + sa * a0.x) / (sa - sb);
            if (x > lo && x < hi) xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double u, double v) { return std::abs(u - v) < 1e-12; }),
             xs.end());
    std::vector<Knot> out;
    for (double x : xs) out.push_back({x, std::min(a.value(x), b.value(x))});
    // Drop trailing all-zero knots beyond the first zero.
    std::size_t last = out.size();
    while (last >= 2 && out[last - 2].y == 0.0) --last;
    out.resize(last);
    return PiecewiseLinearCurve(out);
}

}  // namespace ropt
