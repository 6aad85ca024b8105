#include "ropt/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ropt {

std::string to_string(CostFamily family) {
    switch (family) {
        case CostFamily::Uniform: return "uniform";
        case CostFamily::Power: return "power";
        case CostFamily::PiecewiseLinearDensity: return "piecewise-linear-density";
    }
    return "?";
}

CostFamily cost_family_from_string(const std::string& name) {
    if (name == "uniform") return CostFamily::Uniform;
    if (name == "power") return CostFamily::Power;
    if (name == "piecewise-linear-density") return CostFamily::PiecewiseLinearDensity;
    throw std::invalid_argument("unknown cost family: " + name);
}

CostModel::CostModel(CostFamily family, double lo, double hi)
    : family_(family), lo_(lo), hi_(hi) {
    if (!(lo > 0.0)) throw std::invalid_argument("theta_low must be positive");
    if (!(hi > lo)) throw std::invalid_argument("theta_high must exceed theta_low");
}

CostModel CostModel::uniform(double theta_low, double theta_high) {
    return CostModel(CostFamily::Uniform, theta_low, theta_high);
}

CostModel CostModel::power(double theta_low, double theta_high, double exponent) {
    if (!(exponent > 0.0)) throw std::invalid_argument("power exponent must be positive");
    CostModel m(CostFamily::Power, theta_low, theta_high);
    m.exponent_ = exponent;
    return m;
}

CostModel CostModel::piecewise_linear_density(double theta_low, double theta_high,
                                              std::vector<Knot> density_knots) {
    CostModel m(CostFamily::PiecewiseLinearDensity, theta_low, theta_high);
    if (density_knots.size() < 2)
        throw std::invalid_argument("density needs at least 2 knots");
    if (density_knots.front().x != theta_low || density_knots.back().x != theta_high)
        throw std::invalid_argument("density knots must span the cost support");
    for (std::size_t i = 0; i < density_knots.size(); ++i) {
        if (density_knots[i].y < 0.0)
            throw std::invalid_argument("density must be nonnegative");
        if (i > 0 && density_knots[i].x <= density_knots[i - 1].x)
            throw std::invalid_argument("density knot x must be strictly increasing");
    }
    m.density_knots_ = std::move(density_knots);
    m.density_cum_.resize(m.density_knots_.size(), 0.0);
    for (std::size_t i = 1; i < m.density_knots_.size(); ++i) {
        const Knot &a = m.density_knots_[i - 1], &b = m.density_knots_[i];
        m.density_cum_[i] = m.density_cum_[i - 1] + 0.5 * (a.y + b.y) * (b.x - a.x);
    }
    m.density_total_ = m.density_cum_.back();
    if (!(m.density_total_ > 0.0))
        throw std::invalid_argument("density must have positive mass");
    return m;
}

double CostModel::cdf(double theta) const {
    if (theta <= lo_) return 0.0;
    if (theta >= hi_) return 1.0;
    switch (family_) {
        case CostFamily::Uniform:
            return (theta - lo_) / (hi_ - lo_);
        case CostFamily::Power:
            return std::pow((theta - lo_) / (hi_ - lo_), exponent_);
        case CostFamily::PiecewiseLinearDensity: {
            auto hi = std::upper_bound(density_knots_.begin(), density_knots_.end(), theta,
                                       [](double v, const Knot& k) { return v < k.x; });
            auto lo = hi - 1;
            const double t = theta - lo->x;
            const double slope = (hi->y - lo->y) / (hi->x - lo->x);
            const double partial = lo->y * t + 0.5 * slope * t * t;
            return (density_cum_[lo - density_knots_.begin()] + partial) / density_total_;
        }
    }
    return 0.0;
}

double CostModel::pdf(double theta) const {
    if (theta < lo_ || theta > hi_) return 0.0;
    switch (family_) {
        case CostFamily::Uniform:
            return 1.0 / (hi_ - lo_);
        case CostFamily::Power: {
            const double t = (theta - lo_) / (hi_ - lo_);
            return exponent_ * std::pow(t, exponent_ - 1.0) / (hi_ - lo_);
        }
        case CostFamily::PiecewiseLinearDensity: {
            auto it = std::upper_bound(density_knots_.begin(), density_knots_.end(), theta,
                                       [](double v, const Knot& k) { return v < k.x; });
            if (it == density_knots_.begin()) return density_knots_.front().y / density_total_;
            if (it == density_knots_.end()) return density_knots_.back().y / density_total_;
            auto lo = it - 1;
            const double t = (theta - lo->x) / (it->x - lo->x);
            return (lo->y + t * (it->y - lo->y)) / density_total_;
        }
    }
    return 0.0;
}

double CostModel::virtual_cost(double theta) const {
    if (theta < lo_ || theta > hi_)
        throw std::invalid_argument("virtual cost queried outside the support");
    // Closed forms where the ratio is stable at the boundary.
    switch (family_) {
        case CostFamily::Uniform:
            return 2.0 * theta - lo_;
        case CostFamily::Power:
            return theta + (theta - lo_) / exponent_;
        case CostFamily::PiecewiseLinearDensity: {
            const double f = pdf(theta);
            if (f <= 0.0) {
                if (theta == lo_) return lo_;  // F = 0 there
                throw std::domain_error("density vanishes at an interior point");
            }
            return theta + cdf(theta) / f;
        }
    }
    return theta;
}

bool CostModel::operator==(const CostModel& other) const {
    if (family_ != other.family_ || lo_ != other.lo_ || hi_ != other.hi_) return false;
    if (family_ == CostFamily::Power && exponent_ != other.exponent_) return false;
    if (family_ == CostFamily::PiecewiseLinearDensity) {
        if (density_knots_.size() != other.density_knots_.size()) return false;
        for (std::size_t i = 0; i < density_knots_.size(); ++i)
            if (density_knots_[i].x != other.density_knots_[i].x ||
                density_knots_[i].y != other.density_knots_[i].y)
                return false;
    }
    return true;
}

}  // namespace ropt
