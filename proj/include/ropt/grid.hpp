#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ropt/cost.hpp"

namespace ropt {

inline std::vector<double> make_grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = hi;
    return g;
}

/// Exact trapezoid suffix integrals of a piecewise-linear function sampled on
/// the grid: out[i] = integral of v over [grid[i], grid.back()].
inline std::vector<double> suffix_trapezoid(const std::vector<double>& grid,
                                            const std::vector<double>& values) {
    if (grid.size() != values.size()) throw std::invalid_argument("grid/value size mismatch");
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = grid.size() - 1; i-- > 0;)
        out[i] = out[i + 1] + 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);
    return out;
}

/// Node-centered cell masses F(right edge) - F(left edge); sums to one.
inline std::vector<double> cell_masses(const CostModel& cost, const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    std::vector<double> w(n);
    double left = grid.front();
    for (std::size_t i = 0; i < n; ++i) {
        const double right = (i + 1 < n) ? 0.5 * (grid[i] + grid[i + 1]) : grid.back();
        w[i] = cost.cell_mass(left, right);
        left = right;
    }
    return w;
}

/// Linear interpolation of grid-sampled values at an arbitrary abscissa.
inline double interp(const std::vector<double>& grid, const std::vector<double>& values,
                     double x) {
    if (x <= grid.front()) return values.front();
    if (x >= grid.back()) return values.back();
    std::size_t lo = 0, hi = grid.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (grid[mid] <= x ? lo : hi) = mid;
    }
    const double t = (x - grid[lo]) / (grid[lo + 1] - grid[lo]);
    return values[lo] + t * (values[lo + 1] - values[lo]);
}

/// Exact integral of the piecewise-linear interpolant over [x, grid.back()].
inline double suffix_integral_at(const std::vector<double>& grid,
                                 const std::vector<double>& values,
                                 const std::vector<double>& suffix, double x) {
    if (x <= grid.front()) return suffix.front();
    if (x >= grid.back()) return 0.0;
    std::size_t lo = 0, hi = grid.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (grid[mid] <= x ? lo : hi) = mid;
    }
    const double vx = interp(grid, values, x);
    return suffix[lo + 1] + 0.5 * (vx + values[lo + 1]) * (grid[lo + 1] - x);
}

}  // namespace ropt
