#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lvspread/error.hpp"

namespace lvspread {

/// Uniform cell-centred grid on [x_min, x_max].
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
  std::size_t n = 0;

  static Grid1D make(double x_min, double x_max, double dx) {
    detail::require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min,
                    "grid requires x_max > x_min");
    detail::require(std::isfinite(dx) && dx > 0.0, "grid spacing dx must be > 0");
    const double cells = std::round((x_max - x_min) / dx);
    detail::require(cells + 1.0 >= 16.0, "grid must have at least 16 points");
    detail::require(cells < 1e8, "grid too large");
    return {x_min, x_max, dx, static_cast<std::size_t>(cells) + 1};
  }

  [[nodiscard]] double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }

  [[nodiscard]] std::vector<double> coordinates() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
  }
};

}  // namespace lvspread
