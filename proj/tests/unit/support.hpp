#pragma once

#include <cmath>
#include <functional>

#include "openmhd/field.hpp"
#include "openmhd/grid.hpp"

namespace testing_support {

inline openmhd::Grid unit_grid(int n) { return openmhd::Grid(n, n, 0.0, 1.0, 0.0, 1.0); }

/// Largest |f - g| over interior nodes.
inline double interior_max_diff(const openmhd::Grid& g, const openmhd::ScalarField& f,
                                const std::function<double(double, double)>& exact) {
  double m = 0.0;
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) m = std::max(m, std::abs(f(i, j) - exact(g.x(i), g.y(j))));
  return m;
}

inline double all_max_diff(const openmhd::Grid& g, const openmhd::ScalarField& f,
                           const std::function<double(double, double)>& exact) {
  double m = 0.0;
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) m = std::max(m, std::abs(f(i, j) - exact(g.x(i), g.y(j))));
  return m;
}

}  // namespace testing_support
