// Copyright 2026 The cvcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "cvcl/common.hpp"

namespace cvcl {

/// Uniform, endpoint-inclusive position lattice x_i = x_min + i*dx.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
  double dx = 0.0;

  double point(int i) const { return x_min + i * dx; }
  double span() const { return x_max - x_min; }

  bool operator==(const Grid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline Grid make_grid(double x_min, double x_max, int n_points) {
  if (!(x_min < x_max))
    throw invalid_range_error("make_grid: require x_min < x_max, got [" +
                              std::to_string(x_min) + ", " + std::to_string(x_max) + "]");
  if (n_points < 2)
    throw invalid_range_error("make_grid: require n_points >= 2, got " +
                              std::to_string(n_points));
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_points = n_points;
  g.dx = (x_max - x_min) / (n_points - 1);
  return g;
}

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw grid_mismatch_error(std::string(where) + ": grids differ");
}

/// Physical constants. SI values are CODATA 2018.
struct Units {
  enum class Mode { si, natural };

  double hbar = 1.0;
  double gravitational_constant = 1.0;
  Mode mode = Mode::natural;

  static Units si() {
    return Units{1.054571817e-34, 6.67430e-11, Mode::si};
  }
  static Units natural() { return Units{1.0, 1.0, Mode::natural}; }
};

}  // namespace cvcl
