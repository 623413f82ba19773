/* Copyright 2026 The PEBM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <cmath>
#include <numbers>

#include "pebm/fields.hpp"
#include "pebm/grid.hpp"
#include "pebm/physics.hpp"

namespace pebm::test {

inline constexpr double kPi = std::numbers::pi;

inline PhysicsParams no_sun(const Grid& g) { return make_physics(g, 0.3, 0.7, 263.0, {0.0, 0.0}); }

inline double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

inline bool bitwise_equal(const Field& a, const Field& b) { return a.values() == b.values(); }

inline bool bitwise_equal(const State& a, const State& b) {
  return bitwise_equal(a.v.x, b.v.x) && bitwise_equal(a.v.y, b.v.y) && bitwise_equal(a.T, b.T) &&
         bitwise_equal(a.rho, b.rho);
}

template <class F>
Field sample(const Grid& g, int levels, F f) {
  Field out(g.nx, g.ny, levels);
  for (int k = 0; k < levels; ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) out(i, j, k) = f(g.x(i), g.y(j), levels == 1 ? 1.0 : g.z_levels[k]);
  return out;
}

}  // namespace pebm::test
