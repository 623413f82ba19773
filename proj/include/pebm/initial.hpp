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

/// @file initial.hpp
/// @brief Reproducible initial data.

#pragma once

#include <cstdint>

#include "pebm/fields.hpp"

namespace pebm {

struct RandomStateSpec {
  std::uint64_t seed = 0;
  double amplitude = 0.1;  // RMS of T and of each velocity component on average
  int max_mode = 2;        // horizontal wavenumbers |k| <= max_mode
  int max_vertical = 2;    // vertical cosines cos(pi m z), m <= max_vertical
};

/// Smooth random state built from a few low Fourier modes with normally
/// distributed coefficients. The velocity is projected (div_H vbar = 0) with
/// zero barotropic mean, and
/// rho is set to the extrapolated trace of T plus a small independent part.
State random_state(const Grid& g, const RandomStateSpec& spec, double t = 0.0);

/// Independent N(0, 1) value at every grid point of every component,
/// velocity projected. Used for operator identity tests.
State white_noise_state(const Grid& g, std::uint64_t seed, double t = 0.0);

/// Adds `amplitude * cos(2 pi (kx x + ky y))` to one component of `s`:
/// 0 = v.x, 1 = v.y, 2 = T, 3 = rho. Velocity is re-projected afterwards.
void perturb_mode(const Grid& g, State& s, int component, int kx, int ky, double amplitude);

}  // namespace pebm
