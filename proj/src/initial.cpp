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

#include "pebm/initial.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pebm/error.hpp"
#include "pebm/norms.hpp"

namespace pebm {

namespace {

// Sum of random low modes, vertical cosines on volume fields.
Field smooth_field(const Grid& g, int levels, const RandomStateSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Field f(g.nx, g.ny, levels);
  const int mz = levels == 1 ? 0 : spec.max_vertical;
  for (int kx = -spec.max_mode; kx <= spec.max_mode; ++kx)
    for (int ky = 0; ky <= spec.max_mode; ++ky)
      for (int m = 0; m <= mz; ++m) {
        const double a = normal(rng) / (1.0 + kx * kx + ky * ky + m * m);
        const double b = normal(rng) / (1.0 + kx * kx + ky * ky + m * m);
        for (int k = 0; k < levels; ++k) {
          const double zf = levels == 1 ? 1.0 : std::cos(std::numbers::pi * m * g.z_levels[k]);
          for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
              const double ph = 2.0 * std::numbers::pi * (kx * g.x(i) + ky * g.y(j));
              f(i, j, k) += zf * (a * std::cos(ph) + b * std::sin(ph));
            }
        }
      }
  return f;
}

void normalise(const Grid& g, Field& f, double rms) {
  const double n = std::sqrt(l2_sq(g, f));
  if (n > 0.0) f *= rms / n;
}

}  // namespace

State random_state(const Grid& g, const RandomStateSpec& spec, double t) {
  if (spec.max_mode < 0 || spec.max_vertical < 0) throw ConfigError("random_state: mode bounds must be >= 0");
  std::mt19937_64 rng(spec.seed);
  State s = State::zero(g, t);
  s.v.x = smooth_field(g, g.nz, spec, rng);
  s.v.y = smooth_field(g, g.nz, spec, rng);
  s.v = project_barotropic(g, s.v, nullptr, Exec::Serial);
  // Drop the uniform barotropic drift; it is a neutral mode of the dynamics.
  for (Field* c : {&s.v.x, &s.v.y}) {
    const Field bar = vertical_average(g, *c);
    double mean = 0.0;
    for (std::size_t n = 0; n < bar.size(); ++n) mean += bar[n];
    mean /= static_cast<double>(bar.size());
    for (std::size_t n = 0; n < c->size(); ++n) (*c)[n] -= mean;
  }
  // One factor for both components keeps the barotropic mean divergence free.
  const double vn = std::sqrt(0.5 * (l2_sq(g, s.v.x) + l2_sq(g, s.v.y)));
  if (vn > 0.0) {
    s.v.x *= spec.amplitude / vn;
    s.v.y *= spec.amplitude / vn;
  }
  s.T = smooth_field(g, g.nz, spec, rng);
  normalise(g, s.T, spec.amplitude);
  Field extra = smooth_field(g, 1, spec, rng);
  normalise(g, extra, 0.1 * spec.amplitude);
  const std::size_t plane = g.plane();
  const int top = g.nz - 1;
  for (std::size_t n = 0; n < plane; ++n)
    s.rho[n] = 1.5 * s.T[top * plane + n] - 0.5 * s.T[(top - 1) * plane + n] + extra[n];
  return s;
}

State white_noise_state(const Grid& g, std::uint64_t seed, double t) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  State s = State::zero(g, t);
  for (Field* f : {&s.v.x, &s.v.y, &s.T, &s.rho})
    for (std::size_t n = 0; n < f->size(); ++n) (*f)[n] = normal(rng);
  s.v = project_barotropic(g, s.v, nullptr, Exec::Serial);
  return s;
}

void perturb_mode(const Grid& g, State& s, int component, int kx, int ky, double amplitude) {
  if (component < 0 || component > 3) throw ConfigError("perturb_mode: component must be 0..3");
  Field* f = component == 0 ? &s.v.x : component == 1 ? &s.v.y : component == 2 ? &s.T : &s.rho;
  for (int k = 0; k < f->levels(); ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        (*f)(i, j, k) += amplitude * std::cos(2.0 * std::numbers::pi * (kx * g.x(i) + ky * g.y(j)));
  if (component < 2) s.v = project_barotropic(g, s.v, nullptr, Exec::Serial);
}

}  // namespace pebm
