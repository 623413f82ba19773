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

#include "pebm/norms.hpp"

#include <algorithm>
#include <cmath>

#include "pebm/error.hpp"

namespace pebm {

namespace {

double weight(const Grid& g, const Field& f) {
  return f.levels() == 1 ? g.dx * g.dy : g.dx * g.dy * g.dz;
}

// sum over the full spectrum of symbol * |c|^2, folding the r2c half plane.
double spectral_quadratic(const Grid& g, const Spectrum& s) {
  double acc = 0.0;
  for (int k = 0; k < s.levels(); ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j) {
        const double fold = (j == 0 || 2 * j == g.ny) ? 1.0 : 2.0;
        acc += fold * g.laplacian_symbol(i, j) * std::norm(s(i, j, k));
      }
  return acc;
}

}  // namespace

double inner(const Grid& g, const Field& a, const Field& b) {
  if (!a.same_shape(b)) throw ShapeError("inner: shape mismatch");
  double acc = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) acc += a[n] * b[n];
  return acc * weight(g, a);
}

double inner(const Grid& g, const VectorField& a, const VectorField& b) {
  return inner(g, a.x, b.x) + inner(g, a.y, b.y);
}

double l2_sq(const Grid& g, const Field& f) { return inner(g, f, f); }
double l2_sq(const Grid& g, const VectorField& v) { return inner(g, v, v); }

double max_abs(const Field& f) {
  double m = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) m = std::max(m, std::abs(f[n]));
  return m;
}

double l5_pow5(const Grid& g, const Field& rho) {
  double acc = 0.0;
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double a = std::abs(rho[n]);
    acc += a * a * a * a * a;
  }
  return acc * weight(g, rho);
}

double l1(const Grid& g, const Field& f) {
  double acc = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) acc += std::abs(f[n]);
  return acc * weight(g, f);
}

double grad_sq_v(const Grid& g, const VectorField& v) {
  double horiz = 0.0;
  // Spectra are normalised, so the horizontal weight dx dy is already folded in.
  horiz += spectral_quadratic(g, fft_h(g, v.x)) * g.dz;
  horiz += spectral_quadratic(g, fft_h(g, v.y)) * g.dz;
  double vert = 0.0;
  const std::size_t plane = g.plane();
  for (const Field* c : {&v.x, &v.y})
    for (int k = 0; k + 1 < g.nz; ++k)
      for (std::size_t n = 0; n < plane; ++n) {
        const double d = (*c)[(k + 1) * plane + n] - (*c)[k * plane + n];
        vert += d * d;
      }
  return horiz + vert * g.dx * g.dy / g.dz;
}

double grad_sq_T(const Grid& g, const Field& T, const Field& rho) {
  const double horiz = spectral_quadratic(g, fft_h(g, T)) * g.dz;
  double vert = 0.0;
  const std::size_t plane = g.plane();
  for (int k = 0; k + 1 < g.nz; ++k)
    for (std::size_t n = 0; n < plane; ++n) {
      const double d = T[(k + 1) * plane + n] - T[k * plane + n];
      vert += d * d;
    }
  const int top = g.nz - 1;
  for (std::size_t n = 0; n < plane; ++n) {
    const double d = rho[n] - T[top * plane + n];
    vert += 2.0 * d * d;
  }
  return horiz + vert * g.dx * g.dy / g.dz;
}

double grad_sq_rho(const Grid& g, const Field& rho) { return spectral_quadratic(g, fft_h(g, rho)); }

double x0_sq(const Grid& g, const State& s) { return l2_sq(g, s.v) + l2_sq(g, s.T) + l2_sq(g, s.rho); }

double x0_norm(const Grid& g, const State& s) { return std::sqrt(x0_sq(g, s)); }

double x0_distance(const Grid& g, const State& a, const State& b) {
  State d = a;
  axpy(-1.0, b, d);
  return x0_norm(g, d);
}

void axpy(double a, const State& x, State& y) {
  y.v.x.axpy(a, x.v.x);
  y.v.y.axpy(a, x.v.y);
  y.T.axpy(a, x.T);
  y.rho.axpy(a, x.rho);
}

State scaled(const State& s, double a) {
  State out = s;
  out.v.x *= a;
  out.v.y *= a;
  out.T *= a;
  out.rho *= a;
  return out;
}

std::size_t flat_size(const Grid& g) { return 3 * g.plane() * g.nz + g.plane(); }

void flatten(const State& s, std::vector<double>& out) {
  out.clear();
  out.reserve(s.v.x.size() * 3 + s.rho.size());
  for (const Field* f : {&s.v.x, &s.v.y, &s.T, &s.rho})
    out.insert(out.end(), f->values().begin(), f->values().end());
}

void unflatten(const std::vector<double>& in, State& s) {
  std::size_t off = 0;
  for (Field* f : {&s.v.x, &s.v.y, &s.T, &s.rho}) {
    if (off + f->size() > in.size()) throw ShapeError("unflatten: vector too short");
    std::copy(in.begin() + off, in.begin() + off + f->size(), f->values().begin());
    off += f->size();
  }
}

}  // namespace pebm
