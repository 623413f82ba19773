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

#include "pebm/kernels.hpp"

#include <atomic>
#include <vector>

#include "pebm/error.hpp"

namespace pebm::kernels {

bool thomas(std::span<const double> sub, std::span<const double> diag, std::span<const double> sup,
            std::span<Complex> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n);
  double beta = diag[0];
  if (beta == 0.0) return false;
  rhs[0] /= beta;
  for (std::size_t k = 1; k < n; ++k) {
    c[k - 1] = sup[k - 1] / beta;
    beta = diag[k] - sub[k] * c[k - 1];
    if (beta == 0.0) return false;
    rhs[k] = (rhs[k] - sub[k] * rhs[k - 1]) / beta;
  }
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= c[k] * rhs[k + 1];
  return true;
}

namespace {

struct Tridiag {
  std::vector<double> sub, diag, sup;
  explicit Tridiag(std::size_t n) : sub(n, 0.0), diag(n, 0.0), sup(n, 0.0) {}
};

// Coefficients of s I + alpha L for one velocity column.
void velocity_operator(const Grid& g, double kappa2, double s, double alpha, Tridiag& m) {
  const int n = g.nz;
  const double c = alpha / (g.dz * g.dz);
  for (int k = 0; k < n; ++k) {
    const int neighbours = (k > 0) + (k + 1 < n);
    m.diag[k] = s - alpha * kappa2 - c * neighbours;
    m.sub[k] = k > 0 ? c : 0.0;
    m.sup[k] = k + 1 < n ? c : 0.0;
  }
}

// Coefficients of s I + alpha L for one heat column of size nz + 1.
void heat_operator(const Grid& g, double kappa2, double s, double alpha, Tridiag& m) {
  const int n = g.nz;
  const double c = alpha / (g.dz * g.dz);
  for (int k = 0; k < n; ++k) {
    m.diag[k] = s - alpha * kappa2 - c * ((k > 0) + 1);
    m.sub[k] = k > 0 ? c : 0.0;
    m.sup[k] = c;
  }
  // Top cell: lower face plus the half-cell face to rho (coefficient 2).
  m.diag[n - 1] = s - alpha * kappa2 - 3.0 * c;
  m.sup[n - 1] = 2.0 * c;
  const double f = 2.0 * alpha / g.dz;
  m.diag[n] = s - alpha * kappa2 - f;
  m.sub[n] = f;
  m.sup[n] = 0.0;
}

std::size_t modes(const Grid& g) { return g.spectral_plane(); }

}  // namespace

void solve_velocity_columns(const Grid& g, double alpha, Spectrum& v, Exec exec) {
  std::atomic<bool> failed{false};
  for_range(exec, static_cast<std::ptrdiff_t>(modes(g)), [&](std::ptrdiff_t m) {
    const int i = static_cast<int>(m / g.nyh());
    const int j = static_cast<int>(m % g.nyh());
    Tridiag op(g.nz);
    velocity_operator(g, g.laplacian_symbol(i, j), 1.0, -alpha, op);
    std::vector<Complex> col(g.nz);
    for (int k = 0; k < g.nz; ++k) col[k] = v(i, j, k);
    if (!thomas(op.sub, op.diag, op.sup, col)) failed = true;
    for (int k = 0; k < g.nz; ++k) v(i, j, k) = col[k];
  });
  if (failed) throw NumericalError(NumericalError::Kind::Solver, "singular velocity column", 0.0);
}

void solve_heat_columns(const Grid& g, double alpha, Spectrum& T, Spectrum& rho, Exec exec) {
  std::atomic<bool> failed{false};
  for_range(exec, static_cast<std::ptrdiff_t>(modes(g)), [&](std::ptrdiff_t m) {
    const int i = static_cast<int>(m / g.nyh());
    const int j = static_cast<int>(m % g.nyh());
    Tridiag op(g.nz + 1);
    heat_operator(g, g.laplacian_symbol(i, j), 1.0, -alpha, op);
    std::vector<Complex> col(g.nz + 1);
    for (int k = 0; k < g.nz; ++k) col[k] = T(i, j, k);
    col[g.nz] = rho(i, j);
    if (!thomas(op.sub, op.diag, op.sup, col)) failed = true;
    for (int k = 0; k < g.nz; ++k) T(i, j, k) = col[k];
    rho(i, j) = col[g.nz];
  });
  if (failed) throw NumericalError(NumericalError::Kind::Solver, "singular heat column", 0.0);
}

void apply_velocity_columns(const Grid& g, double s, double alpha, const Spectrum& in, Spectrum& out,
                            Exec exec) {
  if (out.levels() != in.levels() || out.nx() != in.nx()) out = Spectrum::for_levels(g, in.levels());
  for_range(exec, static_cast<std::ptrdiff_t>(modes(g)), [&](std::ptrdiff_t m) {
    const int i = static_cast<int>(m / g.nyh());
    const int j = static_cast<int>(m % g.nyh());
    Tridiag op(g.nz);
    velocity_operator(g, g.laplacian_symbol(i, j), s, alpha, op);
    for (int k = 0; k < g.nz; ++k) {
      Complex acc = op.diag[k] * in(i, j, k);
      if (k > 0) acc += op.sub[k] * in(i, j, k - 1);
      if (k + 1 < g.nz) acc += op.sup[k] * in(i, j, k + 1);
      out(i, j, k) = acc;
    }
  });
}

void apply_heat_columns(const Grid& g, double s, double alpha, const Spectrum& T, const Spectrum& rho,
                        Spectrum& T_out, Spectrum& rho_out, Exec exec) {
  if (T_out.levels() != g.nz) T_out = Spectrum::for_levels(g, g.nz);
  if (rho_out.levels() != 1) rho_out = Spectrum::for_levels(g, 1);
  for_range(exec, static_cast<std::ptrdiff_t>(modes(g)), [&](std::ptrdiff_t m) {
    const int i = static_cast<int>(m / g.nyh());
    const int j = static_cast<int>(m % g.nyh());
    Tridiag op(g.nz + 1);
    heat_operator(g, g.laplacian_symbol(i, j), s, alpha, op);
    auto value = [&](int k) { return k < g.nz ? T(i, j, k) : rho(i, j); };
    for (int k = 0; k <= g.nz; ++k) {
      Complex acc = op.diag[k] * value(k);
      if (k > 0) acc += op.sub[k] * value(k - 1);
      if (k < g.nz) acc += op.sup[k] * value(k + 1);
      if (k < g.nz)
        T_out(i, j, k) = acc;
      else
        rho_out(i, j) = acc;
    }
  });
}

}  // namespace pebm::kernels
