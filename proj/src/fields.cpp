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

#include "pebm/fields.hpp"

#include <string>

#include "pebm/error.hpp"

namespace pebm {

namespace {

void require_volume(const Grid& g, const Field& f, const char* what) {
  if (f.nx() != g.nx || f.ny() != g.ny || f.levels() != g.nz)
    throw ShapeError(std::string(what) + ": expected a volume field on the grid");
}

void require_surface(const Grid& g, const Field& f, const char* what) {
  if (f.nx() != g.nx || f.ny() != g.ny || f.levels() != 1)
    throw ShapeError(std::string(what) + ": expected a surface field on the grid");
}

void require_faces(const Grid& g, const Field& f, const char* what) {
  if (f.nx() != g.nx || f.ny() != g.ny || f.levels() != g.nz + 1)
    throw ShapeError(std::string(what) + ": expected a face field on the grid");
}

// Spectral divergence of (a, b), written into a spectrum.
void spectral_divergence(const Grid& g, const Spectrum& a, const Spectrum& b, Spectrum& out) {
  out = Spectrum::for_levels(g, a.levels());
  for (int k = 0; k < a.levels(); ++k)
    for (int i = 0; i < g.nx; ++i) {
      const double kx = g.deriv_kx(i);
      for (int j = 0; j < g.nyh(); ++j)
        out(i, j, k) = Complex(0.0, kx) * a(i, j, k) + Complex(0.0, g.deriv_ky(j)) * b(i, j, k);
    }
}

// Horizontal half of the skew form: 1/2 [a.grad phi + div_H(a phi)].
Field skew_horizontal(const Grid& g, const Field& ax, const Field& ay, const Field& phi, Exec exec) {
  const Spectrum phi_hat = fft_h(g, phi, exec);
  Spectrum dx_hat = phi_hat;
  Spectrum dy_hat = phi_hat;
  for (int k = 0; k < phi.levels(); ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j) {
        dx_hat(i, j, k) *= Complex(0.0, g.deriv_kx(i));
        dy_hat(i, j, k) *= Complex(0.0, g.deriv_ky(j));
      }
  const Field phi_x = ifft_h(g, dx_hat, exec);
  const Field phi_y = ifft_h(g, dy_hat, exec);

  Field flux_x(g.nx, g.ny, phi.levels());
  Field flux_y(g.nx, g.ny, phi.levels());
  Field out(g.nx, g.ny, phi.levels());
  for (std::size_t n = 0; n < out.size(); ++n) {
    flux_x[n] = ax[n] * phi[n];
    flux_y[n] = ay[n] * phi[n];
    out[n] = ax[n] * phi_x[n] + ay[n] * phi_y[n];
  }
  Spectrum div_hat;
  spectral_divergence(g, fft_h(g, flux_x, exec), fft_h(g, flux_y, exec), div_hat);
  const Field div = ifft_h(g, div_hat, exec);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = 0.5 * (out[n] + div[n]);
  return out;
}

// Vertical half of the skew form on the staggered grid:
// (w_{k+1/2} phi_{k+1} - w_{k-1/2} phi_{k-1}) / (2 dz), with w = 0 on both
// boundary faces.
void add_skew_vertical(const Grid& g, const Field& w, const Field& phi, Field& out) {
  const double c = 0.5 / g.dz;
  const std::size_t plane = g.plane();
  for (int k = 0; k < g.nz; ++k) {
    for (std::size_t n = 0; n < plane; ++n) {
      double up = 0.0;
      double down = 0.0;
      if (k + 1 < g.nz) up = w[(k + 1) * plane + n] * phi[(k + 1) * plane + n];
      if (k > 0) down = w[k * plane + n] * phi[(k - 1) * plane + n];
      out[k * plane + n] += c * (up - down);
    }
  }
}

}  // namespace

Field vertical_integral(const Grid& g, const Field& T) {
  require_volume(g, T, "vertical_integral");
  Field theta = Field::volume(g);
  const std::size_t plane = g.plane();
  for (std::size_t n = 0; n < plane; ++n) {
    double below = 0.0;
    for (int k = 0; k < g.nz; ++k) {
      const double tk = T[k * plane + n];
      theta[k * plane + n] = below + 0.5 * g.dz * tk;
      below += g.dz * tk;
    }
  }
  return theta;
}

Field vertical_average(const Grid& g, const Field& f) {
  require_volume(g, f, "vertical_average");
  Field avg = Field::surface(g);
  const std::size_t plane = g.plane();
  for (std::size_t n = 0; n < plane; ++n) {
    double s = 0.0;
    for (int k = 0; k < g.nz; ++k) s += f[k * plane + n];
    avg[n] = s / g.nz;
  }
  return avg;
}

VectorField vertical_average(const Grid& g, const VectorField& v) {
  return {vertical_average(g, v.x), vertical_average(g, v.y)};
}

Field divergence_h(const Grid& g, const VectorField& v, Exec exec) {
  if (!v.x.same_shape(v.y)) throw ShapeError("divergence_h: component shapes differ");
  Spectrum d;
  spectral_divergence(g, fft_h(g, v.x, exec), fft_h(g, v.y, exec), d);
  return ifft_h(g, d, exec);
}

VectorField gradient_h(const Grid& g, const Field& f, Exec exec) {
  const Spectrum s = fft_h(g, f, exec);
  Spectrum sx = s;
  Spectrum sy = s;
  for (int k = 0; k < s.levels(); ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j) {
        sx(i, j, k) *= Complex(0.0, g.deriv_kx(i));
        sy(i, j, k) *= Complex(0.0, g.deriv_ky(j));
      }
  return {ifft_h(g, sx, exec), ifft_h(g, sy, exec)};
}

Field compute_w(const Grid& g, const VectorField& v, Exec exec) {
  require_volume(g, v.x, "compute_w");
  require_volume(g, v.y, "compute_w");
  const Field div = divergence_h(g, v, exec);
  Field w = Field::faces(g);
  const std::size_t plane = g.plane();
  for (int k = 0; k < g.nz; ++k)
    for (std::size_t n = 0; n < plane; ++n)
      w[(k + 1) * plane + n] = w[k * plane + n] - g.dz * div[k * plane + n];
  return w;
}

VectorField project_barotropic(const Grid& g, const VectorField& v, Field* potential, Exec exec) {
  require_volume(g, v.x, "project_barotropic");
  require_volume(g, v.y, "project_barotropic");
  const VectorField vbar = vertical_average(g, v);
  const Spectrum bx = fft_h(g, vbar.x, exec);
  const Spectrum by = fft_h(g, vbar.y, exec);
  Spectrum q = Spectrum::for_levels(g, 1);
  Spectrum qx = Spectrum::for_levels(g, 1);
  Spectrum qy = Spectrum::for_levels(g, 1);
  for (int i = 0; i < g.nx; ++i) {
    const double kx = g.deriv_kx(i);
    for (int j = 0; j < g.nyh(); ++j) {
      const double ky = g.deriv_ky(j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      // Delta q = div vbar with the same derivative symbols, so that the
      // projection is exactly idempotent.
      const Complex div = Complex(0.0, kx) * bx(i, j) + Complex(0.0, ky) * by(i, j);
      const Complex qh = -div / k2;
      q(i, j) = qh;
      qx(i, j) = Complex(0.0, kx) * qh;
      qy(i, j) = Complex(0.0, ky) * qh;
    }
  }
  const Field gx = ifft_h(g, qx, exec);
  const Field gy = ifft_h(g, qy, exec);
  VectorField out = v;
  const std::size_t plane = g.plane();
  for (int k = 0; k < g.nz; ++k)
    for (std::size_t n = 0; n < plane; ++n) {
      out.x[k * plane + n] -= gx[n];
      out.y[k * plane + n] -= gy[n];
    }
  if (potential) *potential = ifft_h(g, q, exec);
  return out;
}

Field laplacian_T(const Grid& g, const Field& T, const Field& rho, Exec exec) {
  require_volume(g, T, "laplacian_T");
  require_surface(g, rho, "laplacian_T");
  Spectrum s = fft_h(g, T, exec);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j) s(i, j, k) *= -g.laplacian_symbol(i, j);
  Field lap = ifft_h(g, s, exec);

  const double inv_dz2 = 1.0 / (g.dz * g.dz);
  const std::size_t plane = g.plane();
  for (std::size_t n = 0; n < plane; ++n) {
    for (int k = 0; k < g.nz; ++k) {
      const double tk = T[k * plane + n];
      const double below = k > 0 ? T[(k - 1) * plane + n] : tk;  // reflection at z = 0
      const double above = k + 1 < g.nz ? T[(k + 1) * plane + n] : 2.0 * rho[n] - tk;
      lap[k * plane + n] += (above - 2.0 * tk + below) * inv_dz2;
    }
  }
  return lap;
}

Field surface_flux(const Grid& g, const Field& T, const Field& rho) {
  require_volume(g, T, "surface_flux");
  require_surface(g, rho, "surface_flux");
  Field flux = Field::surface(g);
  const std::size_t plane = g.plane();
  const int top = g.nz - 1;
  for (std::size_t n = 0; n < plane; ++n)
    flux[n] = (8.0 * rho[n] - 9.0 * T[top * plane + n] + T[(top - 1) * plane + n]) / (3.0 * g.dz);
  return flux;
}

Field interface_flux(const Grid& g, const Field& T, const Field& rho) {
  require_volume(g, T, "interface_flux");
  require_surface(g, rho, "interface_flux");
  Field flux = Field::surface(g);
  const std::size_t plane = g.plane();
  const int top = g.nz - 1;
  for (std::size_t n = 0; n < plane; ++n) flux[n] = 2.0 * (rho[n] - T[top * plane + n]) / g.dz;
  return flux;
}

VectorField advection_v(const Grid& g, const VectorField& v, const Field& w, bool dealias_on, Exec exec) {
  require_volume(g, v.x, "advection_v");
  require_volume(g, v.y, "advection_v");
  require_faces(g, w, "advection_v");
  const Field ax = dealias_on ? dealiased(g, v.x, exec) : v.x;
  const Field ay = dealias_on ? dealiased(g, v.y, exec) : v.y;
  const Field ww = dealias_on ? dealiased(g, w, exec) : w;

  VectorField out{skew_horizontal(g, ax, ay, ax, exec), skew_horizontal(g, ax, ay, ay, exec)};
  add_skew_vertical(g, ww, ax, out.x);
  add_skew_vertical(g, ww, ay, out.y);
  if (dealias_on) {
    out.x = dealiased(g, out.x, exec);
    out.y = dealiased(g, out.y, exec);
  }
  return out;
}

Field advection_T(const Grid& g, const VectorField& v, const Field& w, const Field& T, bool dealias_on,
                  Exec exec) {
  require_volume(g, v.x, "advection_T");
  require_volume(g, T, "advection_T");
  require_faces(g, w, "advection_T");
  const Field ax = dealias_on ? dealiased(g, v.x, exec) : v.x;
  const Field ay = dealias_on ? dealiased(g, v.y, exec) : v.y;
  const Field ww = dealias_on ? dealiased(g, w, exec) : w;
  const Field phi = dealias_on ? dealiased(g, T, exec) : T;

  Field out = skew_horizontal(g, ax, ay, phi, exec);
  add_skew_vertical(g, ww, phi, out);
  if (dealias_on) out = dealiased(g, out, exec);
  return out;
}

Field advection_rho(const Grid& g, const VectorField& vbar, const Field& rho, bool dealias_on, Exec exec) {
  require_surface(g, vbar.x, "advection_rho");
  require_surface(g, vbar.y, "advection_rho");
  require_surface(g, rho, "advection_rho");
  const Field ax = dealias_on ? dealiased(g, vbar.x, exec) : vbar.x;
  const Field ay = dealias_on ? dealiased(g, vbar.y, exec) : vbar.y;
  const Field phi = dealias_on ? dealiased(g, rho, exec) : rho;
  Field out = skew_horizontal(g, ax, ay, phi, exec);
  if (dealias_on) out = dealiased(g, out, exec);
  return out;
}

}  // namespace pebm
