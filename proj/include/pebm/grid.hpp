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

/// @file grid.hpp
/// @brief Discrete domain G x (0,1), G = (0,1)^2, and horizontal transforms.
///
/// Horizontal directions are Fourier collocation on nx x ny equispaced points
/// (x_i = i dx, y_j = j dy). The vertical direction uses nz cells with values
/// stored at the centers z_k = (k + 1/2) dz. The bottom (z = 0) and surface
/// (z = 1) boundaries sit half a cell outside the first and last centers.
///
/// Storage is level-major: a 3D field holds nz contiguous nx*ny planes,
/// each plane row-major in (i, j). Spectra use the real-to-complex layout
/// nx * (ny/2 + 1) per level and are normalised so that the (0,0)
/// coefficient equals the horizontal mean.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "pebm/parallel.hpp"

namespace pebm {

using Complex = std::complex<double>;

namespace detail {
struct FftPlans;
}

struct Grid {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
  double dt = 0.0;
  std::vector<double> z_levels;  // cell centers
  std::shared_ptr<const detail::FftPlans> plans;

  int nyh() const noexcept { return ny / 2 + 1; }
  std::size_t plane() const noexcept { return static_cast<std::size_t>(nx) * ny; }
  std::size_t spectral_plane() const noexcept { return static_cast<std::size_t>(nx) * nyh(); }

  double x(int i) const noexcept { return i * dx; }
  double y(int j) const noexcept { return j * dy; }
  double z_face(int f) const noexcept { return f * dz; }

  /// Signed integer wavenumber of row i / column j of the r2c spectrum.
  int wavenumber_x(int i) const noexcept { return i <= nx / 2 ? i : i - nx; }
  int wavenumber_y(int j) const noexcept { return j; }

  /// Angular wavenumbers used by first derivatives. The Nyquist entries are
  /// zero so that derivatives of real fields stay real and skew-adjoint.
  double deriv_kx(int i) const noexcept {
    return (2 * i == nx) ? 0.0 : 2.0 * std::numbers::pi * wavenumber_x(i);
  }
  double deriv_ky(int j) const noexcept {
    return (2 * j == ny) ? 0.0 : 2.0 * std::numbers::pi * wavenumber_y(j);
  }
  /// Symbol of -Delta_H (true wavenumbers, Nyquist included).
  double laplacian_symbol(int i, int j) const noexcept {
    const double kx = 2.0 * std::numbers::pi * wavenumber_x(i);
    const double ky = 2.0 * std::numbers::pi * wavenumber_y(j);
    return kx * kx + ky * ky;
  }
  /// 2/3-rule mask: keeps |k| <= n/3 in each direction.
  bool dealias_keep(int i, int j) const noexcept {
    const int ax = wavenumber_x(i) < 0 ? -wavenumber_x(i) : wavenumber_x(i);
    return 3 * ax <= nx && 3 * wavenumber_y(j) <= ny;
  }
};

/// Validates the sample counts and builds the transform plans.
/// Throws ConfigError on odd / too small counts or dt <= 0.
Grid make_grid(int nx, int ny, int nz, double dt);

/// Contiguous real array of `levels` horizontal planes.
class Field {
 public:
  Field() = default;
  Field(int nx, int ny, int levels, double value = 0.0)
      : nx_(nx), ny_(ny), levels_(levels),
        data_(static_cast<std::size_t>(nx) * ny * levels, value) {}

  static Field volume(const Grid& g, double value = 0.0) { return {g.nx, g.ny, g.nz, value}; }
  static Field surface(const Grid& g, double value = 0.0) { return {g.nx, g.ny, 1, value}; }
  static Field faces(const Grid& g, double value = 0.0) { return {g.nx, g.ny, g.nz + 1, value}; }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

  double& operator()(int i, int j, int k = 0) noexcept { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k = 0) const noexcept { return data_[index(i, j, k)]; }
  double& operator[](std::size_t n) noexcept { return data_[n]; }
  double operator[](std::size_t n) const noexcept { return data_[n]; }

  std::span<double> level(int k) noexcept { return {data_.data() + k * plane(), plane()}; }
  std::span<const double> level(int k) const noexcept { return {data_.data() + k * plane(), plane()}; }

  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool same_shape(const Field& o) const noexcept {
    return nx_ == o.nx_ && ny_ == o.ny_ && levels_ == o.levels_;
  }
  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);
  /// this += a * o
  void axpy(double a, const Field& o);

 private:
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(k) * nx_ + i) * ny_ + j;
  }
  int nx_ = 0;
  int ny_ = 0;
  int levels_ = 0;
  std::vector<double> data_;
};

/// Horizontal spectrum of a Field, one r2c plane per level.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(int nx, int nyh, int levels)
      : nx_(nx), nyh_(nyh), levels_(levels),
        data_(static_cast<std::size_t>(nx) * nyh * levels) {}
  static Spectrum for_levels(const Grid& g, int levels) { return {g.nx, g.nyh(), levels}; }

  int nx() const noexcept { return nx_; }
  int nyh() const noexcept { return nyh_; }
  int levels() const noexcept { return levels_; }
  std::size_t plane() const noexcept { return static_cast<std::size_t>(nx_) * nyh_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(int i, int j, int k = 0) noexcept { return data_[index(i, j, k)]; }
  Complex operator()(int i, int j, int k = 0) const noexcept { return data_[index(i, j, k)]; }
  Complex& operator[](std::size_t n) noexcept { return data_[n]; }
  Complex operator[](std::size_t n) const noexcept { return data_[n]; }

  std::span<Complex> level(int k) noexcept { return {data_.data() + k * plane(), plane()}; }
  std::span<const Complex> level(int k) const noexcept { return {data_.data() + k * plane(), plane()}; }
  std::vector<Complex>& values() noexcept { return data_; }
  const std::vector<Complex>& values() const noexcept { return data_; }

 private:
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(k) * nx_ + i) * nyh_ + j;
  }
  int nx_ = 0;
  int nyh_ = 0;
  int levels_ = 0;
  std::vector<Complex> data_;
};

/// Forward horizontal transform of every level. Throws ShapeError when the
/// field does not match the grid.
Spectrum fft_h(const Grid& g, const Field& f, Exec exec = Exec::Parallel);
void fft_h(const Grid& g, const Field& f, Spectrum& out, Exec exec = Exec::Parallel);

/// Inverse horizontal transform of every level.
Field ifft_h(const Grid& g, const Spectrum& s, Exec exec = Exec::Parallel);
void ifft_h(const Grid& g, const Spectrum& s, Field& out, Exec exec = Exec::Parallel);

/// Spectral horizontal derivatives (physical in, physical out).
Field ddx(const Grid& g, const Field& f, Exec exec = Exec::Parallel);
Field ddy(const Grid& g, const Field& f, Exec exec = Exec::Parallel);

/// Applies the 2/3-rule mask in spectral space.
void dealias(const Grid& g, Spectrum& s);
/// Physical-space projection onto the dealiased modes.
Field dealiased(const Grid& g, const Field& f, Exec exec = Exec::Parallel);

}  // namespace pebm
