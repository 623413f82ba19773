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

#include "pebm/grid.hpp"

#include <fftw3.h>
#include <omp.h>

#include <mutex>
#include <string>

#include "pebm/error.hpp"

namespace pebm {

namespace {
// FFTW planning is not thread safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

namespace detail {

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftPlans(int nx, int ny) {
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    const std::size_t nh = static_cast<std::size_t>(nx) * (ny / 2 + 1);
    std::lock_guard lock(planner_mutex());
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(nh);
    // ESTIMATE keeps planning deterministic; UNALIGNED lets us execute on
    // arbitrary std::vector storage with identical results.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_r2c_2d(nx, ny, r, c, flags);
    backward = fftw_plan_dft_c2r_2d(nx, ny, c, r, flags | FFTW_DESTROY_INPUT);
    fftw_free(r);
    fftw_free(c);
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

}  // namespace detail

void set_max_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

Grid make_grid(int nx, int ny, int nz, double dt) {
  std::vector<std::string> errors;
  if (nx < 4 || nx % 2 != 0) errors.push_back("nx must be even and >= 4 (got " + std::to_string(nx) + ")");
  if (ny < 4 || ny % 2 != 0) errors.push_back("ny must be even and >= 4 (got " + std::to_string(ny) + ")");
  if (nz < 3) errors.push_back("nz must be >= 3 (got " + std::to_string(nz) + ")");
  if (!(dt > 0.0)) errors.push_back("dt must be positive");
  if (!errors.empty()) throw ConfigError(errors);

  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.dx = 1.0 / nx;
  g.dy = 1.0 / ny;
  g.dz = 1.0 / nz;
  g.dt = dt;
  g.z_levels.resize(nz);
  for (int k = 0; k < nz; ++k) g.z_levels[k] = (k + 0.5) * g.dz;
  g.plans = std::make_shared<const detail::FftPlans>(nx, ny);
  return g;
}

Field& Field::operator+=(const Field& o) {
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
  return *this;
}

Field& Field::operator*=(double a) {
  for (auto& x : data_) x *= a;
  return *this;
}

void Field::axpy(double a, const Field& o) {
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += a * o.data_[n];
}

namespace {

void check_field(const Grid& g, const Field& f) {
  if (f.nx() != g.nx || f.ny() != g.ny || f.levels() < 1)
    throw ShapeError("field shape " + std::to_string(f.nx()) + "x" + std::to_string(f.ny()) +
                     " does not match grid " + std::to_string(g.nx) + "x" + std::to_string(g.ny));
}

void check_spectrum(const Grid& g, const Spectrum& s) {
  if (s.nx() != g.nx || s.nyh() != g.nyh() || s.levels() < 1)
    throw ShapeError("spectrum shape does not match grid");
}

}  // namespace

void fft_h(const Grid& g, const Field& f, Spectrum& out, Exec exec) {
  check_field(g, f);
  if (out.nx() != g.nx || out.nyh() != g.nyh() || out.levels() != f.levels())
    out = Spectrum::for_levels(g, f.levels());
  const double scale = 1.0 / static_cast<double>(g.plane());
  const fftw_plan plan = g.plans->forward;
  for_range(exec, f.levels(), [&](std::ptrdiff_t k) {
    auto in = f.level(static_cast<int>(k));
    auto sp = out.level(static_cast<int>(k));
    fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(sp.data()));
    for (auto& c : sp) c *= scale;
  });
}

Spectrum fft_h(const Grid& g, const Field& f, Exec exec) {
  Spectrum s;
  fft_h(g, f, s, exec);
  return s;
}

void ifft_h(const Grid& g, const Spectrum& s, Field& out, Exec exec) {
  check_spectrum(g, s);
  if (out.nx() != g.nx || out.ny() != g.ny || out.levels() != s.levels())
    out = Field(g.nx, g.ny, s.levels());
  const fftw_plan plan = g.plans->backward;
  for_range(exec, s.levels(), [&](std::ptrdiff_t k) {
    auto sp = s.level(static_cast<int>(k));
    std::vector<Complex> scratch(sp.begin(), sp.end());  // c2r destroys its input
    auto o = out.level(static_cast<int>(k));
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(scratch.data()), o.data());
  });
}

Field ifft_h(const Grid& g, const Spectrum& s, Exec exec) {
  Field f;
  ifft_h(g, s, f, exec);
  return f;
}

Field ddx(const Grid& g, const Field& f, Exec exec) {
  Spectrum s = fft_h(g, f, exec);
  for (int k = 0; k < s.levels(); ++k)
    for (int i = 0; i < g.nx; ++i) {
      const Complex ik(0.0, g.deriv_kx(i));
      for (int j = 0; j < g.nyh(); ++j) s(i, j, k) *= ik;
    }
  return ifft_h(g, s, exec);
}

Field ddy(const Grid& g, const Field& f, Exec exec) {
  Spectrum s = fft_h(g, f, exec);
  for (int k = 0; k < s.levels(); ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j) s(i, j, k) *= Complex(0.0, g.deriv_ky(j));
  return ifft_h(g, s, exec);
}

void dealias(const Grid& g, Spectrum& s) {
  for (int k = 0; k < s.levels(); ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j)
        if (!g.dealias_keep(i, j)) s(i, j, k) = 0.0;
}

Field dealiased(const Grid& g, const Field& f, Exec exec) {
  Spectrum s = fft_h(g, f, exec);
  dealias(g, s);
  return ifft_h(g, s, exec);
}

}  // namespace pebm
