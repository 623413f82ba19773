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

#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "pebm/initial.hpp"
#include "pebm/kernels.hpp"
#include "pebm/norms.hpp"
#include "support.hpp"

using namespace pebm;

TEST_CASE("thomas matches a dense solve") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 9;
  std::vector<double> sub(n), diag(n), sup(n);
  std::vector<Complex> rhs(n);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd b(n);
  for (int k = 0; k < n; ++k) {
    sub[k] = u(rng);
    sup[k] = u(rng);
    diag[k] = 4.0 + u(rng);
    rhs[k] = Complex(u(rng), u(rng));
    a(k, k) = diag[k];
    if (k > 0) a(k, k - 1) = sub[k];
    if (k + 1 < n) a(k, k + 1) = sup[k];
    b(k) = rhs[k];
  }
  REQUIRE(kernels::thomas(sub, diag, sup, rhs));
  const Eigen::VectorXcd x = a.partialPivLu().solve(b);
  for (int k = 0; k < n; ++k) CHECK(std::abs(rhs[k] - x(k)) < 1e-14);

  std::vector<double> zero(2, 0.0);
  std::vector<Complex> r2(2, 1.0);
  CHECK_FALSE(kernels::thomas(zero, zero, zero, r2));
}

namespace {

Spectrum random_spectrum(const Grid& g, int levels, std::uint64_t seed) {
  State s = white_noise_state(g, seed);
  Field f(g.nx, g.ny, levels);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = levels == 1 ? s.rho[n] : s.T[n];
  return fft_h(g, f);
}

double max_diff(const Spectrum& a, const Spectrum& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

}  // namespace

TEST_CASE("column solves invert the column operators") {
  const Grid g = make_grid(8, 8, 6, 0.01);
  const double alpha = 0.37;
  const Spectrum v = random_spectrum(g, g.nz, 1);
  Spectrum av;
  kernels::apply_velocity_columns(g, 1.0, -alpha, v, av, Exec::Serial);
  kernels::solve_velocity_columns(g, alpha, av, Exec::Serial);
  CHECK(max_diff(av, v) < 1e-12);

  const Spectrum T = random_spectrum(g, g.nz, 2);
  const Spectrum rho = random_spectrum(g, 1, 3);
  Spectrum aT, arho;
  kernels::apply_heat_columns(g, 1.0, -alpha, T, rho, aT, arho, Exec::Serial);
  kernels::solve_heat_columns(g, alpha, aT, arho, Exec::Serial);
  CHECK(max_diff(aT, T) < 1e-12);
  CHECK(max_diff(arho, rho) < 1e-12);
}

TEST_CASE("heat column operator matches the assembled coupled stencil") {
  const Grid g = make_grid(4, 4, 5, 0.01);
  // Apply L_heat to (T, rho) and compare against laplacian_T and the
  // surface row -Delta_H rho ... built from independent field operators.
  const State s = white_noise_state(g, 44);
  Spectrum lT, lrho;
  kernels::apply_heat_columns(g, 0.0, 1.0, fft_h(g, s.T), fft_h(g, s.rho), lT, lrho, Exec::Serial);
  const Field lap = laplacian_T(g, s.T, s.rho);
  CHECK(test::max_diff(ifft_h(g, lT), lap) < 1e-10 * max_abs(lap));

  Field expect = interface_flux(g, s.T, s.rho);
  expect *= -1.0;
  expect += ifft_h(g, [&] {
    Spectrum r = fft_h(g, s.rho);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j) r(i, j) *= -g.laplacian_symbol(i, j);
    return r;
  }());
  CHECK(test::max_diff(ifft_h(g, lrho), expect) < 1e-10 * max_abs(expect));
}

TEST_CASE("column operators are dissipative with the gradient energies as quadratic forms") {
  const Grid g = make_grid(16, 16, 8, 0.01);
  const State s = white_noise_state(g, 5);
  Spectrum lx, ly, lT, lrho;
  kernels::apply_velocity_columns(g, 0.0, 1.0, fft_h(g, s.v.x), lx, Exec::Serial);
  kernels::apply_velocity_columns(g, 0.0, 1.0, fft_h(g, s.v.y), ly, Exec::Serial);
  kernels::apply_heat_columns(g, 0.0, 1.0, fft_h(g, s.T), fft_h(g, s.rho), lT, lrho, Exec::Serial);
  const VectorField Lv{ifft_h(g, lx), ifft_h(g, ly)};
  const double qv = inner(g, Lv, s.v);
  CHECK(qv == doctest::Approx(-grad_sq_v(g, s.v)).epsilon(1e-12));
  const double qh = inner(g, ifft_h(g, lT), s.T) + inner(g, ifft_h(g, lrho), s.rho);
  CHECK(qh == doctest::Approx(-(grad_sq_T(g, s.T, s.rho) + grad_sq_rho(g, s.rho))).epsilon(1e-12));
}

TEST_CASE("serial and parallel column solves agree bitwise") {
  const Grid g = make_grid(32, 32, 16, 0.01);
  Spectrum a = random_spectrum(g, g.nz, 6);
  Spectrum b = a;
  kernels::solve_velocity_columns(g, 0.01, a, Exec::Serial);
  kernels::solve_velocity_columns(g, 0.01, b, Exec::Parallel);
  CHECK(a.values() == b.values());

  Spectrum T1 = random_spectrum(g, g.nz, 7), r1 = random_spectrum(g, 1, 8);
  Spectrum T2 = T1, r2 = r1;
  kernels::solve_heat_columns(g, 0.01, T1, r1, Exec::Serial);
  kernels::solve_heat_columns(g, 0.01, T2, r2, Exec::Parallel);
  CHECK(T1.values() == T2.values());
  CHECK(r1.values() == r2.values());
}
