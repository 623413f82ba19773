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

#include <random>

#include "doctest.h"
#include "pebm/error.hpp"
#include "pebm/grid.hpp"
#include "pebm/norms.hpp"
#include "support.hpp"

using namespace pebm;
using pebm::test::kPi;

TEST_CASE("make_grid spacings") {
  const Grid g = make_grid(8, 8, 4, 0.01);
  CHECK(g.dx == 0.125);
  CHECK(g.dz == 0.25);
  CHECK(g.dx * g.nx == 1.0);
  CHECK(g.dy * g.ny == 1.0);
  CHECK(g.dz * g.nz == 1.0);
  REQUIRE(g.z_levels.size() == 4);
  CHECK(g.z_levels[0] == 0.125);
  CHECK(g.z_levels[3] == 0.875);
}

TEST_CASE("smallest legal grid") {
  const Grid g = make_grid(4, 4, 3, 0.1);
  CHECK(g.nx == 4);
  CHECK(g.nz == 3);
  CHECK(g.dz * 3 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("make_grid rejects bad shapes and lists every violation") {
  CHECK_THROWS_AS(make_grid(7, 8, 4, 0.01), ConfigError);
  CHECK_THROWS_AS(make_grid(2, 8, 4, 0.01), ConfigError);
  CHECK_THROWS_AS(make_grid(8, 8, 2, 0.01), ConfigError);
  CHECK_THROWS_AS(make_grid(8, 8, 4, 0.0), ConfigError);
  CHECK_THROWS_AS(make_grid(8, 8, 4, -1.0), ConfigError);
  try {
    make_grid(7, 5, 2, -1.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() == 4);
  }
}

TEST_CASE("fft of cos(2 pi x) has one mode pair") {
  const Grid g = make_grid(8, 6, 3, 0.01);
  const Field f = test::sample(g, 1, [](double x, double, double) { return std::cos(2 * kPi * x); });
  const Spectrum s = fft_h(g, f);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nyh(); ++j) {
      const double expect = (j == 0 && (i == 1 || i == g.nx - 1)) ? 0.5 : 0.0;
      CHECK(std::abs(s(i, j) - Complex(expect, 0.0)) < 1e-14);
    }
}

TEST_CASE("fft of a constant is the (0,0) mode") {
  const Grid g = make_grid(8, 8, 4, 0.01);
  const Field f = Field::volume(g, 1.0);
  const Spectrum s = fft_h(g, f);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.nyh(); ++j) {
        const double expect = (i == 0 && j == 0) ? 1.0 : 0.0;
        CHECK(std::abs(s(i, j, k) - Complex(expect, 0.0)) < 1e-15);
      }
}

TEST_CASE("fft round trip on random fields") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int shapes[][3] = {{4, 4, 3}, {8, 6, 5}, {16, 16, 8}, {32, 12, 3}, {6, 32, 4}};
  for (const auto& sh : shapes) {
    const Grid g = make_grid(sh[0], sh[1], sh[2], 0.01);
    for (int levels : {1, g.nz, g.nz + 1}) {
      Field f(g.nx, g.ny, levels);
      for (std::size_t n = 0; n < f.size(); ++n) f[n] = u(rng);
      const Field back = ifft_h(g, fft_h(g, f));
      CHECK(test::max_diff(back, f) < 1e-13 * max_abs(f));
    }
  }
}

TEST_CASE("fft rejects fields of the wrong shape") {
  const Grid g = make_grid(8, 8, 4, 0.01);
  const Field wrong(6, 8, 4);
  CHECK_THROWS_AS(fft_h(g, wrong), ShapeError);
  Spectrum bad(6, 5, 1);
  CHECK_THROWS_AS(ifft_h(g, bad), ShapeError);
}

TEST_CASE("spectral derivative of cos(2 pi x)") {
  const Grid g = make_grid(16, 8, 3, 0.01);
  const Field f = test::sample(g, g.nz, [](double x, double, double) { return std::cos(2 * kPi * x); });
  const Field d = ddx(g, f);
  const Field expect = test::sample(g, g.nz, [](double x, double, double) { return -2 * kPi * std::sin(2 * kPi * x); });
  CHECK(test::max_diff(d, expect) < 1e-12);
  const Field fy = test::sample(g, 1, [](double, double y, double) { return std::sin(4 * kPi * y); });
  const Field dy = ddy(g, fy);
  const Field ey = test::sample(g, 1, [](double, double y, double) { return 4 * kPi * std::cos(4 * kPi * y); });
  CHECK(test::max_diff(dy, ey) < 1e-12);
}

TEST_CASE("dealiasing keeps low modes and removes the top third") {
  const Grid g = make_grid(12, 12, 3, 0.01);
  const Field low = test::sample(g, 1, [](double x, double y, double) { return std::cos(2 * kPi * (4 * x + 3 * y)); });
  CHECK(test::max_diff(dealiased(g, low), low) < 1e-14);
  const Field high = test::sample(g, 1, [](double x, double, double) { return std::cos(2 * kPi * 5 * x); });
  CHECK(max_abs(dealiased(g, high)) < 1e-14);
}

TEST_CASE("serial and parallel transforms agree bitwise") {
  const Grid g = make_grid(16, 16, 8, 0.01);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  Field f = Field::volume(g);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = n01(rng);
  const Spectrum a = fft_h(g, f, Exec::Serial);
  const Spectrum b = fft_h(g, f, Exec::Parallel);
  CHECK(a.values() == b.values());
  CHECK(ifft_h(g, a, Exec::Serial).values() == ifft_h(g, b, Exec::Parallel).values());
}
