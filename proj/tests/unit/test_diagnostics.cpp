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


#include <cmath>
#include <random>

#include "doctest.h"
#include "pebm/diagnostics.hpp"
#include "pebm/error.hpp"
#include "pebm/initial.hpp"
#include "pebm/norms.hpp"
#include "support.hpp"

using namespace pebm;

namespace {

const ModeForcing kNoForcing{Forcing{}};

Forcing smooth_forcing(double period, double amp) {
  Forcing f;
  f.period = period;
  f.f1.push_back({1, amp, Wave::Cos, 1, Wave::Cos, 1, 0, 1});
  f.f2.push_back({0, amp, Wave::Sin, 1, Wave::Cos, 1, 1, 0});
  f.f3.push_back({0, amp, Wave::Cos, 2, Wave::Sin, 0, 1, 0});
  return f;
}

// Rows whose step residuals are exactly `r` (energy carries them).
EnergyTrace synthetic_trace(const std::vector<double>& r) {
  EnergyTrace tr;
  StepRecord row;
  row.norm_T_sq = 10.0;
  tr.rows.push_back(row);
  for (std::size_t n = 0; n < r.size(); ++n) {
    StepRecord next;
    next.t = static_cast<double>(n + 1);
    next.step_dissipation = 0.25;
    next.step_work = 0.125;
    // E_n - E_{n-1} + 2 (0.25 - 0.125) = r_n
    next.norm_T_sq = tr.rows.back().norm_T_sq + r[n] - 0.25;
    tr.rows.push_back(next);
  }
  return tr;
}

}  // namespace

TEST_CASE("energy residual sums scheme step terms") {
  const std::vector<double> r = {-1.0, 0.5, 0.25, -0.125, 1.0};
  const EnergyTrace tr = synthetic_trace(r);
  const auto steps = step_residuals(tr);
  REQUIRE(steps.size() == r.size());
  for (std::size_t n = 0; n < r.size(); ++n) CHECK(steps[n] == doctest::Approx(r[n]).epsilon(1e-14));
  CHECK(energy_inequality_residual(tr, 1.0, 4.0) == doctest::Approx(0.625));
  CHECK(energy_inequality_residual(tr, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(energy_inequality_residual(tr, 0.5, 2.0), ConfigError);
  CHECK_THROWS_AS(energy_inequality_residual(tr, 3.0, 1.0), ConfigError);
}

TEST_CASE("worst subinterval matches brute force") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> r(40);
    for (double& x : r) x = normal(rng) - 0.2;
    const EnergyTrace tr = synthetic_trace(r);
    double best = 0.0;
    for (std::size_t i = 0; i <= r.size(); ++i)
      for (std::size_t j = i + 1; j <= r.size(); ++j)
        best = std::max(best, energy_inequality_residual(tr, tr[i].t, tr[j].t));
    const WorstInterval w = worst_energy_residual(tr);
    CHECK(w.residual == doctest::Approx(best).epsilon(1e-12));
    if (w.residual > 0.0) CHECK(energy_inequality_residual(tr, w.s, w.t) == doctest::Approx(w.residual));
  }
}

TEST_CASE("all-negative residuals give the empty interval") {
  const WorstInterval w = worst_energy_residual(synthetic_trace({-1.0, -2.0, -0.5}));
  CHECK(w.residual == 0.0);
}

TEST_CASE("energy inequality holds on a forced cnab2 run") {
  const Grid g = make_grid(16, 16, 8, 1e-3);
  const PhysicsParams p = make_physics(g, 0.3, 0.7, 0.0, {1.0, 0.2});
  const ModeForcing forcing(smooth_forcing(0.5, 1.0));
  StepperConfig cfg;
  cfg.dt = 1e-3;
  const State x0 = random_state(g, {.seed = 7, .amplitude = 0.5, .max_mode = 1, .max_vertical = 1});
  const auto r = simulate(g, x0, forcing, p, cfg, 0.2, RecordLevel::Full);
  const double e0 = r.trace[0].energy();
  CHECK(worst_energy_residual(r.trace).residual <= 1e-6 * e0);
  // Identity check: residual plus advection and numerical terms closes.
  for (std::size_t n = 1; n < r.trace.size(); ++n) {
    const StepRecord& b = r.trace[n];
    const double closure = step_residuals(r.trace)[n - 1] + 2.0 * b.step_advection + b.step_numerical;
    CHECK(std::abs(closure) < 1e-12 * e0);
  }
}

TEST_CASE("euler free decay never violates the inequality") {
  const Grid g = make_grid(16, 16, 8, 4e-3);
  const PhysicsParams p = test::no_sun(g);
  StepperConfig cfg;
  cfg.scheme = Scheme::ImexEuler;
  cfg.dt = 4e-3;
  const auto r = simulate(g, random_state(g, {.seed = 2, .amplitude = 1.0}), kNoForcing, p, cfg, 0.4,
                          RecordLevel::Full);
  CHECK(worst_energy_residual(r.trace).residual <= 1e-10 * r.trace[0].energy());
}

TEST_CASE("random states are in the range of the projection") {
  const Grid g = make_grid(16, 16, 8, 1e-3);
  const State s = random_state(g, {.seed = 5, .amplitude = 0.5});
  const VectorField pv = project_barotropic(g, s.v);
  CHECK(test::max_diff(pv.x, s.v.x) < 1e-13);
  CHECK(test::max_diff(pv.y, s.v.y) < 1e-13);
  CHECK(std::sqrt(0.5 * l2_sq(g, s.v)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gronwall constant is the maximum of the radiation work") {
  const Grid g = make_grid(8, 8, 4, 1e-3);
  for (double q0 : {0.5, 2.0, 30.0}) {
    const PhysicsParams p = make_physics(g, 0.3, 0.7, 0.0, {q0, 0.25});
    const double a = p.q_max() * p.beta2;
    double best = 0.0;
    for (int n = 0; n <= 200000; ++n) {
      const double r = 4.0 * n / 200000.0;
      best = std::max(best, 2.0 * (a * r - std::pow(r, 5)));
    }
    CHECK(gronwall_c_sq(p) == doctest::Approx(best).epsilon(1e-8));
  }
  CHECK(gronwall_c_sq(test::no_sun(g)) == 0.0);
}

TEST_CASE("envelope check on a saturated exponential") {
  EnergyTrace tr;
  for (int n = 0; n <= 100; ++n) {
    StepRecord row;
    row.t = 0.01 * n;
    row.norm_T_sq = std::exp(row.t);  // y' = y with Phi = 0
    tr.rows.push_back(row);
  }
  const std::vector<double> phi(tr.size(), 0.0);
  const EnvelopeCheck c = gronwall_envelope_check(tr, phi);
  CHECK(std::abs(c.max_relative) < 1e-14);
  tr.rows[50].norm_T_sq *= 1.01;
  const EnvelopeCheck bad = gronwall_envelope_check(tr, phi);
  CHECK(bad.max_relative == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(bad.t_worst == doctest::Approx(0.5));
}

TEST_CASE("gronwall envelope bounds a forced run") {
  const Grid g = make_grid(16, 16, 8, 1e-3);
  const PhysicsParams p = make_physics(g, 0.3, 0.7, 0.5, {5.0, 0.2});
  const ModeForcing forcing(smooth_forcing(0.5, 10.0));
  StepperConfig cfg;
  cfg.dt = 1e-3;
  const auto r = simulate(g, random_state(g, {.seed = 4}), forcing, p, cfg, 0.5, RecordLevel::Norms);
  const EnvelopeCheck c = gronwall_envelope_check(r.trace, phi_series(r.trace, p));
  CHECK(c.max_relative <= 1e-9);
}

TEST_CASE("weak-strong: identical data give a bitwise zero difference") {
  const Grid g = make_grid(8, 8, 4, 1e-3);
  const PhysicsParams p = make_physics(g, 0.3, 0.7, 0.0, {2.0, 0.1});
  const ModeForcing forcing(smooth_forcing(0.1, 1.0));
  StepperConfig cfg;
  cfg.dt = 1e-3;
  const State x = random_state(g, {.seed = 9});
  const ContractionReport rep = run_weak_strong(g, x, x, forcing, p, cfg, 0.1, 10);
  CHECK(rep.identical);
  CHECK(rep.certified);
  CHECK(rep.max_sigma == 0.0);
  CHECK(rep.c_fit == 0.0);
  REQUIRE(rep.trace.rows.size() == 11);
  for (const DifferenceRow& row : rep.trace.rows) CHECK(row.sigma_sq() == 0.0);
}

TEST_CASE("weak-strong: a small perturbation yields a finite fitted constant") {
  const Grid g = make_grid(8, 8, 4, 1e-3);
  const PhysicsParams p = make_physics(g, 0.3, 0.7, 0.0, {2.0, 0.1});
  const ModeForcing forcing(smooth_forcing(0.1, 1.0));
  StepperConfig cfg;
  cfg.dt = 1e-3;
  const State x = random_state(g, {.seed = 9});
  State y = x;
  perturb_mode(g, y, 2, 1, 0, 1e-6);
  const ContractionReport rep = run_weak_strong(g, y, x, forcing, p, cfg, 0.2, 10);
  CHECK_FALSE(rep.identical);
  CHECK(rep.certified);
  CHECK(std::isfinite(rep.c_fit));
  CHECK(rep.c_fit >= 0.0);
  const auto& rows = rep.trace.rows;
  const double log0 = std::log(rows.front().sigma_sq());
  for (const DifferenceRow& row : rows) {
    CHECK(row.g >= 1.0);
    CHECK(std::log(row.sigma_sq()) - log0 <= rep.c_fit * row.int_g + 1e-12);
  }
  CHECK(rows.back().int_g > rows[1].int_g);
}

TEST_CASE("weak-strong rejects trajectories on different samples") {
  const Grid g = make_grid(8, 8, 4, 1e-3);
  const PhysicsParams p = test::no_sun(g);
  StepperConfig cfg;
  cfg.dt = 1e-3;
  const State x = random_state(g, {.seed = 1});
  const Trajectory a = record_trajectory(g, x, kNoForcing, p, cfg, 0.02, 5);
  const Trajectory b = record_trajectory(g, x, kNoForcing, p, cfg, 0.02, 10);
  CHECK_THROWS_AS(weak_strong_contraction(g, a, b), ConfigError);
}

TEST_CASE("gronwall weight is one at the zero state") {
  const Grid g = make_grid(8, 8, 4, 1e-3);
  CHECK(gronwall_weight(g, State::zero(g)) == 1.0);
  CHECK(gronwall_weight(g, random_state(g, {.seed = 3})) > 1.0);
}

TEST_CASE("reaction work bound") {
  const Grid g = make_grid(16, 16, 4, 1e-3);
  const PhysicsParams p = make_physics(g, 0.3, 0.7, 0.0, {3.0, 0.3});
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    Field a = Field::surface(g), b = Field::surface(g);
    const double sa = std::exp(2.0 * normal(rng)), sb = std::exp(2.0 * normal(rng));
    for (std::size_t n = 0; n < a.size(); ++n) {
      a[n] = sa * normal(rng);
      b[n] = sb * normal(rng);
    }
    const ReactionBound rb = reaction_work_bound(g, a, b, p);
    CHECK(rb.lhs <= rb.rhs);
  }
  // rho2 = 0 with a small rho1: the absorbed part of R(0) rho1 dominates.
  Field small = Field::surface(g);
  for (std::size_t n = 0; n < small.size(); ++n) small[n] = 1e-3;
  const ReactionBound rb = reaction_work_bound(g, small, Field::surface(g), p);
  CHECK(rb.lhs > 0.0);
  CHECK(rb.lhs <= rb.rhs);
}

TEST_CASE("reaction work bound at unit fields") {
  const Grid g = make_grid(8, 8, 4, 1e-3);
  const PhysicsParams p = make_physics(g, 0.3, 0.7, 0.0, {1.0, 0.0});
  Field one = Field::surface(g);
  for (std::size_t n = 0; n < one.size(); ++n) one[n] = 1.0;
  const ReactionBound rb = reaction_work_bound(g, one, one, p);
  CHECK(rb.lhs == doctest::Approx(2.0 * std::abs(coalbedo(1.0, p) - 1.0)).epsilon(1e-14));
  CHECK(rb.lhs <= rb.rhs);
  const ReactionBound zero = reaction_work_bound(g, Field::surface(g), Field::surface(g), p);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
}
