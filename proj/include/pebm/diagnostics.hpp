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

/// @file diagnostics.hpp
/// @brief Checks of the energy inequality, the Gronwall envelope and the
/// weak-strong difference estimate on computed trajectories.

#pragma once

#include <cstddef>
#include <vector>

#include "pebm/stepper.hpp"

namespace pebm {

// ---------------------------------------------------------------------------
// Energy inequality
//
//   E(t) + 2 int_s^t (||grad v||^2 + ||grad T||^2 + ||grad_H rho||^2 + ||rho||_5^5)
//        <= E(s) + 2 int_s^t [(f1 + grad_H theta, v) + (f2, T) + (f3 + Q beta(rho), rho)]
//
// with E = ||v||^2 + ||T||^2 + ||rho||^2. The residual is LHS - RHS; the
// inequality holds when it is <= 0 up to discretisation error.

enum class Quadrature {
  /// Sums the step_* columns, i.e. the time integrals exactly as the scheme
  /// realised them. Needs a RecordLevel::Full trace.
  Scheme,
  /// Trapezoid rule on the state-level rate columns.
  Trapezoid
};

/// Residual on [s, t]; both times must coincide with trace rows.
double energy_inequality_residual(const EnergyTrace& trace, double s, double t,
                                  Quadrature q = Quadrature::Scheme);

/// Residual of each step (row n-1 to row n); entry 0 corresponds to row 1.
std::vector<double> step_residuals(const EnergyTrace& trace, Quadrature q = Quadrature::Scheme);

struct WorstInterval {
  double residual = 0.0;  // max over all [s, t] of the residual (0 for the empty interval)
  double s = 0.0;
  double t = 0.0;
};

/// Largest residual over every subinterval [t_i, t_j] of the trace
/// (maximum subarray of the additive per-step residuals).
WorstInterval worst_energy_residual(const EnergyTrace& trace, Quadrature q = Quadrature::Scheme);

// ---------------------------------------------------------------------------
// Gronwall envelope  y(t) <= e^{t - t0} (y(t0) + int_{t0}^t Phi)

/// Pointwise bound of the radiation work: 2 (Q beta(rho) rho - |rho|^5)
/// <= max_r 2 (a r - r^5) = (8/5) a (a/5)^{1/4}, a = Qmax beta2.
double gronwall_c_sq(const PhysicsParams& p);

/// Phi = C^2 + ||f1||^2 + ||f2||^2 + ||f3||^2 along the trace rows.
std::vector<double> phi_series(const EnergyTrace& trace, const PhysicsParams& p);

struct EnvelopeCheck {
  double max_violation = 0.0;  // max_t y(t) - envelope(t); <= 0 certifies the bound
  double max_relative = 0.0;   // same, divided by the envelope
  double t_worst = 0.0;
};

EnvelopeCheck gronwall_envelope_check(const EnergyTrace& trace, const std::vector<double>& phi);

// ---------------------------------------------------------------------------
// Weak-strong differences

struct DifferenceRow {
  double t = 0.0;
  double sigma_v_sq = 0.0;
  double sigma_T_sq = 0.0;
  double sigma_rho_sq = 0.0;
  double dissipation = 0.0;  // ||grad s_v||^2 + ||grad s_T||^2 + ||grad_H s_rho||^2
  double g = 0.0;            // Gronwall weight of the second (strong) run
  double int_g = 0.0;        // int_{t0}^t g

  double sigma_sq() const { return sigma_v_sq + sigma_T_sq + sigma_rho_sq; }
};

struct DifferenceTrace {
  std::vector<DifferenceRow> rows;
};

/// States sampled every `stride` steps plus the Gronwall weight at every step.
struct Trajectory {
  std::vector<State> samples;
  std::vector<std::size_t> sample_step;  // index into weight_t / weight
  std::vector<double> weight_t;
  std::vector<double> weight;
};

/// g = 1 + ||v||_{H1}^4 + ||T||_{H1}^4 + ||rho||_{H1}^4.
double gronwall_weight(const Grid& g, const State& s);

Trajectory record_trajectory(const Grid& g, const State& x0, const ForcingSource& forcing,
                             const PhysicsParams& p, const StepperConfig& cfg, double t_end,
                             std::size_t stride);

struct ContractionReport {
  DifferenceTrace trace;
  bool identical = false;     // sigma == 0 bitwise at every sample
  double max_sigma = 0.0;     // max_t ||sigma(t)||
  double c_fit = 0.0;         // smallest C with log sigma^2(t) - log sigma^2(t0) <= C int g
  bool certified = false;     // identical, or a finite c_fit exists
};

/// Differences of two trajectories sampled on the same times; `b` is the
/// strong solution that supplies the weight g.
ContractionReport weak_strong_contraction(const Grid& g, const Trajectory& a, const Trajectory& b);

/// Runs both initial states concurrently and compares them.
ContractionReport run_weak_strong(const Grid& g, const State& x1, const State& x2, const ForcingSource& forcing,
                                  const PhysicsParams& p, const StepperConfig& cfg, double t_end,
                                  std::size_t stride);

// ---------------------------------------------------------------------------

struct ReactionBound {
  double lhs = 0.0;  // |int R(rho1) rho2 + R(rho2) rho1|
  double rhs = 0.0;  // Qmax beta2 (||rho1||_1 + ||rho2||_1) + ||rho1||_5^5 + ||rho2||_5^5
};

ReactionBound reaction_work_bound(const Grid& g, const Field& rho1, const Field& rho2, const PhysicsParams& p);

}  // namespace pebm
