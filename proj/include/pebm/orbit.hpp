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

/// @file orbit.hpp
/// @brief Period map S: X(t0) -> X(t0 + T*), its fixed points (time-periodic
/// solutions) and long-time steady states.

#pragma once

#include <string>
#include <vector>

#include "pebm/diagnostics.hpp"

namespace pebm {

enum class Acceleration { Picard, Anderson };

struct OrbitConfig {
  double period = 1.0;
  double tol = 1e-8;
  int max_iters = 100;
  Acceleration acceleration = Acceleration::Picard;
  int anderson_depth = 5;
  bool ball_monitor = true;  // compute the Gronwall ball and track iterates against it
};

enum class OrbitStatus { Converged, MaxIterations, BlowUp };
std::string to_string(OrbitStatus s);

struct OrbitResult {
  OrbitStatus status = OrbitStatus::MaxIterations;
  State state;                          // X* (last iterate if not converged)
  std::vector<double> residual_history; // ||S(X_k) - X_k||_{X0}
  std::vector<double> y_history;        // y(X_k) = 2||v||^2 + ||T||^2 + 2||rho||^2
  EnergyTrace energy_trace_final_period;
  double ball_radius = 0.0;
  bool started_in_ball = false;
  bool stayed_in_ball = true;           // every iterate after entering obeys y <= R^2
  int anderson_restarts = 0;            // accelerated steps rejected in favour of a Picard step
  std::string message;

  bool converged() const { return status == OrbitStatus::Converged; }
  double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Simulates from x.t to x.t + T*. Throws ConfigError unless T*/dt is an
/// integer; throws NumericalError on blow-up.
State period_map(const Grid& g, const State& x, const ForcingSource& forcing, const PhysicsParams& p,
                 const StepperConfig& cfg, double period);

/// Fixed-point iteration of the period map from `x0`, with the section
/// taken at x0.t. Numerical failures inside the map end the search with
/// status BlowUp rather than propagating. Under Anderson, an extrapolated
/// iterate whose map fails (recorded as an infinite residual) or whose
/// residual exceeds twice the best so far is discarded and the iteration
/// restarts from S of the best iterate.
OrbitResult find_periodic(const Grid& g, const State& x0, const ForcingSource& forcing, const PhysicsParams& p,
                          const StepperConfig& cfg, const OrbitConfig& ocfg);

struct GronwallBall {
  double radius = 0.0;      // R with R^2 = sup int Phi / (1 - exp(-lambda T*))
  double lambda = 0.0;      // smallest nonzero eigenvalue of the diffusion operators
  double phi_integral = 0.0;
  double c_sq = 0.0;
};

/// Smallest nonzero eigenvalue among -Delta_H, the Neumann vertical
/// operator and the coupled (T, rho) column operator of the mean mode.
double discrete_poincare_constant(const Grid& g);

/// Dissipative ball radius. The forcing integral over one period uses
/// `samples` equispaced points (periodic trapezoid rule).
GronwallBall gronwall_ball_radius(const Grid& g, const ForcingSource& forcing, const PhysicsParams& p,
                                  double period, int samples = 256);

struct FixedPointCertificate {
  double endpoint_distance = 0.0;    // ||S(S(X*)) - S(X*)||
  double max_sample_distance = 0.0; // max over sampled times of ||X(t + T*) - X(t)||
  int samples = 0;
};

/// Re-simulates two consecutive periods from X* and compares them at
/// `samples` equispaced times.
FixedPointCertificate certify_periodic(const Grid& g, const State& x_star, const ForcingSource& forcing,
                                       const PhysicsParams& p, const StepperConfig& cfg, double period,
                                       int samples = 10);

struct SteadyConfig {
  double tol = 1e-9;        // on ||X(t + interval) - X(t)|| / interval
  double interval = 0.1;    // check spacing, an integer multiple of dt
  double max_time = 100.0;
};

struct SteadyResult {
  State state;
  bool converged = false;
  double time = 0.0;                 // integrated time
  std::vector<double> rate_history;  // ||X(t + interval) - X(t)|| / interval
  double steady_residual = 0.0;      // ||P(L X + N(X) + F)||_{X0} at the returned state
  std::string message;
};

/// Long-time integration for time-independent forcing. Throws ConfigError
/// when the forcing is a ModeForcing with time dependence.
SteadyResult find_steady_state(const Grid& g, const State& x0, const ForcingSource& forcing, const PhysicsParams& p,
                               const StepperConfig& cfg, const SteadyConfig& scfg);

}  // namespace pebm
