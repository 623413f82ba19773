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

/// @file stepper.hpp
/// @brief IMEX time stepping of the coupled primitive equations / surface
/// energy balance system.
///
/// Diffusion, including the flux coupling between the top temperature cell
/// and rho, is implicit and solved per horizontal mode. Advection, the
/// hydrostatic term grad_H theta, radiation and forcing are explicit. The
/// barotropic projection closes each step.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "pebm/physics.hpp"
#include "pebm/trace.hpp"

namespace pebm {

enum class Scheme { ImexEuler, ImexCnab2 };

std::string to_string(Scheme s);
/// Accepts "imex-euler" and "imex-cnab2".
Scheme parse_scheme(const std::string& s);

struct StepperConfig {
  Scheme scheme = Scheme::ImexCnab2;
  double dt = 1e-3;
  bool dealias = true;
  double blowup_threshold = 1e6;
  Exec exec = Exec::Parallel;
  // Term switches. Turning advection and reaction off gives the linear system.
  bool advection = true;
  bool reaction = true;
  bool hydrostatic = true;
};

/// grad_H theta with theta = vertical_integral(T).
VectorField hydrostatic_tendency(const Grid& g, const Field& T, Exec exec = Exec::Parallel);

/// max |1.5 T_{nz-1} - 0.5 T_{nz-2} - rho|: the linearly extrapolated trace
/// of the interior temperature against the surface unknown.
double trace_mismatch(const Grid& g, const State& s);

/// max |div_H vbar|.
double barotropic_divergence(const Grid& g, const VectorField& v, Exec exec = Exec::Parallel);

enum class RecordLevel {
  None,   // nothing is computed beyond the step itself
  Norms,  // L2 norms and forcing norm
  Full    // every column of StepRecord
};

class Stepper {
 public:
  Stepper(const Grid& g, const ForcingSource& forcing, const PhysicsParams& params, StepperConfig cfg);

  /// Advances `s` from s.t to `t_next` (which must equal s.t + dt up to
  /// rounding; passing it explicitly keeps long runs free of accumulated
  /// time drift). Fills `record` when it is non-null.
  void step(State& s, double t_next, RecordLevel level = RecordLevel::None, StepRecord* record = nullptr);
  void step(State& s) { step(s, s.t + cfg_.dt); }

  /// Drops the stored explicit tendency, so the next CNAB2 step starts with
  /// an Euler step again.
  void reset_history() { have_history_ = false; }

  /// State-level part of a StepRecord (no step_* entries).
  StepRecord observe(const State& s, RecordLevel level) const;

  /// P(L X + N(X) + F(t)): the right-hand side of the semi-discrete system.
  /// Its norm is the residual of the steady equations.
  State tendency(const State& s) const;

  /// Surface pressure of the last step (zero mean).
  const Field& surface_pressure() const { return p_s_; }

  const Grid& grid() const { return g_; }
  const StepperConfig& config() const { return cfg_; }

 private:
  struct Explicit {
    VectorField adv_v, hydro;
    Field adv_T, adv_rho, absorbed, outgoing;
  };

  void explicit_terms(const State& s, Explicit& e) const;

  const Grid& g_;
  const ForcingSource& forcing_;
  const PhysicsParams& params_;
  StepperConfig cfg_;

  Explicit now_, prev_;
  bool have_history_ = false;
  ForcingFields f_;
  Field p_s_;
};

using Observer = std::function<void(const State&, const StepRecord&)>;

struct SimulationResult {
  State state;
  EnergyTrace trace;
  std::size_t steps = 0;
};

/// Throws NumericalError when any component has a non-finite or
/// above-threshold L2 norm.
void check_state_health(const Grid& g, const State& s, double threshold);

/// Number of steps covering `span`; throws ConfigError unless span / dt is
/// an integer to within 1e-9 relative.
std::size_t steps_for(double span, double dt);

/// Integrates from state0.t to t_end. Step n ends at t0 + n dt exactly. The
/// trace holds the initial state plus one row per step when `level` is not
/// None. Throws NumericalError on blow-up, NaN or a violated step guard.
SimulationResult simulate(const Grid& g, const State& state0, const ForcingSource& forcing,
                          const PhysicsParams& params, const StepperConfig& cfg, double t_end,
                          RecordLevel level = RecordLevel::Norms,
                          std::span<const Observer> observers = {});

}  // namespace pebm
