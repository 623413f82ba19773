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

#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace pebm {

/// One row of an energy trace.
///
/// The first block holds quantities of the state at time `t`. The `step_*`
/// block covers the step (t - dt, t] and is evaluated at the point where the
/// scheme treats diffusion implicitly (the new state for IMEX Euler, the
/// midpoint average for CNAB2), paired with the explicit terms the scheme
/// actually used. With these, the discrete energy balance reads
///
///   E(t) - E(t - dt) + 2 step_dissipation - 2 step_work
///       = -2 step_advection - step_numerical
///
/// where E = ||v||^2 + ||T||^2 + ||rho||^2.
struct StepRecord {
  double t = 0.0;
  double norm_v_sq = 0.0;
  double norm_T_sq = 0.0;
  double norm_rho_sq = 0.0;
  double grad_v_sq = 0.0;
  double grad_T_sq = 0.0;
  double grad_rho_sq = 0.0;
  double rho_l5_pow5 = 0.0;
  double work_v = 0.0;    // (f1 + grad_H theta, v)
  double work_T = 0.0;    // (f2, T)
  double work_rho = 0.0;  // (f3 + Q beta(rho), rho)
  double forcing_sq = 0.0;  // ||f1||^2 + ||f2||^2 + ||f3||^2 at t
  double step_dissipation = 0.0;
  double step_work = 0.0;
  double step_advection = 0.0;
  double step_numerical = 0.0;

  double energy() const { return norm_v_sq + norm_T_sq + norm_rho_sq; }
  /// Weighted energy 2||v||^2 + ||T||^2 + 2||rho||^2 of the Gronwall bound.
  double gronwall_y() const { return 2.0 * norm_v_sq + norm_T_sq + 2.0 * norm_rho_sq; }
  double dissipation_rate() const { return grad_v_sq + grad_T_sq + grad_rho_sq + rho_l5_pow5; }
  double work_rate() const { return work_v + work_T + work_rho; }
};

inline constexpr std::array<std::string_view, 17> kEnergyTraceColumns = {
    "t",          "norm_v_sq",        "norm_T_sq", "norm_rho_sq",    "grad_v_sq",
    "grad_T_sq",  "grad_rho_sq",      "rho_l5_pow5", "work_v",       "work_T",
    "work_rho",   "forcing_sq",       "step_dissipation", "step_work", "step_advection",
    "step_numerical", "energy"};

struct EnergyTrace {
  std::vector<StepRecord> rows;

  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
  const StepRecord& operator[](std::size_t i) const { return rows[i]; }
};

}  // namespace pebm
