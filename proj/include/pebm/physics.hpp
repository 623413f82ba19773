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

/// @file physics.hpp
/// @brief Surface energy balance: co-albedo, radiative reaction term, solar
/// field and time-periodic external forcing.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pebm/fields.hpp"

namespace pebm {

/// Solar field Q(x, y) = q0 (1 + q1 cos(2 pi y)).
struct SolarSpec {
  double q0 = 0.0;
  double q1 = 0.0;
};

struct PhysicsParams {
  double beta1 = 0.3;
  double beta2 = 0.7;
  double rho_ref = 263.0;
  SolarSpec solar;
  Field Q;  // sampled solar field, single level

  double q_max() const;
};

/// Builds params with Q sampled on the grid; throws ConfigError listing every
/// violated constraint (0 < beta1 < beta2, Q > 0 unless identically zero).
PhysicsParams make_physics(const Grid& g, double beta1, double beta2, double rho_ref, SolarSpec solar);

/// beta(rho) = beta1 + (beta2 - beta1) (1 + tanh(rho - rho_ref)) / 2
double coalbedo(double rho, const PhysicsParams& p);
double coalbedo_derivative(double rho, const PhysicsParams& p);

/// R(x, rho) = Q(x) beta(rho) - |rho|^3 rho, pointwise.
Field reaction(const Grid& g, const Field& rho, const PhysicsParams& p);
/// Q(x) beta(rho) only (the absorbed part).
Field absorbed_radiation(const Grid& g, const Field& rho, const PhysicsParams& p);
/// |rho|^3 rho only (the outgoing part).
Field outgoing_radiation(const Field& rho);

// ---------------------------------------------------------------------------
// Forcing

enum class Wave { Cos, Sin };

/// One separable term
///   amplitude * w_t(2 pi n t / T*) * w_h(2 pi (kx x + ky y)) * cos(pi kz z)
/// where w_t, w_h are cos or sin. n = 0 with w_t = cos is a constant term.
struct ForcingMode {
  int component = 0;  // 0 = x, 1 = y (f1 only)
  double amplitude = 0.0;
  Wave time_wave = Wave::Cos;
  int n = 0;
  Wave space_wave = Wave::Cos;
  int kx = 0;
  int ky = 0;
  int kz = 0;  // vertical cosine index (f1, f2 only)

  bool operator==(const ForcingMode&) const = default;
};

/// f1, f2, f3 as finite trigonometric sums with exact period T*.
struct Forcing {
  double period = 1.0;
  std::vector<ForcingMode> f1;
  std::vector<ForcingMode> f2;
  std::vector<ForcingMode> f3;

  bool empty() const { return f1.empty() && f2.empty() && f3.empty(); }
  bool time_independent() const;
  /// Multiplies every amplitude by `a`.
  Forcing scaled(double a) const;
};

struct ForcingFields {
  VectorField f1;
  Field f2;
  Field f3;

  static ForcingFields zero(const Grid& g) {
    return {VectorField::volume(g), Field::volume(g), Field::surface(g)};
  }
};

/// Anything that can be evaluated at time t. The stepper only sees this
/// interface, so analytic sources (manufactured solutions) plug in as well.
class ForcingSource {
 public:
  virtual ~ForcingSource() = default;
  virtual void evaluate(const Grid& g, double t, ForcingFields& out) const = 0;
  virtual bool is_zero() const { return false; }
};

/// Mode-sum forcing. Time enters through fmod(t, T*), so eval(t + T*) is
/// bitwise equal to eval(t) whenever both times are exact.
class ModeForcing final : public ForcingSource {
 public:
  explicit ModeForcing(Forcing f);
  void evaluate(const Grid& g, double t, ForcingFields& out) const override;
  bool is_zero() const override { return forcing_.empty(); }
  const Forcing& forcing() const { return forcing_; }

 private:
  Forcing forcing_;
};

/// Source given by a callback; used by tests and manufactured solutions.
class FunctionForcing final : public ForcingSource {
 public:
  using Fn = std::function<void(const Grid&, double, ForcingFields&)>;
  explicit FunctionForcing(Fn fn) : fn_(std::move(fn)) {}
  void evaluate(const Grid& g, double t, ForcingFields& out) const override { fn_(g, t, out); }

 private:
  Fn fn_;
};

ForcingFields eval_forcing(const Grid& g, const Forcing& f, double t);

/// Validates a forcing description, appending messages to `errors`.
void validate_forcing(const Forcing& f, std::vector<std::string>& errors);

}  // namespace pebm
