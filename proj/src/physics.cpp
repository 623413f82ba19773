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

#include "pebm/physics.hpp"

#include <cmath>
#include <numbers>

#include "pebm/error.hpp"

namespace pebm {

double PhysicsParams::q_max() const {
  double m = 0.0;
  for (std::size_t n = 0; n < Q.size(); ++n) m = std::max(m, std::abs(Q[n]));
  return m;
}

PhysicsParams make_physics(const Grid& g, double beta1, double beta2, double rho_ref, SolarSpec solar) {
  std::vector<std::string> errors;
  if (!(beta1 > 0.0)) errors.push_back("beta1 must be > 0");
  if (!(beta1 < beta2)) errors.push_back("beta1 < beta2 required");
  if (!std::isfinite(rho_ref)) errors.push_back("rho_ref must be finite");
  if (solar.q0 < 0.0) errors.push_back("solar q0 must be >= 0");
  if (!(std::abs(solar.q1) < 1.0)) errors.push_back("solar |q1| < 1 required for a positive Q");
  if (!errors.empty()) throw ConfigError(errors);

  PhysicsParams p;
  p.beta1 = beta1;
  p.beta2 = beta2;
  p.rho_ref = rho_ref;
  p.solar = solar;
  p.Q = Field::surface(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      p.Q(i, j) = solar.q0 * (1.0 + solar.q1 * std::cos(2.0 * std::numbers::pi * g.y(j)));
  return p;
}

double coalbedo(double rho, const PhysicsParams& p) {
  // Midpoint form, so rho = rho_ref returns exactly (beta1 + beta2) / 2.
  return 0.5 * (p.beta1 + p.beta2) + 0.5 * (p.beta2 - p.beta1) * std::tanh(rho - p.rho_ref);
}

double coalbedo_derivative(double rho, const PhysicsParams& p) {
  const double th = std::tanh(rho - p.rho_ref);
  return 0.5 * (p.beta2 - p.beta1) * (1.0 - th * th);
}

Field absorbed_radiation(const Grid& g, const Field& rho, const PhysicsParams& p) {
  Field out = Field::surface(g);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = p.Q[n] * coalbedo(rho[n], p);
  return out;
}

Field outgoing_radiation(const Field& rho) {
  Field out = rho;
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double r = rho[n];
    out[n] = std::abs(r) * r * r * r;
  }
  return out;
}

Field reaction(const Grid& g, const Field& rho, const PhysicsParams& p) {
  if (rho.nx() != g.nx || rho.ny() != g.ny || rho.levels() != 1)
    throw ShapeError("reaction: expected a surface field");
  Field out = absorbed_radiation(g, rho, p);
  out -= outgoing_radiation(rho);
  return out;
}

// ---------------------------------------------------------------------------

bool Forcing::time_independent() const {
  for (const auto* list : {&f1, &f2, &f3})
    for (const auto& m : *list)
      if (m.n != 0 || m.time_wave != Wave::Cos) return false;
  return true;
}

Forcing Forcing::scaled(double a) const {
  Forcing out = *this;
  for (auto* list : {&out.f1, &out.f2, &out.f3})
    for (auto& m : *list) m.amplitude *= a;
  return out;
}

namespace {

double wave(Wave w, double phase) { return w == Wave::Cos ? std::cos(phase) : std::sin(phase); }

double time_factor(const ForcingMode& m, double t, double period) {
  // fmod is exact, so shifting t by a whole period gives the same remainder.
  const double r = std::fmod(t, period);
  return wave(m.time_wave, 2.0 * std::numbers::pi * m.n * (r / period));
}

void add_mode(const Grid& g, const ForcingMode& m, double tf, Field& f) {
  const double a = m.amplitude * tf;
  if (a == 0.0) return;
  const int levels = f.levels();
  for (int k = 0; k < levels; ++k) {
    const double zf = levels == 1 ? 1.0 : std::cos(std::numbers::pi * m.kz * g.z_levels[k]);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double phase = 2.0 * std::numbers::pi * (m.kx * g.x(i) + m.ky * g.y(j));
        f(i, j, k) += a * zf * wave(m.space_wave, phase);
      }
  }
}

}  // namespace

ModeForcing::ModeForcing(Forcing f) : forcing_(std::move(f)) {
  std::vector<std::string> errors;
  validate_forcing(forcing_, errors);
  if (!errors.empty()) throw ConfigError(errors);
}

void ModeForcing::evaluate(const Grid& g, double t, ForcingFields& out) const {
  if (out.f2.levels() != g.nz || out.f2.nx() != g.nx || out.f2.ny() != g.ny) out = ForcingFields::zero(g);
  out.f1.x.fill(0.0);
  out.f1.y.fill(0.0);
  out.f2.fill(0.0);
  out.f3.fill(0.0);
  const double T = forcing_.period;
  for (const auto& m : forcing_.f1) add_mode(g, m, time_factor(m, t, T), m.component == 0 ? out.f1.x : out.f1.y);
  for (const auto& m : forcing_.f2) add_mode(g, m, time_factor(m, t, T), out.f2);
  for (const auto& m : forcing_.f3) add_mode(g, m, time_factor(m, t, T), out.f3);
}

ForcingFields eval_forcing(const Grid& g, const Forcing& f, double t) {
  ForcingFields out = ForcingFields::zero(g);
  ModeForcing(f).evaluate(g, t, out);
  return out;
}

void validate_forcing(const Forcing& f, std::vector<std::string>& errors) {
  if (!(f.period > 0.0) || !std::isfinite(f.period)) errors.push_back("forcing period must be positive");
  auto check = [&](const std::vector<ForcingMode>& list, const char* name) {
    for (const auto& m : list) {
      if (m.n < 0) errors.push_back(std::string(name) + ": time harmonic n must be >= 0");
      if (m.kz < 0) errors.push_back(std::string(name) + ": vertical index kz must be >= 0");
      if (!std::isfinite(m.amplitude)) errors.push_back(std::string(name) + ": amplitude must be finite");
    }
  };
  check(f.f1, "f1");
  check(f.f2, "f2");
  check(f.f3, "f3");
  for (const auto& m : f.f1)
    if (m.component != 0 && m.component != 1) errors.push_back("f1: component must be x or y");
}

}  // namespace pebm
