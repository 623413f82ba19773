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

#include "pebm/stepper.hpp"

#include <cmath>

#include "pebm/error.hpp"
#include "pebm/kernels.hpp"
#include "pebm/norms.hpp"

namespace pebm {

std::string to_string(Scheme s) { return s == Scheme::ImexEuler ? "imex-euler" : "imex-cnab2"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "imex-euler") return Scheme::ImexEuler;
  if (s == "imex-cnab2") return Scheme::ImexCnab2;
  throw ConfigError("unknown scheme '" + s + "' (expected imex-euler or imex-cnab2)");
}

VectorField hydrostatic_tendency(const Grid& g, const Field& T, Exec exec) {
  return gradient_h(g, vertical_integral(g, T), exec);
}

double trace_mismatch(const Grid& g, const State& s) {
  const std::size_t plane = g.plane();
  const int top = g.nz - 1;
  double m = 0.0;
  for (std::size_t n = 0; n < plane; ++n) {
    const double trace = 1.5 * s.T[top * plane + n] - 0.5 * s.T[(top - 1) * plane + n];
    m = std::max(m, std::abs(trace - s.rho[n]));
  }
  return m;
}

double barotropic_divergence(const Grid& g, const VectorField& v, Exec exec) {
  return max_abs(divergence_h(g, vertical_average(g, v), exec));
}

namespace {

Field combine(double a, const Field& x, double b, const Field& y) {
  Field r = x;
  r *= a;
  r.axpy(b, y);
  return r;
}

void add_scaled(Spectrum& out, double a, const Spectrum& in) {
  auto& o = out.values();
  const auto& v = in.values();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] += a * v[n];
}

}  // namespace

Stepper::Stepper(const Grid& g, const ForcingSource& forcing, const PhysicsParams& params, StepperConfig cfg)
    : g_(g), forcing_(forcing), params_(params), cfg_(cfg), f_(ForcingFields::zero(g)), p_s_(Field::surface(g)) {
  std::vector<std::string> errors;
  if (!(cfg_.dt > 0.0) || !std::isfinite(cfg_.dt)) errors.push_back("stepper dt must be > 0");
  if (!(cfg_.blowup_threshold > 0.0)) errors.push_back("blow-up threshold must be > 0");
  if (params_.Q.nx() != g.nx || params_.Q.ny() != g.ny) errors.push_back("physics Q does not match the grid");
  if (!errors.empty()) throw ConfigError(errors);
}

void Stepper::explicit_terms(const State& s, Explicit& e) const {
  const Exec ex = cfg_.exec;
  if (cfg_.advection) {
    const Field w = compute_w(g_, s.v, ex);
    e.adv_v = advection_v(g_, s.v, w, cfg_.dealias, ex);
    e.adv_T = advection_T(g_, s.v, w, s.T, cfg_.dealias, ex);
    e.adv_rho = advection_rho(g_, vertical_average(g_, s.v), s.rho, cfg_.dealias, ex);
  } else {
    e.adv_v = VectorField::volume(g_);
    e.adv_T = Field::volume(g_);
    e.adv_rho = Field::surface(g_);
  }
  e.hydro = cfg_.hydrostatic ? hydrostatic_tendency(g_, s.T, ex) : VectorField::volume(g_);
  if (cfg_.reaction) {
    e.absorbed = absorbed_radiation(g_, s.rho, params_);
    e.outgoing = outgoing_radiation(s.rho);
  } else {
    e.absorbed = Field::surface(g_);
    e.outgoing = Field::surface(g_);
  }
}

void Stepper::step(State& s, double t_next, RecordLevel level, StepRecord* record) {
  const double dt = cfg_.dt;
  const Exec ex = cfg_.exec;
  if (cfg_.reaction) {
    const double m = max_abs(s.rho);
    if (dt * 4.0 * m * m * m >= 1.0)
      throw NumericalError(NumericalError::Kind::StepGuard,
                           "step-size guard violated: dt * 4 max|rho|^3 = " + std::to_string(dt * 4.0 * m * m * m) +
                               " >= 1",
                           s.t);
  }

  explicit_terms(s, now_);
  const bool cn = cfg_.scheme == Scheme::ImexCnab2 && have_history_;
  const double alpha = cn ? 0.5 * dt : dt;
  const double t_forcing = cn ? s.t + 0.5 * dt : s.t;

  Explicit ext;
  if (cn) {
    ext.adv_v = {combine(1.5, now_.adv_v.x, -0.5, prev_.adv_v.x), combine(1.5, now_.adv_v.y, -0.5, prev_.adv_v.y)};
    ext.hydro = {combine(1.5, now_.hydro.x, -0.5, prev_.hydro.x), combine(1.5, now_.hydro.y, -0.5, prev_.hydro.y)};
    ext.adv_T = combine(1.5, now_.adv_T, -0.5, prev_.adv_T);
    ext.adv_rho = combine(1.5, now_.adv_rho, -0.5, prev_.adv_rho);
    ext.absorbed = combine(1.5, now_.absorbed, -0.5, prev_.absorbed);
    ext.outgoing = combine(1.5, now_.outgoing, -0.5, prev_.outgoing);
  } else {
    ext = now_;
  }

  if (forcing_.is_zero()) {
    f_ = ForcingFields::zero(g_);
  } else {
    forcing_.evaluate(g_, t_forcing, f_);
  }

  // Explicit right-hand side N in physical space.
  Field nvx = combine(-1.0, ext.adv_v.x, 1.0, ext.hydro.x);
  nvx += f_.f1.x;
  Field nvy = combine(-1.0, ext.adv_v.y, 1.0, ext.hydro.y);
  nvy += f_.f1.y;
  Field nT = combine(-1.0, ext.adv_T, 1.0, f_.f2);
  Field nrho = combine(-1.0, ext.adv_rho, 1.0, ext.absorbed);
  nrho -= ext.outgoing;
  nrho += f_.f3;

  // rhs = X + (dt - alpha) L X + dt N, then (I - alpha L) X_new = rhs.
  Spectrum vx = fft_h(g_, s.v.x, ex);
  Spectrum vy = fft_h(g_, s.v.y, ex);
  Spectrum T = fft_h(g_, s.T, ex);
  Spectrum rho = fft_h(g_, s.rho, ex);
  if (dt - alpha != 0.0) {
    Spectrum tmp;
    kernels::apply_velocity_columns(g_, 1.0, dt - alpha, vx, tmp, ex);
    vx = tmp;
    kernels::apply_velocity_columns(g_, 1.0, dt - alpha, vy, tmp, ex);
    vy = tmp;
    Spectrum T2, rho2;
    kernels::apply_heat_columns(g_, 1.0, dt - alpha, T, rho, T2, rho2, ex);
    T = std::move(T2);
    rho = std::move(rho2);
  }
  add_scaled(vx, dt, fft_h(g_, nvx, ex));
  add_scaled(vy, dt, fft_h(g_, nvy, ex));
  add_scaled(T, dt, fft_h(g_, nT, ex));
  add_scaled(rho, dt, fft_h(g_, nrho, ex));

  kernels::solve_velocity_columns(g_, alpha, vx, ex);
  kernels::solve_velocity_columns(g_, alpha, vy, ex);
  kernels::solve_heat_columns(g_, alpha, T, rho, ex);

  State next;
  VectorField vstar{ifft_h(g_, vx, ex), ifft_h(g_, vy, ex)};
  Field q;
  next.v = project_barotropic(g_, vstar, &q, ex);
  next.T = ifft_h(g_, T, ex);
  next.rho = ifft_h(g_, rho, ex);
  next.t = t_next;
  q *= 1.0 / dt;
  p_s_ = std::move(q);

  if (cfg_.scheme == Scheme::ImexCnab2) {
    std::swap(prev_, now_);
    have_history_ = true;
  }

  if (record) {
    if (level == RecordLevel::Full) {
      // Point at which the implicit operator acted: new state (Euler) or the
      // midpoint (Crank-Nicolson).
      State hat = next;
      if (cn) {
        hat = scaled(next, 0.5);
        axpy(0.5, s, hat);
      }
      const double diss = grad_sq_v(g_, hat.v) + grad_sq_T(g_, hat.T, hat.rho) + grad_sq_rho(g_, hat.rho) +
                          inner(g_, ext.outgoing, hat.rho);
      VectorField fv = f_.f1;
      fv.x += ext.hydro.x;
      fv.y += ext.hydro.y;
      Field frho = f_.f3;
      frho += ext.absorbed;
      const double work = inner(g_, fv, hat.v) + inner(g_, f_.f2, hat.T) + inner(g_, frho, hat.rho);
      const double adv = inner(g_, ext.adv_v, hat.v) + inner(g_, ext.adv_T, hat.T) + inner(g_, ext.adv_rho, hat.rho);
      *record = observe(next, level);
      record->step_dissipation = dt * diss;
      record->step_work = dt * work;
      record->step_advection = dt * adv;
      if (!cn) {
        const double d = x0_distance(g_, next, s);
        record->step_numerical = d * d;
      }
    } else {
      *record = observe(next, level);
    }
  }
  s = std::move(next);
}

StepRecord Stepper::observe(const State& s, RecordLevel level) const {
  StepRecord r;
  r.t = s.t;
  if (level == RecordLevel::None) return r;
  r.norm_v_sq = l2_sq(g_, s.v);
  r.norm_T_sq = l2_sq(g_, s.T);
  r.norm_rho_sq = l2_sq(g_, s.rho);
  ForcingFields f = ForcingFields::zero(g_);
  if (!forcing_.is_zero()) forcing_.evaluate(g_, s.t, f);
  r.forcing_sq = l2_sq(g_, f.f1) + l2_sq(g_, f.f2) + l2_sq(g_, f.f3);
  if (level != RecordLevel::Full) return r;

  r.grad_v_sq = grad_sq_v(g_, s.v);
  r.grad_T_sq = grad_sq_T(g_, s.T, s.rho);
  r.grad_rho_sq = grad_sq_rho(g_, s.rho);
  VectorField fv = f.f1;
  Field frho = f.f3;
  if (cfg_.hydrostatic) {
    const VectorField h = hydrostatic_tendency(g_, s.T, cfg_.exec);
    fv.x += h.x;
    fv.y += h.y;
  }
  if (cfg_.reaction) {
    r.rho_l5_pow5 = l5_pow5(g_, s.rho);
    frho += absorbed_radiation(g_, s.rho, params_);
  }
  r.work_v = inner(g_, fv, s.v);
  r.work_T = inner(g_, f.f2, s.T);
  r.work_rho = inner(g_, frho, s.rho);
  return r;
}

State Stepper::tendency(const State& s) const {
  const Exec ex = cfg_.exec;
  Explicit e;
  explicit_terms(s, e);
  ForcingFields f = ForcingFields::zero(g_);
  if (!forcing_.is_zero()) forcing_.evaluate(g_, s.t, f);

  Spectrum lvx, lvy, lT, lrho;
  kernels::apply_velocity_columns(g_, 0.0, 1.0, fft_h(g_, s.v.x, ex), lvx, ex);
  kernels::apply_velocity_columns(g_, 0.0, 1.0, fft_h(g_, s.v.y, ex), lvy, ex);
  kernels::apply_heat_columns(g_, 0.0, 1.0, fft_h(g_, s.T, ex), fft_h(g_, s.rho, ex), lT, lrho, ex);

  State out;
  out.t = s.t;
  VectorField dv{ifft_h(g_, lvx, ex), ifft_h(g_, lvy, ex)};
  dv.x -= e.adv_v.x;
  dv.x += e.hydro.x;
  dv.x += f.f1.x;
  dv.y -= e.adv_v.y;
  dv.y += e.hydro.y;
  dv.y += f.f1.y;
  out.v = project_barotropic(g_, dv, nullptr, ex);
  out.T = ifft_h(g_, lT, ex);
  out.T -= e.adv_T;
  out.T += f.f2;
  out.rho = ifft_h(g_, lrho, ex);
  out.rho -= e.adv_rho;
  out.rho += e.absorbed;
  out.rho -= e.outgoing;
  out.rho += f.f3;
  return out;
}

// ---------------------------------------------------------------------------

std::size_t steps_for(double span, double dt) {
  if (span == 0.0) return 0;
  const double ratio = span / dt;
  const double n = std::round(ratio);
  if (!(n >= 1.0) || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("time span " + std::to_string(span) + " is not an integer multiple of dt = " +
                      std::to_string(dt));
  return static_cast<std::size_t>(n);
}

void check_state_health(const Grid& g, const State& s, double threshold) {
  const double norms[] = {l2_sq(g, s.v), l2_sq(g, s.T), l2_sq(g, s.rho)};
  for (double nsq : norms) {
    if (!std::isfinite(nsq))
      throw NumericalError(NumericalError::Kind::NotANumber, "non-finite state at t = " + std::to_string(s.t), s.t);
    if (std::sqrt(nsq) > threshold)
      throw NumericalError(NumericalError::Kind::BlowUp,
                           "blow-up: L2 norm " + std::to_string(std::sqrt(nsq)) + " exceeds threshold at t = " +
                               std::to_string(s.t),
                           s.t);
  }
}

SimulationResult simulate(const Grid& g, const State& state0, const ForcingSource& forcing,
                          const PhysicsParams& params, const StepperConfig& cfg, double t_end, RecordLevel level,
                          std::span<const Observer> observers) {
  if (!(t_end >= state0.t)) throw ConfigError("t_end must not precede the initial time");
  const std::size_t n = steps_for(t_end - state0.t, cfg.dt);
  Stepper stepper(g, forcing, params, cfg);

  SimulationResult r{state0, {}, 0};
  if (level != RecordLevel::None) {
    r.trace.rows.reserve(n + 1);
    r.trace.rows.push_back(stepper.observe(r.state, level));
  }
  const double t0 = state0.t;
  StepRecord rec;
  for (std::size_t k = 1; k <= n; ++k) {
    const double tk = k == n ? t_end : t0 + static_cast<double>(k) * cfg.dt;
    stepper.step(r.state, tk, level, &rec);
    ++r.steps;

    check_state_health(g, r.state, cfg.blowup_threshold);
    for (const auto& obs : observers) obs(r.state, rec);
    if (level != RecordLevel::None) r.trace.rows.push_back(rec);
  }
  return r;
}

}  // namespace pebm
