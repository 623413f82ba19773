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

#include "pebm/diagnostics.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "pebm/error.hpp"
#include "pebm/norms.hpp"

namespace pebm {

namespace {

std::size_t row_at(const EnergyTrace& trace, double t) {
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (std::abs(trace[i].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  throw ConfigError("time " + std::to_string(t) + " is not a row of the energy trace");
}

double step_residual(const StepRecord& a, const StepRecord& b, Quadrature q) {
  const double de = b.energy() - a.energy();
  if (q == Quadrature::Scheme) return de + 2.0 * b.step_dissipation - 2.0 * b.step_work;
  const double h = b.t - a.t;
  return de + h * (a.dissipation_rate() + b.dissipation_rate()) - h * (a.work_rate() + b.work_rate());
}

}  // namespace

std::vector<double> step_residuals(const EnergyTrace& trace, Quadrature q) {
  std::vector<double> r;
  if (trace.size() < 2) return r;
  r.reserve(trace.size() - 1);
  for (std::size_t n = 1; n < trace.size(); ++n) r.push_back(step_residual(trace[n - 1], trace[n], q));
  return r;
}

double energy_inequality_residual(const EnergyTrace& trace, double s, double t, Quadrature q) {
  if (trace.empty()) throw ConfigError("empty energy trace");
  if (!(s <= t)) throw ConfigError("energy residual needs s <= t");
  const std::size_t i = row_at(trace, s);
  const std::size_t j = row_at(trace, t);
  double acc = 0.0;
  for (std::size_t n = i + 1; n <= j; ++n) acc += step_residual(trace[n - 1], trace[n], q);
  return acc;
}

WorstInterval worst_energy_residual(const EnergyTrace& trace, Quadrature q) {
  const std::vector<double> r = step_residuals(trace, q);
  WorstInterval best;
  if (!trace.empty()) best.s = best.t = trace[0].t;
  double run = 0.0;
  std::size_t start = 0;
  for (std::size_t n = 0; n < r.size(); ++n) {
    if (run <= 0.0) {
      run = 0.0;
      start = n;
    }
    run += r[n];
    if (run > best.residual) {
      best.residual = run;
      best.s = trace[start].t;
      best.t = trace[n + 1].t;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

double gronwall_c_sq(const PhysicsParams& p) {
  const double a = p.q_max() * p.beta2;
  return 1.6 * a * std::pow(a / 5.0, 0.25);
}

std::vector<double> phi_series(const EnergyTrace& trace, const PhysicsParams& p) {
  const double c2 = gronwall_c_sq(p);
  std::vector<double> phi;
  phi.reserve(trace.size());
  for (const auto& r : trace.rows) phi.push_back(c2 + r.forcing_sq);
  return phi;
}

EnvelopeCheck gronwall_envelope_check(const EnergyTrace& trace, const std::vector<double>& phi) {
  if (phi.size() != trace.size()) throw ConfigError("Phi series and trace lengths differ");
  EnvelopeCheck out;
  if (trace.empty()) return out;
  out.max_violation = -std::numeric_limits<double>::infinity();
  const double t0 = trace[0].t;
  const double y0 = trace[0].gronwall_y();
  double integral = 0.0;
  for (std::size_t n = 0; n < trace.size(); ++n) {
    if (n > 0) integral += 0.5 * (trace[n].t - trace[n - 1].t) * (phi[n] + phi[n - 1]);
    const double env = std::exp(trace[n].t - t0) * (y0 + integral);
    const double viol = trace[n].gronwall_y() - env;
    if (viol > out.max_violation) {
      out.max_violation = viol;
      out.t_worst = trace[n].t;
    }
    if (env > 0.0) out.max_relative = n == 0 ? viol / env : std::max(out.max_relative, viol / env);
  }
  return out;
}

// ---------------------------------------------------------------------------

double gronwall_weight(const Grid& g, const State& s) {
  const double hv = l2_sq(g, s.v) + grad_sq_v(g, s.v);
  const double hT = l2_sq(g, s.T) + grad_sq_T(g, s.T, s.rho);
  const double hr = l2_sq(g, s.rho) + grad_sq_rho(g, s.rho);
  return 1.0 + hv * hv + hT * hT + hr * hr;
}

Trajectory record_trajectory(const Grid& g, const State& x0, const ForcingSource& forcing, const PhysicsParams& p,
                             const StepperConfig& cfg, double t_end, std::size_t stride) {
  if (stride == 0) throw ConfigError("trajectory stride must be >= 1");
  Trajectory tr;
  tr.samples.push_back(x0);
  tr.sample_step.push_back(0);
  tr.weight_t.push_back(x0.t);
  tr.weight.push_back(gronwall_weight(g, x0));
  std::size_t step = 0;
  const Observer obs = [&](const State& s, const StepRecord&) {
    ++step;
    tr.weight_t.push_back(s.t);
    tr.weight.push_back(gronwall_weight(g, s));
    if (step % stride == 0) {
      tr.samples.push_back(s);
      tr.sample_step.push_back(step);
    }
  };
  const auto r = simulate(g, x0, forcing, p, cfg, t_end, RecordLevel::None, std::span(&obs, 1));
  if (step % stride != 0) {
    tr.samples.push_back(r.state);
    tr.sample_step.push_back(step);
  }
  return tr;
}

ContractionReport weak_strong_contraction(const Grid& g, const Trajectory& a, const Trajectory& b) {
  if (a.samples.size() != b.samples.size() || a.sample_step != b.sample_step || a.samples.empty())
    throw ConfigError("weak-strong: trajectories are sampled differently");
  for (std::size_t k = 0; k < a.samples.size(); ++k)
    if (a.samples[k].t != b.samples[k].t) throw ConfigError("weak-strong: sample times differ");

  std::vector<double> cum(b.weight.size(), 0.0);
  for (std::size_t n = 1; n < b.weight.size(); ++n)
    cum[n] = cum[n - 1] + 0.5 * (b.weight_t[n] - b.weight_t[n - 1]) * (b.weight[n] + b.weight[n - 1]);

  ContractionReport rep;
  rep.identical = true;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    const State& s1 = a.samples[k];
    const State& s2 = b.samples[k];
    State d = s1;
    axpy(-1.0, s2, d);
    DifferenceRow row;
    row.t = s1.t;
    row.sigma_v_sq = l2_sq(g, d.v);
    row.sigma_T_sq = l2_sq(g, d.T);
    row.sigma_rho_sq = l2_sq(g, d.rho);
    row.dissipation = grad_sq_v(g, d.v) + grad_sq_T(g, d.T, d.rho) + grad_sq_rho(g, d.rho);
    row.g = b.weight[b.sample_step[k]];
    row.int_g = cum[b.sample_step[k]];
    rep.trace.rows.push_back(row);
    rep.max_sigma = std::max(rep.max_sigma, std::sqrt(row.sigma_sq()));
    if (s1.v.x.values() != s2.v.x.values() || s1.v.y.values() != s2.v.y.values() ||
        s1.T.values() != s2.T.values() || s1.rho.values() != s2.rho.values())
      rep.identical = false;
  }
  if (rep.identical) {
    rep.certified = true;
    return rep;
  }

  const double s0 = rep.trace.rows.front().sigma_sq();
  if (s0 == 0.0) {
    rep.c_fit = std::numeric_limits<double>::infinity();
    rep.certified = false;
    return rep;
  }
  double c = 0.0;
  for (std::size_t k = 1; k < rep.trace.rows.size(); ++k) {
    const auto& row = rep.trace.rows[k];
    if (row.int_g <= 0.0 || row.sigma_sq() == 0.0) continue;
    c = std::max(c, (std::log(row.sigma_sq()) - std::log(s0)) / row.int_g);
  }
  rep.c_fit = c;
  rep.certified = std::isfinite(c);
  return rep;
}

ContractionReport run_weak_strong(const Grid& g, const State& x1, const State& x2, const ForcingSource& forcing,
                                  const PhysicsParams& p, const StepperConfig& cfg, double t_end,
                                  std::size_t stride) {
  if (x1.t != x2.t) throw ConfigError("weak-strong: initial times differ");
  auto run = [&](const State& x) { return record_trajectory(g, x, forcing, p, cfg, t_end, stride); };
  auto first = std::async(std::launch::async, run, std::cref(x1));
  auto second = std::async(std::launch::async, run, std::cref(x2));
  const Trajectory a = first.get();
  const Trajectory b = second.get();
  return weak_strong_contraction(g, a, b);
}

// ---------------------------------------------------------------------------

ReactionBound reaction_work_bound(const Grid& g, const Field& rho1, const Field& rho2, const PhysicsParams& p) {
  const double cross = inner(g, reaction(g, rho1, p), rho2) + inner(g, reaction(g, rho2, p), rho1);
  ReactionBound b;
  b.lhs = std::abs(cross);
  b.rhs = p.q_max() * p.beta2 * (l1(g, rho1) + l1(g, rho2)) + l5_pow5(g, rho1) + l5_pow5(g, rho2);
  return b;
}

}  // namespace pebm
