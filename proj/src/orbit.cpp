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

#include "pebm/orbit.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

#include "pebm/error.hpp"
#include "pebm/norms.hpp"

namespace pebm {

std::string to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Converged: return "converged";
    case OrbitStatus::MaxIterations: return "max_iterations";
    case OrbitStatus::BlowUp: return "blow_up";
  }
  return "unknown";
}

State period_map(const Grid& g, const State& x, const ForcingSource& forcing, const PhysicsParams& p,
                 const StepperConfig& cfg, double period) {
  if (!(period > 0.0)) throw ConfigError("period must be > 0");
  steps_for(period, cfg.dt);
  return simulate(g, x, forcing, p, cfg, x.t + period, RecordLevel::None).state;
}

namespace {

double weighted_y(const Grid& g, const State& s) {
  return 2.0 * l2_sq(g, s.v) + l2_sq(g, s.T) + 2.0 * l2_sq(g, s.rho);
}

// Flattened state scaled by the square roots of the quadrature weights, so
// Euclidean norms are X0 norms.
class WeightedVector {
 public:
  explicit WeightedVector(const Grid& g)
      : volume_(g.plane() * static_cast<std::size_t>(g.nz)),
        wv_(std::sqrt(g.dx * g.dy * g.dz)),
        ws_(std::sqrt(g.dx * g.dy)) {}

  Eigen::VectorXd to(const State& s) const {
    std::vector<double> flat;
    flatten(s, flat);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
    const auto n3 = static_cast<Eigen::Index>(3 * volume_);
    v.head(n3) *= wv_;
    v.tail(v.size() - n3) *= ws_;
    return v;
  }

  void from(const Eigen::VectorXd& v, State& s) const {
    const auto n3 = static_cast<Eigen::Index>(3 * volume_);
    Eigen::VectorXd u = v;
    u.head(n3) /= wv_;
    u.tail(u.size() - n3) /= ws_;
    std::vector<double> flat(u.data(), u.data() + u.size());
    unflatten(flat, s);
  }

 private:
  std::size_t volume_;
  double wv_, ws_;
};

class Anderson {
 public:
  Anderson(int depth, const WeightedVector& wv) : depth_(depth), wv_(wv) {}

  // Returns the next iterate from x and S(x).
  State next(const State& x, const State& sx) {
    const Eigen::VectorXd gx = wv_.to(sx);
    const Eigen::VectorXd f = gx - wv_.to(x);
    if (have_prev_) {
      df_.push_back(f - f_prev_);
      dg_.push_back(gx - g_prev_);
      if (static_cast<int>(df_.size()) > depth_) {
        df_.erase(df_.begin());
        dg_.erase(dg_.begin());
      }
    }
    f_prev_ = f;
    g_prev_ = gx;
    have_prev_ = true;

    State out = sx;
    if (df_.empty()) return out;
    const auto m = static_cast<Eigen::Index>(df_.size());
    Eigen::MatrixXd F(f.size(), m), G(f.size(), m);
    for (Eigen::Index c = 0; c < m; ++c) {
      F.col(c) = df_[c];
      G.col(c) = dg_[c];
    }
    const Eigen::VectorXd gamma = F.colPivHouseholderQr().solve(f);
    const Eigen::VectorXd xn = gx - G * gamma;
    if (!xn.allFinite()) {
      df_.clear();
      dg_.clear();
      return out;
    }
    wv_.from(xn, out);
    return out;
  }

  void reset() {
    df_.clear();
    dg_.clear();
    have_prev_ = false;
  }

 private:
  int depth_;
  const WeightedVector& wv_;
  std::vector<Eigen::VectorXd> df_, dg_;
  Eigen::VectorXd f_prev_, g_prev_;
  bool have_prev_ = false;
};

}  // namespace

OrbitResult find_periodic(const Grid& g, const State& x0, const ForcingSource& forcing, const PhysicsParams& p,
                          const StepperConfig& cfg, const OrbitConfig& ocfg) {
  std::vector<std::string> errors;
  if (!(ocfg.period > 0.0)) errors.push_back("orbit period must be > 0");
  if (!(ocfg.tol > 0.0)) errors.push_back("orbit tol must be > 0");
  if (ocfg.max_iters < 1) errors.push_back("orbit max_iters must be >= 1");
  if (ocfg.anderson_depth < 1) errors.push_back("anderson depth must be >= 1");
  if (!errors.empty()) throw ConfigError(errors);
  steps_for(ocfg.period, cfg.dt);

  OrbitResult res;
  double r2 = 0.0;
  if (ocfg.ball_monitor) {
    res.ball_radius = gronwall_ball_radius(g, forcing, p, ocfg.period).radius;
    r2 = res.ball_radius * res.ball_radius;
  }
  const WeightedVector wv(g);
  Anderson anderson(ocfg.anderson_depth, wv);

  const double t0 = x0.t;
  const bool accelerate = ocfg.acceleration == Acceleration::Anderson;
  State x = x0;
  bool inside_once = false;
  // Anderson safeguard: S(x) of the best iterate so far. A failed map or a
  // residual above kRestartGrowth times the best drops the history and
  // continues from there (a plain Picard step).
  constexpr double kRestartGrowth = 2.0;
  State fallback;
  double best = std::numeric_limits<double>::infinity();
  auto restart = [&] {
    ++res.anderson_restarts;
    anderson.reset();
    x = fallback;
    x.t = t0;
  };
  for (int k = 0; k < ocfg.max_iters; ++k) {
    const double y = weighted_y(g, x);
    res.y_history.push_back(y);
    if (ocfg.ball_monitor) {
      const bool inside = y <= r2 * (1.0 + 1e-12);
      if (k == 0) res.started_in_ball = inside;
      if (inside_once && !inside) res.stayed_in_ball = false;
      inside_once = inside_once || inside;
    }

    State sx;
    try {
      sx = period_map(g, x, forcing, p, cfg, ocfg.period);
    } catch (const NumericalError& e) {
      if (accelerate && std::isfinite(best)) {
        res.residual_history.push_back(std::numeric_limits<double>::infinity());
        restart();
        continue;
      }
      res.status = OrbitStatus::BlowUp;
      res.state = x;
      res.message = std::string("period map failed at iteration ") + std::to_string(k) + ": " + e.what();
      return res;
    }
    sx.t = t0;
    const double r = x0_distance(g, sx, x);
    res.residual_history.push_back(r);
    if (r <= ocfg.tol) {
      res.status = OrbitStatus::Converged;
      res.state = x;
      res.message = "converged after " + std::to_string(k + 1) + " period-map evaluations";
      if (res.anderson_restarts > 0) res.message += " (" + std::to_string(res.anderson_restarts) + " Anderson restarts)";
      res.energy_trace_final_period =
          simulate(g, x, forcing, p, cfg, t0 + ocfg.period, RecordLevel::Full).trace;
      return res;
    }
    if (accelerate) {
      if (r > kRestartGrowth * best) {
        restart();
        continue;
      }
      if (r < best) {
        best = r;
        fallback = sx;
      }
      x = anderson.next(x, sx);
      x.v = project_barotropic(g, x.v, nullptr, cfg.exec);
    } else {
      x = std::move(sx);
    }
    x.t = t0;
  }
  res.status = OrbitStatus::MaxIterations;
  res.state = x;
  res.message = "no convergence in " + std::to_string(ocfg.max_iters) + " iterations; last residual " +
                std::to_string(res.final_residual());
  return res;
}

double discrete_poincare_constant(const Grid& g) {
  const double horizontal = 4.0 * std::numbers::pi * std::numbers::pi;
  const double vertical = (2.0 - 2.0 * std::cos(std::numbers::pi / g.nz)) / (g.dz * g.dz);

  // Mean (kappa = 0) heat column: A = -M L symmetric, M = diag(dz, .., dz, 1).
  const int n = g.nz + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const double c = 1.0 / g.dz;
  for (int k = 0; k < g.nz; ++k) {
    M(k, k) = g.dz;
    if (k > 0) {
      A(k, k) += c;
      A(k, k - 1) -= c;
      A(k - 1, k) -= c;
      A(k - 1, k - 1) += c;
    }
  }
  const int top = g.nz - 1;
  M(g.nz, g.nz) = 1.0;
  A(top, top) += 2.0 * c;
  A(top, g.nz) -= 2.0 * c;
  A(g.nz, top) -= 2.0 * c;
  A(g.nz, g.nz) += 2.0 * c;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  double column = std::numeric_limits<double>::infinity();
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double mu = es.eigenvalues()(i);
    if (mu > 1e-9 * scale) column = std::min(column, mu);
  }
  return std::min({horizontal, vertical, column});
}

GronwallBall gronwall_ball_radius(const Grid& g, const ForcingSource& forcing, const PhysicsParams& p, double period,
                                  int samples) {
  if (!(period > 0.0) || samples < 1) throw ConfigError("ball radius needs period > 0 and samples >= 1");
  GronwallBall b;
  b.lambda = discrete_poincare_constant(g);
  b.c_sq = gronwall_c_sq(p);
  double fint = 0.0;
  if (!forcing.is_zero()) {
    ForcingFields f = ForcingFields::zero(g);
    const double h = period / samples;
    for (int i = 0; i < samples; ++i) {
      forcing.evaluate(g, i * h, f);
      fint += h * (l2_sq(g, f.f1) + l2_sq(g, f.f2) + l2_sq(g, f.f3));
    }
  }
  b.phi_integral = b.c_sq * period + fint;
  b.radius = std::sqrt(b.phi_integral / (1.0 - std::exp(-b.lambda * period)));
  return b;
}

FixedPointCertificate certify_periodic(const Grid& g, const State& x_star, const ForcingSource& forcing,
                                       const PhysicsParams& p, const StepperConfig& cfg, double period,
                                       int samples) {
  if (samples < 1) throw ConfigError("certificate needs at least one sample");
  const std::size_t n = steps_for(period, cfg.dt);
  auto sampled = [&](const State& start, std::vector<State>& out) {
    std::size_t step = 0;
    out.clear();
    out.push_back(start);
    const Observer obs = [&](const State& s, const StepRecord&) {
      ++step;
      for (int j = 1; j < samples; ++j)
        if (step == static_cast<std::size_t>(j) * n / static_cast<std::size_t>(samples)) out.push_back(s);
    };
    return simulate(g, start, forcing, p, cfg, start.t + period, RecordLevel::None, std::span(&obs, 1)).state;
  };
  std::vector<State> first, second;
  const State x1 = sampled(x_star, first);
  const State x2 = sampled(x1, second);
  FixedPointCertificate c;
  c.samples = static_cast<int>(first.size());
  c.endpoint_distance = x0_distance(g, x2, x1);
  for (std::size_t j = 0; j < first.size() && j < second.size(); ++j)
    c.max_sample_distance = std::max(c.max_sample_distance, x0_distance(g, first[j], second[j]));
  return c;
}

SteadyResult find_steady_state(const Grid& g, const State& x0, const ForcingSource& forcing, const PhysicsParams& p,
                               const StepperConfig& cfg, const SteadyConfig& scfg) {
  if (const auto* mf = dynamic_cast<const ModeForcing*>(&forcing); mf && !mf->forcing().time_independent())
    throw ConfigError("steady state requires time-independent forcing");
  std::vector<std::string> errors;
  if (!(scfg.tol > 0.0)) errors.push_back("steady tol must be > 0");
  if (!(scfg.max_time > 0.0)) errors.push_back("steady max_time must be > 0");
  if (!errors.empty()) throw ConfigError(errors);
  const std::size_t chunk = steps_for(scfg.interval, cfg.dt);

  Stepper stepper(g, forcing, p, cfg);
  SteadyResult res;
  State x = x0;
  const double t0 = x0.t;
  std::size_t k = 0;
  while (true) {
    const State prev = x;
    for (std::size_t i = 0; i < chunk; ++i) {
      ++k;
      stepper.step(x, t0 + static_cast<double>(k) * cfg.dt);
      check_state_health(g, x, cfg.blowup_threshold);
    }
    const double rate = x0_distance(g, x, prev) / scfg.interval;
    res.rate_history.push_back(rate);
    res.time = x.t - t0;
    if (rate <= scfg.tol) {
      res.converged = true;
      res.message = "steady after t = " + std::to_string(res.time);
      break;
    }
    if (res.time >= scfg.max_time) {
      res.message = "not steady by t = " + std::to_string(res.time) + "; last rate " + std::to_string(rate);
      break;
    }
  }
  res.state = x;
  res.steady_residual = x0_norm(g, stepper.tendency(x));
  return res;
}

}  // namespace pebm
