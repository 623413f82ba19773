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


#include "pebm/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pebm/error.hpp"
#include "pebm/initial.hpp"
#include "pebm/io.hpp"
#include "pebm/norms.hpp"
#include "pebm/orbit.hpp"

namespace pebm {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::string resume;
  std::uint64_t seed = 0;
  bool quiet = false;
  // check-energy
  std::string trace;
  std::string quadrature = "scheme";
  double tol = 1e-6;
};

struct Context {
  const Options& opt;
  bool has_seed;
  RunConfig cfg;
  Grid grid;
  PhysicsParams physics;
  ModeForcing forcing;
  std::ostream& out;

  void say(const std::string& s) const {
    if (!opt.quiet) out << s << "\n";
  }
  fs::path path(const std::string& name) const { return fs::path(opt.out) / name; }
};

State initial_state(const Context& c) {
  if (!c.opt.resume.empty()) return load_snapshot(c.opt.resume, c.grid);
  if (c.has_seed)
    return random_state(c.grid, {.seed = c.opt.seed,
                                 .amplitude = c.cfg.amplitude,
                                 .max_mode = c.cfg.max_mode,
                                 .max_vertical = c.cfg.max_mode});
  return State::zero(c.grid);
}

void write_csv(const fs::path& p, const auto& writer) {
  std::ostringstream s;
  writer(s);
  save_text(p, s.str());
}

int cmd_simulate(const Context& c) {
  const State x0 = initial_state(c);
  std::vector<Observer> observers;
  int step = 0;
  if (c.cfg.snapshot_every > 0) {
    observers.push_back([&](const State& s, const StepRecord&) {
      if (++step % c.cfg.snapshot_every == 0) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06d.pebm", step);
        save_snapshot(c.path(name), s);
      }
    });
  }
  const double t_end = x0.t + c.cfg.horizon();
  const SimulationResult r = simulate(c.grid, x0, c.forcing, c.physics, c.cfg.stepper, t_end, RecordLevel::Full,
                                      observers);
  write_csv(c.path(c.cfg.trace), [&](std::ostream& s) { write_energy_csv(s, r.trace); });
  save_snapshot(c.path("final.pebm"), r.state);
  Report rep;
  rep.text("command", "simulate");
  rep.count("steps", static_cast<long long>(r.steps));
  rep.number("t_start", x0.t);
  rep.number("t_end", r.state.t);
  rep.number("energy_initial", r.trace.rows.front().energy());
  rep.number("energy_final", r.trace.rows.back().energy());
  rep.number("divergence_final", barotropic_divergence(c.grid, r.state.v));
  save_text(c.path("simulate.txt"), rep.str());
  c.say("simulate: " + std::to_string(r.steps) + " steps to t = " + format_double(r.state.t) +
        ", energy " + format_double(r.trace.rows.back().energy()));
  return kExitOk;
}

int cmd_find_periodic(const Context& c) {
  const State x0 = initial_state(c);
  const OrbitConfig& oc = c.cfg.orbit;
  const OrbitResult r = find_periodic(c.grid, x0, c.forcing, c.physics, c.cfg.stepper, oc);
  write_csv(c.path("residuals.csv"), [&](std::ostream& s) { write_residual_csv(s, r); });
  Report rep;
  rep.text("command", "find-periodic");
  rep.text("status", to_string(r.status));
  rep.count("iterations", static_cast<long long>(r.residual_history.size()));
  rep.number("final_residual", r.final_residual());
  rep.count("anderson_restarts", r.anderson_restarts);
  rep.number("tol", oc.tol);
  rep.number("period", oc.period);
  if (oc.ball_monitor) {
    rep.number("ball_radius", r.ball_radius);
    rep.flag("started_in_ball", r.started_in_ball);
    rep.flag("stayed_in_ball", r.stayed_in_ball);
  }
  rep.text("message", r.message);
  int code = kExitNumerical;
  if (r.converged()) {
    save_snapshot(c.path("periodic.pebm"), r.state);
    write_csv(c.path(c.cfg.trace), [&](std::ostream& s) { write_energy_csv(s, r.energy_trace_final_period); });
    const FixedPointCertificate cert =
        certify_periodic(c.grid, r.state, c.forcing, c.physics, c.cfg.stepper, oc.period);
    const bool ok = cert.max_sample_distance <= 2.0 * oc.tol;
    rep.number("certificate_endpoint_distance", cert.endpoint_distance);
    rep.number("certificate_max_sample_distance", cert.max_sample_distance);
    rep.count("certificate_samples", cert.samples);
    rep.flag("certified", ok);
    code = ok ? kExitOk : kExitNumerical;
  } else {
    save_snapshot(c.path("last_iterate.pebm"), r.state);
    rep.flag("certified", false);
  }
  save_text(c.path("certificate.txt"), rep.str());
  c.say("find-periodic: " + to_string(r.status) + " after " + std::to_string(r.residual_history.size()) +
        " iterations, residual " + format_double(r.final_residual()));
  return code;
}

int cmd_steady(const Context& c) {
  if (!c.cfg.forcing.time_independent())
    throw ConfigError("steady needs time-independent forcing (every mode with n = 0 and a cos time factor)");
  const SteadyResult r =
      find_steady_state(c.grid, initial_state(c), c.forcing, c.physics, c.cfg.stepper, c.cfg.steady);
  save_snapshot(c.path("steady.pebm"), r.state);
  Report rep;
  rep.text("command", "steady");
  rep.flag("converged", r.converged);
  rep.number("time", r.time);
  rep.number("rate", r.rate_history.empty() ? 0.0 : r.rate_history.back());
  rep.number("steady_residual", r.steady_residual);
  rep.number("rho_mean", [&] {
    double m = 0.0;
    for (double x : r.state.rho.values()) m += x;
    return m / static_cast<double>(r.state.rho.size());
  }());
  rep.text("message", r.message);
  save_text(c.path("steady.txt"), rep.str());
  c.say("steady: " + std::string(r.converged ? "converged" : "not converged") + " at t = " + format_double(r.time));
  return r.converged ? kExitOk : kExitNumerical;
}

int cmd_check_energy(const Context& c) {
  Quadrature q;
  if (c.opt.quadrature == "scheme")
    q = Quadrature::Scheme;
  else if (c.opt.quadrature == "trapezoid")
    q = Quadrature::Trapezoid;
  else
    throw ConfigError("--quadrature must be scheme or trapezoid");
  EnergyTrace trace;
  if (!c.opt.trace.empty()) {
    std::ifstream in(c.opt.trace);
    if (!in) throw ConfigError("cannot open trace " + c.opt.trace);
    trace = read_energy_csv(in);
  } else {
    const State x0 = initial_state(c);
    trace = simulate(c.grid, x0, c.forcing, c.physics, c.cfg.stepper, x0.t + c.cfg.horizon(), RecordLevel::Full)
                .trace;
    write_csv(c.path(c.cfg.trace), [&](std::ostream& s) { write_energy_csv(s, trace); });
  }
  if (trace.size() < 2) throw ConfigError("energy trace needs at least two rows");
  double scale = trace.rows.front().energy();
  if (!(scale > 0.0)) {
    scale = 0.0;
    for (const auto& r : trace.rows) scale = std::max(scale, r.energy());
  }
  if (!(scale > 0.0)) scale = 1.0;
  const WorstInterval w = worst_energy_residual(trace, q);
  const double total = energy_inequality_residual(trace, trace.rows.front().t, trace.rows.back().t, q);
  const EnvelopeCheck env = gronwall_envelope_check(trace, phi_series(trace, c.physics));
  const bool energy_ok = w.residual <= c.opt.tol * scale;
  const bool envelope_ok = env.max_relative <= 1e-9;
  Report rep;
  rep.text("command", "check-energy");
  rep.text("quadrature", c.opt.quadrature);
  rep.count("rows", static_cast<long long>(trace.size()));
  rep.number("energy_scale", scale);
  rep.number("worst_residual", w.residual);
  rep.number("worst_relative", w.residual / scale);
  rep.number("worst_s", w.s);
  rep.number("worst_t", w.t);
  rep.number("total_residual", total);
  rep.number("tolerance_relative", c.opt.tol);
  rep.flag("energy_inequality_ok", energy_ok);
  rep.number("envelope_max_violation", env.max_violation);
  rep.number("envelope_max_relative", env.max_relative);
  rep.flag("envelope_ok", envelope_ok);
  save_text(c.path("energy_check.txt"), rep.str());
  c.say("check-energy: worst residual " + format_double(w.residual / scale) + " E0 on [" + format_double(w.s) +
        ", " + format_double(w.t) + "], envelope " + format_double(env.max_relative));
  return energy_ok && envelope_ok ? kExitOk : kExitNumerical;
}

int cmd_ws_uniqueness(const Context& c) {
  const State strong = initial_state(c);
  State weak = strong;
  const PerturbationSpec& ps = c.cfg.perturbation;
  if (ps.amplitude != 0.0) perturb_mode(c.grid, weak, ps.component, ps.kx, ps.ky, ps.amplitude);
  const double horizon = c.cfg.ws_periods * c.cfg.forcing.period;
  const std::size_t steps = steps_for(horizon, c.cfg.dt);
  const std::size_t stride = std::max<std::size_t>(1, steps / 500);
  const ContractionReport r =
      run_weak_strong(c.grid, weak, strong, c.forcing, c.physics, c.cfg.stepper, strong.t + horizon, stride);
  write_csv(c.path("difference.csv"), [&](std::ostream& s) { write_difference_csv(s, r.trace); });
  Report rep;
  rep.text("command", "ws-uniqueness");
  rep.number("horizon", horizon);
  rep.count("samples", static_cast<long long>(r.trace.rows.size()));
  rep.number("perturbation", ps.amplitude);
  rep.flag("identical", r.identical);
  rep.number("sigma_sq_initial", r.trace.rows.front().sigma_sq());
  rep.number("sigma_sq_final", r.trace.rows.back().sigma_sq());
  rep.number("max_sigma", r.max_sigma);
  rep.number("int_g", r.trace.rows.back().int_g);
  rep.number("c_fit", r.c_fit);
  rep.flag("certified", r.certified);
  save_text(c.path("ws_certificate.txt"), rep.str());
  c.say("ws-uniqueness: " + std::string(r.identical ? "sigma identically zero" : "C_fit = " + format_double(r.c_fit)));
  return r.certified ? kExitOk : kExitNumerical;
}

void apply_thread_cap() {
  const char* env = std::getenv("PEBM_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError(std::string("PEBM_THREADS must be a positive integer, got '") + env + "'");
  set_max_threads(static_cast<int>(n));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Primitive equations coupled to a Sellers-type surface energy balance", "pebm"};
  app.require_subcommand(1, 1);
  Options opt;
  CLI::Option* seed_opt = nullptr;
  std::vector<CLI::Option*> seed_opts;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--config", opt.config, "run configuration file")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", opt.out, "output directory (created if missing)");
    sc->add_option("--resume", opt.resume, "initial state from this snapshot")->check(CLI::ExistingFile);
    seed_opts.push_back(sc->add_option("--seed", opt.seed, "random initial data with this seed"));
    sc->add_flag("--quiet", opt.quiet, "print errors only");
    sc->get_option("--resume")->excludes(seed_opts.back());
  };
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "initial value run");
  CLI::App* periodic_cmd = app.add_subcommand("find-periodic", "fixed point of the period map");
  CLI::App* steady_cmd = app.add_subcommand("steady", "long-time steady state for constant forcing");
  CLI::App* energy_cmd = app.add_subcommand("check-energy", "energy inequality and Gronwall envelope");
  CLI::App* ws_cmd = app.add_subcommand("ws-uniqueness", "paired runs and the difference contraction");
  for (CLI::App* sc : {simulate_cmd, periodic_cmd, steady_cmd, energy_cmd, ws_cmd}) common(sc);
  energy_cmd->add_option("--trace", opt.trace, "check this energy CSV instead of running")->check(CLI::ExistingFile);
  energy_cmd->add_option("--quadrature", opt.quadrature, "scheme or trapezoid")
      ->check(CLI::IsMember({"scheme", "trapezoid"}));
  energy_cmd->add_option("--tol", opt.tol, "allowed worst residual relative to the initial energy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (CLI::Option* o : seed_opts)
    if (o->count() > 0) seed_opt = o;

  try {
    apply_thread_cap();
    RunConfig cfg = load_config(opt.config);
    fs::create_directories(opt.out);
    const Grid g = cfg.grid();
    const PhysicsParams p = cfg.physics(g);
    Context ctx{opt, seed_opt != nullptr, cfg, g, p, ModeForcing(cfg.forcing), out};
    if (simulate_cmd->parsed()) return cmd_simulate(ctx);
    if (periodic_cmd->parsed()) return cmd_find_periodic(ctx);
    if (steady_cmd->parsed()) return cmd_steady(ctx);
    if (energy_cmd->parsed()) return cmd_check_energy(ctx);
    return cmd_ws_uniqueness(ctx);
  } catch (const ConfigError& e) {
    err << "configuration error:\n";
    for (const auto& v : e.violations()) err << "  " << v << "\n";
    return kExitConfig;
  } catch (const ShapeError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure at t = " << e.time() << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "file system error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace pebm
