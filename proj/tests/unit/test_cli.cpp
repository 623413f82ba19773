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


#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pebm/cli.hpp"
#include "pebm/io.hpp"
#include "pebm/norms.hpp"
#include "support.hpp"
#include "tempdir.hpp"

using namespace pebm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pebm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path write(const test::TempDir& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

Report report(const fs::path& p) {
  std::ifstream in(p);
  return parse_report(in);
}

const char* kSmall = R"([grid]
nx = 8
ny = 8
nz = 4
dt = 0.005
[physics]
rho_ref = 0.5
q0 = 2
q1 = 0.1
[forcing]
period = 0.1
f1 = y 1 cos 1 cos 1 0 1
f2 = 1 sin 1 cos 0 1 1
[stepper]
scheme = imex-euler
t_end = 0.1
[orbit]
acceleration = anderson
tol = 1e-8
[output]
trace = trace.csv
snapshot_every = 5
)";

}  // namespace

TEST_CASE("find-periodic on zero forcing returns the zero state") {
  test::TempDir dir;
  const auto cfg = write(dir, "zero.ini", "[grid]\nnx = 8\nny = 8\nnz = 4\n[forcing]\nperiod = 0.01\n");
  const Run r = cli({"find-periodic", "--config", cfg.string(), "--out", (dir / "o").string(), "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const State s = load_snapshot(dir / "o" / "periodic.pebm", make_grid(8, 8, 4, 1e-3));
  CHECK(x0_norm(make_grid(8, 8, 4, 1e-3), s) == 0.0);
  const Report rep = report(dir / "o" / "certificate.txt");
  CHECK(rep.at("status") == "converged");
  CHECK(rep.at("certified") == "true");
  CHECK(fs::exists(dir / "o" / "residuals.csv"));
}

TEST_CASE("ws-uniqueness with zero perturbation certifies sigma = 0") {
  test::TempDir dir;
  const auto cfg = write(dir, "c.ini", std::string(kSmall) + "[initial]\nperturbation = T 1 0 0\nws_periods = 1\n");
  const Run r = cli({"ws-uniqueness", "--config", cfg.string(), "--out", dir.path().string(), "--seed", "4"});
  CHECK(r.code == 0);
  const Report rep = report(dir / "ws_certificate.txt");
  CHECK(rep.at("identical") == "true");
  CHECK(rep.at("max_sigma") == "0");
  CHECK(rep.at("c_fit") == "0");
  std::ifstream in(dir / "difference.csv");
  const DifferenceTrace tr = read_difference_csv(in);
  REQUIRE(tr.rows.size() == 21);
  for (const auto& row : tr.rows) CHECK(row.sigma_sq() == 0.0);
}

TEST_CASE("ws-uniqueness with a perturbation reports a finite constant") {
  test::TempDir dir;
  const auto cfg = write(dir, "c.ini", std::string(kSmall) + "[initial]\nperturbation = rho 1 1 1e-6\n");
  const Run r = cli({"ws-uniqueness", "--config", cfg.string(), "--out", dir.path().string(), "--seed", "4"});
  CHECK(r.code == 0);
  const Report rep = report(dir / "ws_certificate.txt");
  CHECK(rep.at("identical") == "false");
  CHECK(rep.at("certified") == "true");
  CHECK(std::isfinite(std::stod(rep.at("c_fit"))));
  CHECK(rep.at("horizon") == "0.2");
}

TEST_CASE("simulate with an oversized step exits 1 with the guard message") {
  test::TempDir dir;
  const auto cfg = write(dir, "c.ini",
                         "[grid]\nnx = 8\nny = 8\nnz = 4\ndt = 0.1\n[physics]\nrho_ref = 0\nq0 = 50\n"
                         "[forcing]\nperiod = 1\n[initial]\namplitude = 3\n");
  const Run r = cli({"simulate", "--config", cfg.string(), "--out", dir.path().string(), "--seed", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("step-size guard") != std::string::npos);
}

TEST_CASE("simulate writes trace and snapshots, and resume continues the run") {
  test::TempDir dir;
  const auto cfg = write(dir, "c.ini", kSmall);
  const Run a = cli({"simulate", "--config", cfg.string(), "--out", (dir / "a").string(), "--seed", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.out.find("simulate: 20 steps") != std::string::npos);
  std::ifstream in(dir / "a" / "trace.csv");
  const EnergyTrace tr = read_energy_csv(in);
  CHECK(tr.size() == 21);
  for (int n : {5, 10, 15, 20}) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06d.pebm", n);
    CHECK(fs::exists(dir / "a" / name));
  }
  CHECK(report(dir / "a" / "simulate.txt").at("steps") == "20");

  // Euler has no history, so 0 -> 0.1 -> 0.2 equals 0 -> 0.2 up to the
  // rounding of the step times (t0 + k dt with different t0).
  const Run b = cli({"simulate", "--config", cfg.string(), "--out", (dir / "b").string(), "--resume",
                     (dir / "a" / "final.pebm").string(), "--quiet"});
  REQUIRE(b.code == 0);
  const auto cfg2 = write(dir, "c2.ini", std::string(kSmall).replace(std::string(kSmall).find("t_end = 0.1"), 11,
                                                                      "t_end = 0.2"));
  const Run c = cli({"simulate", "--config", cfg2.string(), "--out", (dir / "c").string(), "--seed", "2", "--quiet"});
  REQUIRE(c.code == 0);
  const Grid g = make_grid(8, 8, 4, 0.005);
  const State sb = load_snapshot(dir / "b" / "final.pebm", g);
  const State sc = load_snapshot(dir / "c" / "final.pebm", g);
  for (auto [x, y] : {std::pair{&sb.v.x, &sc.v.x}, {&sb.v.y, &sc.v.y}, {&sb.T, &sc.T}, {&sb.rho, &sc.rho}})
    CHECK(test::max_diff(*x, *y) < 1e-13);
  CHECK(sb.t == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("check-energy on a run and on a stored trace") {
  test::TempDir dir;
  const auto cfg = write(dir, "c.ini", kSmall);
  const Run r = cli({"check-energy", "--config", cfg.string(), "--out", dir.path().string(), "--seed", "2"});
  CHECK(r.code == 0);
  const Report rep = report(dir / "energy_check.txt");
  CHECK(rep.at("energy_inequality_ok") == "true");
  CHECK(rep.at("envelope_ok") == "true");
  const Run again = cli({"check-energy", "--config", cfg.string(), "--out", (dir / "t").string(), "--trace",
                         (dir / "trace.csv").string(), "--quiet"});
  CHECK(again.code == 0);
  CHECK(report(dir / "t" / "energy_check.txt").at("worst_residual") == rep.at("worst_residual"));
  const Run strict = cli({"check-energy", "--config", cfg.string(), "--out", (dir / "s").string(), "--trace",
                          (dir / "trace.csv").string(), "--quadrature", "trapezoid", "--tol", "1e-12", "--quiet"});
  CHECK(strict.code == 1);
}

TEST_CASE("steady state from the command line") {
  test::TempDir dir;
  const auto cfg = write(dir, "c.ini",
                         "[grid]\nnx = 8\nny = 8\nnz = 4\ndt = 0.01\n[physics]\nrho_ref = 0\nq0 = 2\n"
                         "[forcing]\nperiod = 1\nf2 = 0.5 cos 0 cos 1 0 1\n[steady]\ntol = 1e-9\nmax_time = 60\n");
  const Run r = cli({"steady", "--config", cfg.string(), "--out", dir.path().string(), "--quiet"});
  CHECK(r.code == 0);
  const Report rep = report(dir / "steady.txt");
  CHECK(rep.at("converged") == "true");
  CHECK(std::stod(rep.at("steady_residual")) < 1e-7);

  const Run td = cli({"steady", "--config", write(dir, "td.ini", kSmall).string(), "--out", dir.path().string()});
  CHECK(td.code == 2);
}

TEST_CASE("configuration and usage errors exit 2") {
  test::TempDir dir;
  CHECK(cli({"simulate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"integrate", "--config", "x"}).code == 2);
  CHECK(cli({"simulate", "--config", (dir / "missing.ini").string()}).code == 2);
  const auto bad = write(dir, "bad.ini", "[grid]\nnx = 5\ndt = 0.3\n[physics]\nbeta1 = 0.9\n");
  const Run r = cli({"simulate", "--config", bad.string(), "--out", dir.path().string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("nx must be even") != std::string::npos);
  CHECK(r.err.find("beta1 < beta2") != std::string::npos);
  CHECK(r.err.find("not an integer multiple") != std::string::npos);
  const auto good = write(dir, "good.ini", kSmall);
  CHECK(cli({"simulate", "--config", good.string(), "--seed", "1", "--resume", good.string()}).code == 2);
  CHECK(cli({"simulate", "--config", good.string(), "--out", dir.path().string(), "--resume", good.string()}).code ==
        2);
  CHECK(cli({"simulate", "--help"}).code == 0);
}

TEST_CASE("PEBM_THREADS is validated") {
  test::TempDir dir;
  const auto good = write(dir, "good.ini", kSmall);
  ::setenv("PEBM_THREADS", "zero", 1);
  CHECK(cli({"simulate", "--config", good.string(), "--out", dir.path().string(), "--quiet"}).code == 2);
  ::setenv("PEBM_THREADS", "2", 1);
  CHECK(cli({"simulate", "--config", good.string(), "--out", dir.path().string(), "--quiet"}).code == 0);
  CHECK(max_threads() <= 2);
  ::unsetenv("PEBM_THREADS");
}
