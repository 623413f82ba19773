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


// Serial reference against the OpenMP path for the column solves, the
// advection products and a full step. Arguments: nx (= ny), nz.

#include <benchmark/benchmark.h>

#include "pebm/fields.hpp"
#include "pebm/initial.hpp"
#include "pebm/kernels.hpp"
#include "pebm/stepper.hpp"

namespace {

using namespace pebm;

Exec exec_of(const benchmark::State& st) { return st.range(2) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& st) { st.SetLabel(st.range(2) == 0 ? "serial" : "parallel"); }

void BM_HeatColumns(benchmark::State& st) {
  const Grid g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)),
                           static_cast<int>(st.range(1)), 1e-3);
  const State s = random_state(g, {.seed = 1});
  const Spectrum T0 = fft_h(g, s.T), rho0 = fft_h(g, s.rho);
  Spectrum T, rho;
  for (auto _ : st) {
    T = T0;
    rho = rho0;
    kernels::solve_heat_columns(g, 1e-3, T, rho, exec_of(st));
    benchmark::DoNotOptimize(T);
  }
  label(st);
}

void BM_VelocityColumns(benchmark::State& st) {
  const Grid g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)),
                           static_cast<int>(st.range(1)), 1e-3);
  const State s = random_state(g, {.seed = 1});
  const Spectrum v0 = fft_h(g, s.v.x);
  Spectrum v;
  for (auto _ : st) {
    v = v0;
    kernels::solve_velocity_columns(g, 1e-3, v, exec_of(st));
    benchmark::DoNotOptimize(v);
  }
  label(st);
}

void BM_Advection(benchmark::State& st) {
  const Grid g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)),
                           static_cast<int>(st.range(1)), 1e-3);
  const State s = random_state(g, {.seed = 1});
  const Exec exec = exec_of(st);
  for (auto _ : st) {
    const Field w = compute_w(g, s.v, exec);
    benchmark::DoNotOptimize(advection_v(g, s.v, w, true, exec));
    benchmark::DoNotOptimize(advection_T(g, s.v, w, s.T, true, exec));
  }
  label(st);
}

void BM_Step(benchmark::State& st) {
  const Grid g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)),
                           static_cast<int>(st.range(1)), 1e-3);
  const PhysicsParams p = make_physics(g, 0.3, 0.7, 1.0, {4.0, 0.2});
  const ModeForcing forcing(Forcing{});
  StepperConfig cfg;
  cfg.exec = exec_of(st);
  Stepper stepper(g, forcing, p, cfg);
  State s = random_state(g, {.seed = 1});
  for (auto _ : st) {
    stepper.step(s);
    benchmark::DoNotOptimize(s);
  }
  label(st);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (auto [n, nz] : {std::pair{16, 8}, {32, 16}, {64, 32}})
    for (int par : {0, 1}) b->Args({n, nz, par});
}

}  // namespace

BENCHMARK(BM_HeatColumns)->Apply(sizes);
BENCHMARK(BM_VelocityColumns)->Apply(sizes);
BENCHMARK(BM_Advection)->Apply(sizes);
BENCHMARK(BM_Step)->Apply(sizes);

BENCHMARK_MAIN();
