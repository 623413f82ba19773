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


/// @file io.hpp
/// @brief Run configuration files, binary state snapshots and CSV traces.
///
/// Config files are plain text: `[block]` headers followed by `key = value`
/// lines, `#` starts a comment. Forcing modes are one line each:
///
///   f1 = <x|y> <amp> <cos|sin> <n> <cos|sin> <kx> <ky> <kz>
///   f2 = <amp> <cos|sin> <n> <cos|sin> <kx> <ky> <kz>
///   f3 = <amp> <cos|sin> <n> <cos|sin> <kx> <ky>
///
/// The first wave/n pair is the time factor, the second the horizontal one.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pebm/diagnostics.hpp"
#include "pebm/orbit.hpp"

namespace pebm {

struct PerturbationSpec {
  int component = 2;  // 0 = v.x, 1 = v.y, 2 = T, 3 = rho
  int kx = 1;
  int ky = 0;
  double amplitude = 1e-6;

  bool operator==(const PerturbationSpec&) const = default;
};

struct RunConfig {
  // [grid]
  int nx = 16;
  int ny = 16;
  int nz = 8;
  double dt = 1e-3;
  // [physics]
  double beta1 = 0.3;
  double beta2 = 0.7;
  double rho_ref = 263.0;
  SolarSpec solar;
  // [forcing]; forcing.period is T*
  Forcing forcing;
  // [stepper]
  StepperConfig stepper;
  double t_end = 0.0;  // simulate / check-energy horizon; 0 means one period
  // [orbit]; period is taken from the forcing
  OrbitConfig orbit;
  // [steady]; interval defaults to 100 dt when the file does not set it
  SteadyConfig steady;
  // [initial]
  double amplitude = 0.1;
  int max_mode = 2;
  PerturbationSpec perturbation;
  int ws_periods = 2;
  // [output]
  std::string trace = "energy.csv";
  int snapshot_every = 0;  // steps between snapshots; 0 writes only the final state

  double horizon() const { return t_end > 0.0 ? t_end : forcing.period; }
  Grid grid() const { return make_grid(nx, ny, nz, dt); }
  PhysicsParams physics(const Grid& g) const { return make_physics(g, beta1, beta2, rho_ref, solar); }
};

/// Semantic equality (what a save/load round trip has to preserve).
bool same_config(const RunConfig& a, const RunConfig& b);

/// Parses and validates. Throws ConfigError carrying every parse error
/// (with its line number) and every violated invariant.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

void write_config(std::ostream& out, const RunConfig& c);
void save_config(const std::filesystem::path& path, const RunConfig& c);

/// Every violated invariant of an already parsed config; empty when valid.
std::vector<std::string> validate_config(const RunConfig& c);

// ---------------------------------------------------------------------------
// Snapshots
//
//   "PEBM" | u32 version | u32 nx | u32 ny | u32 nz | f64 t |
//   v.x, v.y, T (nz planes each), rho (one plane) | u64 FNV-1a of all bytes before it
//
// Little-endian throughout; each field is row-major [k][i][j].

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const State& s);
/// Throws FormatError on bad magic, version, truncation or checksum; ShapeError
/// when the stored grid differs from `g`.
State read_snapshot(std::istream& in, const Grid& g);

/// Writes through a temporary file and renames, so no partial file is left.
void save_snapshot(const std::filesystem::path& path, const State& s);
State load_snapshot(const std::filesystem::path& path, const Grid& g);

std::uint64_t fnv1a64(const unsigned char* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL);

// ---------------------------------------------------------------------------
// CSV

void write_energy_csv(std::ostream& out, const EnergyTrace& trace);
/// Requires the exact header of write_energy_csv; the derived `energy`
/// column is checked against the sum of the norms.
EnergyTrace read_energy_csv(std::istream& in);

inline constexpr std::array<std::string_view, 8> kDifferenceColumns = {
    "t", "sigma_v_sq", "sigma_T_sq", "sigma_rho_sq", "dissipation", "g", "int_g", "sigma_sq"};
void write_difference_csv(std::ostream& out, const DifferenceTrace& trace);
DifferenceTrace read_difference_csv(std::istream& in);

/// Columns: iteration, residual, y.
void write_residual_csv(std::ostream& out, const OrbitResult& r);

void save_text(const std::filesystem::path& path, const std::string& text);

// ---------------------------------------------------------------------------
// Certificates: `key: value` lines.

struct Report {
  std::vector<std::pair<std::string, std::string>> entries;

  void text(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  void number(const std::string& key, double value);
  void count(const std::string& key, long long value) { text(key, std::to_string(value)); }
  void flag(const std::string& key, bool value) { text(key, value ? "true" : "false"); }
  /// Value of the first entry named `key`; throws FormatError when absent.
  const std::string& at(const std::string& key) const;
  std::string str() const;
};

/// Parses `key: value` lines back into a Report.
Report parse_report(std::istream& in);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace pebm
