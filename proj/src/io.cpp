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


#include "pebm/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pebm/error.hpp"

namespace pebm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool parse_number(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

bool parse_number(const std::string& s, int& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true") {
    out = true;
    return true;
  }
  if (s == "false") {
    out = false;
    return true;
  }
  return false;
}

bool parse_wave(const std::string& s, Wave& w) {
  if (s == "cos") {
    w = Wave::Cos;
    return true;
  }
  if (s == "sin") {
    w = Wave::Sin;
    return true;
  }
  return false;
}

const char* wave_name(Wave w) { return w == Wave::Cos ? "cos" : "sin"; }

// "f1 = y 1.0 cos 1 cos 1 0 1" and the shorter f2 / f3 forms.
std::string parse_mode(int which, const std::string& value, ForcingMode& m) {
  auto w = split_ws(value);
  std::size_t at = 0;
  const std::size_t expect = which == 1 ? 8 : which == 2 ? 7 : 6;
  if (w.size() != expect)
    return "f" + std::to_string(which) + " needs " + std::to_string(expect) + " fields, got " +
           std::to_string(w.size());
  if (which == 1) {
    if (w[0] == "x")
      m.component = 0;
    else if (w[0] == "y")
      m.component = 1;
    else
      return "f1 component must be x or y, got '" + w[0] + "'";
    at = 1;
  }
  bool ok = parse_number(w[at], m.amplitude) && parse_wave(w[at + 1], m.time_wave) && parse_number(w[at + 2], m.n) &&
            parse_wave(w[at + 3], m.space_wave) && parse_number(w[at + 4], m.kx) && parse_number(w[at + 5], m.ky);
  if (ok && which != 3) ok = parse_number(w[at + 6], m.kz);
  if (!ok) return "malformed f" + std::to_string(which) + " mode '" + value + "'";
  return {};
}

std::string mode_line(int which, const ForcingMode& m) {
  std::string s;
  if (which == 1) s += m.component == 0 ? "x " : "y ";
  s += format_double(m.amplitude) + " " + wave_name(m.time_wave) + " " + std::to_string(m.n) + " " +
       wave_name(m.space_wave) + " " + std::to_string(m.kx) + " " + std::to_string(m.ky);
  if (which != 3) s += " " + std::to_string(m.kz);
  return s;
}

bool parse_acceleration(const std::string& s, OrbitConfig& o) {
  if (s == "picard") {
    o.acceleration = Acceleration::Picard;
    return true;
  }
  if (s == "anderson") {
    o.acceleration = Acceleration::Anderson;
    return true;
  }
  // anderson(m)
  if (s.size() > 10 && s.starts_with("anderson(") && s.back() == ')') {
    int m = 0;
    if (!parse_number(s.substr(9, s.size() - 10), m)) return false;
    o.acceleration = Acceleration::Anderson;
    o.anderson_depth = m;
    return true;
  }
  return false;
}

const char* component_name(int c) {
  static const char* names[] = {"v.x", "v.y", "T", "rho"};
  return c >= 0 && c < 4 ? names[c] : "?";
}

bool parse_component(const std::string& s, int& c) {
  for (int k = 0; k < 4; ++k)
    if (s == component_name(k)) {
      c = k;
      return true;
    }
  return false;
}

// Key handlers per block. Each returns an error message or "".
using Handler = std::string (*)(RunConfig&, const std::string&);

#define PEBM_NUM(field)                                                  \
  [](RunConfig& c, const std::string& v) -> std::string {               \
    return parse_number(v, c.field) ? "" : "not a number: '" + v + "'"; \
  }
#define PEBM_BOOL(field)                                                           \
  [](RunConfig& c, const std::string& v) -> std::string {                         \
    return parse_bool(v, c.field) ? "" : "expected true or false, got '" + v + "'"; \
  }

const std::map<std::string, std::map<std::string, Handler>>& handlers() {
  static const std::map<std::string, std::map<std::string, Handler>> h = {
      {"grid", {{"nx", PEBM_NUM(nx)}, {"ny", PEBM_NUM(ny)}, {"nz", PEBM_NUM(nz)}, {"dt", PEBM_NUM(dt)}}},
      {"physics",
       {{"beta1", PEBM_NUM(beta1)},
        {"beta2", PEBM_NUM(beta2)},
        {"rho_ref", PEBM_NUM(rho_ref)},
        {"q0", PEBM_NUM(solar.q0)},
        {"q1", PEBM_NUM(solar.q1)}}},
      {"forcing",
       {{"period", PEBM_NUM(forcing.period)},
        {"f1",
         [](RunConfig& c, const std::string& v) {
           ForcingMode m;
           std::string e = parse_mode(1, v, m);
           if (e.empty()) c.forcing.f1.push_back(m);
           return e;
         }},
        {"f2",
         [](RunConfig& c, const std::string& v) {
           ForcingMode m;
           std::string e = parse_mode(2, v, m);
           if (e.empty()) c.forcing.f2.push_back(m);
           return e;
         }},
        {"f3", [](RunConfig& c, const std::string& v) {
           ForcingMode m;
           std::string e = parse_mode(3, v, m);
           if (e.empty()) c.forcing.f3.push_back(m);
           return e;
         }}}},
      {"stepper",
       {{"scheme",
         [](RunConfig& c, const std::string& v) -> std::string {
           try {
             c.stepper.scheme = parse_scheme(v);
           } catch (const ConfigError& e) {
             return e.what();
           }
           return {};
         }},
        {"dealias", PEBM_BOOL(stepper.dealias)},
        {"blowup_threshold", PEBM_NUM(stepper.blowup_threshold)},
        {"advection", PEBM_BOOL(stepper.advection)},
        {"reaction", PEBM_BOOL(stepper.reaction)},
        {"hydrostatic", PEBM_BOOL(stepper.hydrostatic)},
        {"t_end", PEBM_NUM(t_end)}}},
      {"orbit",
       {{"tol", PEBM_NUM(orbit.tol)},
        {"max_iters", PEBM_NUM(orbit.max_iters)},
        {"acceleration",
         [](RunConfig& c, const std::string& v) -> std::string {
           return parse_acceleration(v, c.orbit) ? "" : "acceleration must be picard, anderson or anderson(m)";
         }},
        {"anderson_depth", PEBM_NUM(orbit.anderson_depth)},
        {"ball_radius_mode", [](RunConfig& c, const std::string& v) -> std::string {
           if (v != "gronwall" && v != "off") return "ball_radius_mode must be gronwall or off";
           c.orbit.ball_monitor = v == "gronwall";
           return {};
         }}}},
      {"steady",
       {{"tol", PEBM_NUM(steady.tol)},
        {"interval", PEBM_NUM(steady.interval)},
        {"max_time", PEBM_NUM(steady.max_time)}}},
      {"initial",
       {{"amplitude", PEBM_NUM(amplitude)},
        {"max_mode", PEBM_NUM(max_mode)},
        {"ws_periods", PEBM_NUM(ws_periods)},
        {"perturbation", [](RunConfig& c, const std::string& v) -> std::string {
           auto w = split_ws(v);
           PerturbationSpec p;
           if (w.size() != 4 || !parse_component(w[0], p.component) || !parse_number(w[1], p.kx) ||
               !parse_number(w[2], p.ky) || !parse_number(w[3], p.amplitude))
             return "perturbation must be '<v.x|v.y|T|rho> <kx> <ky> <amplitude>'";
           c.perturbation = p;
           return {};
         }}}},
      {"output",
       {{"trace",
         [](RunConfig& c, const std::string& v) -> std::string {
           c.trace = v;
           return {};
         }},
        {"snapshot_every", PEBM_NUM(snapshot_every)}}},
  };
  return h;
}

#undef PEBM_NUM
#undef PEBM_BOOL

bool whole_multiple(double span, double dt) {
  try {
    steps_for(span, dt);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

// ---------------------------------------------------------------------------
// Config

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> errors;
  auto absorb = [&](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.violations().begin(), e.violations().end());
    }
  };
  absorb([&] { make_grid(c.nx, c.ny, c.nz, c.dt); });
  // Physics checks need a grid to sample Q on; fall back to a small valid one.
  const bool grid_ok = c.nx >= 4 && c.nx % 2 == 0 && c.ny >= 4 && c.ny % 2 == 0 && c.nz >= 3 && c.dt > 0.0;
  const Grid probe = grid_ok ? c.grid() : make_grid(8, 8, 4, 1e-3);
  absorb([&] { make_physics(probe, c.beta1, c.beta2, c.rho_ref, c.solar); });
  validate_forcing(c.forcing, errors);
  auto resolvable = [&](const std::vector<ForcingMode>& list, const char* name) {
    for (const auto& m : list)
      if (std::abs(m.kx) >= c.nx / 2 || std::abs(m.ky) >= c.ny / 2 || m.kz >= c.nz)
        errors.push_back(std::string(name) + ": mode (" + std::to_string(m.kx) + ", " + std::to_string(m.ky) + ", " +
                         std::to_string(m.kz) + ") is not resolved by the grid");
  };
  resolvable(c.forcing.f1, "f1");
  resolvable(c.forcing.f2, "f2");
  resolvable(c.forcing.f3, "f3");
  if (c.dt > 0.0 && c.forcing.period > 0.0 && !whole_multiple(c.forcing.period, c.dt))
    errors.push_back("forcing period T* = " + format_double(c.forcing.period) +
                     " is not an integer multiple of dt = " + format_double(c.dt));
  if (c.t_end < 0.0) errors.push_back("t_end must be >= 0");
  if (c.t_end > 0.0 && c.dt > 0.0 && !whole_multiple(c.t_end, c.dt))
    errors.push_back("t_end is not an integer multiple of dt");
  if (!(c.stepper.blowup_threshold > 0.0)) errors.push_back("blowup_threshold must be > 0");
  if (!(c.orbit.tol > 0.0)) errors.push_back("orbit tol must be > 0");
  if (c.orbit.max_iters < 1) errors.push_back("orbit max_iters must be >= 1");
  if (c.orbit.anderson_depth < 1) errors.push_back("anderson depth must be >= 1");
  if (!(c.steady.tol > 0.0)) errors.push_back("steady tol must be > 0");
  if (!(c.steady.max_time > 0.0)) errors.push_back("steady max_time must be > 0");
  if (!(c.steady.interval > 0.0) || (c.dt > 0.0 && !whole_multiple(c.steady.interval, c.dt)))
    errors.push_back("steady interval must be a positive integer multiple of dt");
  if (!(c.amplitude >= 0.0)) errors.push_back("initial amplitude must be >= 0");
  if (c.max_mode < 0) errors.push_back("initial max_mode must be >= 0");
  if (c.ws_periods < 1) errors.push_back("ws_periods must be >= 1");
  if (!std::isfinite(c.perturbation.amplitude)) errors.push_back("perturbation amplitude must be finite");
  if (c.snapshot_every < 0) errors.push_back("snapshot_every must be >= 0");
  if (c.trace.empty()) errors.push_back("output trace path is empty");
  return errors;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  std::vector<std::string> errors;
  std::string block;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    errors.push_back(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        fail("unterminated block header");
        continue;
      }
      block = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!handlers().contains(block)) fail("unknown block [" + block + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      fail("expected key = value");
      continue;
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (block.empty()) {
      fail("key '" + key + "' outside any block");
      continue;
    }
    const auto b = handlers().find(block);
    if (b == handlers().end()) continue;  // already reported
    const auto h = b->second.find(key);
    if (h == b->second.end()) {
      fail("unknown key '" + key + "' in [" + block + "]");
      continue;
    }
    const bool repeatable = block == "forcing" && key.size() == 2 && key[0] == 'f';
    if (!repeatable && !seen.insert(block + "." + key).second) {
      fail("duplicate key '" + key + "' in [" + block + "]");
      continue;
    }
    if (value.empty()) {
      fail("empty value for '" + key + "'");
      continue;
    }
    const std::string e = h->second(c, value);
    if (!e.empty()) fail(key + ": " + e);
  }
  if (in.bad()) errors.push_back(source + ": read error");
  if (!seen.contains("steady.interval")) c.steady.interval = 100.0 * c.dt;
  for (auto& e : validate_config(c)) errors.push_back(source + ": " + e);
  if (!errors.empty()) throw ConfigError(errors);
  c.orbit.period = c.forcing.period;
  c.stepper.dt = c.dt;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

void write_config(std::ostream& out, const RunConfig& c) {
  auto num = [](double x) { return format_double(x); };
  auto flag = [](bool b) { return b ? "true" : "false"; };
  out << "[grid]\n"
      << "nx = " << c.nx << "\nny = " << c.ny << "\nnz = " << c.nz << "\ndt = " << num(c.dt) << "\n\n";
  out << "[physics]\n"
      << "beta1 = " << num(c.beta1) << "\nbeta2 = " << num(c.beta2) << "\nrho_ref = " << num(c.rho_ref)
      << "\nq0 = " << num(c.solar.q0) << "\nq1 = " << num(c.solar.q1) << "\n\n";
  out << "[forcing]\nperiod = " << num(c.forcing.period) << "\n";
  for (const auto& m : c.forcing.f1) out << "f1 = " << mode_line(1, m) << "\n";
  for (const auto& m : c.forcing.f2) out << "f2 = " << mode_line(2, m) << "\n";
  for (const auto& m : c.forcing.f3) out << "f3 = " << mode_line(3, m) << "\n";
  out << "\n[stepper]\n"
      << "scheme = " << to_string(c.stepper.scheme) << "\ndealias = " << flag(c.stepper.dealias)
      << "\nblowup_threshold = " << num(c.stepper.blowup_threshold) << "\nadvection = " << flag(c.stepper.advection)
      << "\nreaction = " << flag(c.stepper.reaction) << "\nhydrostatic = " << flag(c.stepper.hydrostatic)
      << "\nt_end = " << num(c.t_end) << "\n\n";
  out << "[orbit]\n"
      << "tol = " << num(c.orbit.tol) << "\nmax_iters = " << c.orbit.max_iters << "\nacceleration = "
      << (c.orbit.acceleration == Acceleration::Picard ? "picard" : "anderson")
      << "\nanderson_depth = " << c.orbit.anderson_depth
      << "\nball_radius_mode = " << (c.orbit.ball_monitor ? "gronwall" : "off") << "\n\n";
  out << "[steady]\n"
      << "tol = " << num(c.steady.tol) << "\ninterval = " << num(c.steady.interval)
      << "\nmax_time = " << num(c.steady.max_time) << "\n\n";
  out << "[initial]\n"
      << "amplitude = " << num(c.amplitude) << "\nmax_mode = " << c.max_mode << "\nperturbation = "
      << component_name(c.perturbation.component) << " " << c.perturbation.kx << " " << c.perturbation.ky << " "
      << num(c.perturbation.amplitude) << "\nws_periods = " << c.ws_periods << "\n\n";
  out << "[output]\n"
      << "trace = " << c.trace << "\nsnapshot_every = " << c.snapshot_every << "\n";
}

void save_config(const std::filesystem::path& path, const RunConfig& c) {
  std::ostringstream out;
  write_config(out, c);
  save_text(path, out.str());
}

bool same_config(const RunConfig& a, const RunConfig& b) {
  const auto& sa = a.stepper;
  const auto& sb = b.stepper;
  const auto& oa = a.orbit;
  const auto& ob = b.orbit;
  return a.nx == b.nx && a.ny == b.ny && a.nz == b.nz && a.dt == b.dt && a.beta1 == b.beta1 && a.beta2 == b.beta2 &&
         a.rho_ref == b.rho_ref && a.solar.q0 == b.solar.q0 && a.solar.q1 == b.solar.q1 &&
         a.forcing.period == b.forcing.period && a.forcing.f1 == b.forcing.f1 && a.forcing.f2 == b.forcing.f2 &&
         a.forcing.f3 == b.forcing.f3 && sa.scheme == sb.scheme && sa.dealias == sb.dealias &&
         sa.blowup_threshold == sb.blowup_threshold && sa.advection == sb.advection && sa.reaction == sb.reaction &&
         sa.hydrostatic == sb.hydrostatic && a.t_end == b.t_end && oa.tol == ob.tol &&
         oa.max_iters == ob.max_iters && oa.acceleration == ob.acceleration &&
         oa.anderson_depth == ob.anderson_depth && oa.ball_monitor == ob.ball_monitor &&
         a.steady.tol == b.steady.tol && a.steady.interval == b.steady.interval &&
         a.steady.max_time == b.steady.max_time && a.amplitude == b.amplitude && a.max_mode == b.max_mode &&
         a.perturbation == b.perturbation && a.ws_periods == b.ws_periods && a.trace == b.trace &&
         a.snapshot_every == b.snapshot_every;
}

// ---------------------------------------------------------------------------
// Snapshots

std::uint64_t fnv1a64(const unsigned char* data, std::size_t n, std::uint64_t h) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& b, double x) { put_u64(b, std::bit_cast<std::uint64_t>(x)); }

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 8;

}  // namespace

void write_snapshot(std::ostream& out, const State& s) {
  std::string b;
  b.reserve(kHeaderBytes + 8 * (3 * s.T.size() + s.rho.size()) + 8);
  b += "PEBM";
  put_u32(b, kSnapshotVersion);
  put_u32(b, static_cast<std::uint32_t>(s.T.nx()));
  put_u32(b, static_cast<std::uint32_t>(s.T.ny()));
  put_u32(b, static_cast<std::uint32_t>(s.T.levels()));
  put_f64(b, s.t);
  for (const Field* f : {&s.v.x, &s.v.y, &s.T, &s.rho})
    for (double x : f->values()) put_f64(b, x);
  put_u64(b, fnv1a64(reinterpret_cast<const unsigned char*>(b.data()), b.size()));
  out.write(b.data(), static_cast<std::streamsize>(b.size()));
  if (!out) throw FormatError("snapshot write failed");
}

State read_snapshot(std::istream& in, const Grid& g) {
  const std::string b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(b.data());
  if (b.size() < 4 || b.compare(0, 4, "PEBM") != 0) throw FormatError("bad magic: not a PEBM snapshot");
  if (b.size() < kHeaderBytes) throw FormatError("checksum failure: truncated header");
  const auto version = static_cast<std::uint32_t>(get_le(p + 4, 4));
  if (version != kSnapshotVersion)
    throw FormatError("unsupported snapshot version " + std::to_string(version) + " (expected " +
                      std::to_string(kSnapshotVersion) + ")");
  const std::uint64_t nx = get_le(p + 8, 4), ny = get_le(p + 12, 4), nz = get_le(p + 16, 4);
  const std::uint64_t plane = nx * ny;
  const std::uint64_t values = plane * (3 * nz + 1);
  const std::uint64_t expect = kHeaderBytes + 8 * values + 8;
  if (b.size() < expect)
    throw FormatError("checksum failure: truncated snapshot (" + std::to_string(b.size()) + " of " +
                      std::to_string(expect) + " bytes)");
  if (b.size() > expect) throw FormatError("snapshot has trailing bytes");
  const std::uint64_t stored = get_le(p + expect - 8, 8);
  if (stored != fnv1a64(p, expect - 8)) throw FormatError("checksum failure: payload does not match its checksum");
  if (nx != static_cast<std::uint64_t>(g.nx) || ny != static_cast<std::uint64_t>(g.ny) ||
      nz != static_cast<std::uint64_t>(g.nz))
    throw ShapeError("snapshot grid " + std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nz) +
                     " does not match " + std::to_string(g.nx) + "x" + std::to_string(g.ny) + "x" +
                     std::to_string(g.nz));
  State s = State::zero(g, std::bit_cast<double>(get_le(p + 20, 8)));
  std::size_t at = kHeaderBytes;
  for (Field* f : {&s.v.x, &s.v.y, &s.T, &s.rho})
    for (double& x : f->values()) {
      x = std::bit_cast<double>(get_le(p + at, 8));
      at += 8;
    }
  return s;
}

void save_snapshot(const std::filesystem::path& path, const State& s) {
  std::ostringstream out;
  write_snapshot(out, s);
  save_text(path, out.str());
}

State load_snapshot(const std::filesystem::path& path, const Grid& g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot " + path.string());
  return read_snapshot(in, g);
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw FormatError("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

template <std::size_t N>
void expect_header(std::istream& in, const std::array<std::string_view, N>& cols) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV");
  const auto got = split_csv(line);
  bool ok = got.size() == N;
  for (std::size_t i = 0; ok && i < N; ++i) ok = got[i] == cols[i];
  if (!ok) throw FormatError("unexpected CSV header: " + line);
}

template <std::size_t N>
std::vector<std::array<double, N>> read_rows(std::istream& in) {
  std::vector<std::array<double, N>> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != N)
      throw FormatError("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(N) + " fields, got " +
                        std::to_string(f.size()));
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i)
      if (!parse_number(f[i], r[i]))
        throw FormatError("CSV line " + std::to_string(lineno) + ": bad number '" + f[i] + "'");
    rows.push_back(r);
  }
  return rows;
}

template <std::size_t N>
void write_header(std::ostream& out, const std::array<std::string_view, N>& cols) {
  for (std::size_t i = 0; i < N; ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
}

}  // namespace

void write_energy_csv(std::ostream& out, const EnergyTrace& trace) {
  write_header(out, kEnergyTraceColumns);
  for (const StepRecord& r : trace.rows) {
    const double v[] = {r.t,          r.norm_v_sq,        r.norm_T_sq,   r.norm_rho_sq,    r.grad_v_sq,
                        r.grad_T_sq,  r.grad_rho_sq,      r.rho_l5_pow5, r.work_v,         r.work_T,
                        r.work_rho,   r.forcing_sq,       r.step_dissipation, r.step_work, r.step_advection,
                        r.step_numerical, r.energy()};
    for (std::size_t i = 0; i < std::size(v); ++i) out << (i ? "," : "") << format_double(v[i]);
    out << "\n";
  }
}

EnergyTrace read_energy_csv(std::istream& in) {
  expect_header(in, kEnergyTraceColumns);
  EnergyTrace tr;
  for (const auto& v : read_rows<kEnergyTraceColumns.size()>(in)) {
    StepRecord r;
    r.t = v[0];
    r.norm_v_sq = v[1];
    r.norm_T_sq = v[2];
    r.norm_rho_sq = v[3];
    r.grad_v_sq = v[4];
    r.grad_T_sq = v[5];
    r.grad_rho_sq = v[6];
    r.rho_l5_pow5 = v[7];
    r.work_v = v[8];
    r.work_T = v[9];
    r.work_rho = v[10];
    r.forcing_sq = v[11];
    r.step_dissipation = v[12];
    r.step_work = v[13];
    r.step_advection = v[14];
    r.step_numerical = v[15];
    if (std::abs(r.energy() - v[16]) > 1e-12 * std::max(1.0, std::abs(v[16])))
      throw FormatError("energy column does not match the norm columns at t = " + format_double(r.t));
    for (double x : {r.norm_v_sq, r.norm_T_sq, r.norm_rho_sq, r.grad_v_sq, r.grad_T_sq, r.grad_rho_sq, r.rho_l5_pow5})
      if (x < 0.0) throw FormatError("negative norm entry at t = " + format_double(r.t));
    tr.rows.push_back(r);
  }
  return tr;
}

void write_difference_csv(std::ostream& out, const DifferenceTrace& trace) {
  write_header(out, kDifferenceColumns);
  for (const DifferenceRow& r : trace.rows) {
    const double v[] = {r.t, r.sigma_v_sq, r.sigma_T_sq, r.sigma_rho_sq, r.dissipation, r.g, r.int_g, r.sigma_sq()};
    for (std::size_t i = 0; i < std::size(v); ++i) out << (i ? "," : "") << format_double(v[i]);
    out << "\n";
  }
}

DifferenceTrace read_difference_csv(std::istream& in) {
  expect_header(in, kDifferenceColumns);
  DifferenceTrace tr;
  for (const auto& v : read_rows<kDifferenceColumns.size()>(in)) {
    DifferenceRow r{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] < 0.0) throw FormatError("negative entry in difference trace at t = " + format_double(r.t));
    tr.rows.push_back(r);
  }
  return tr;
}

void write_residual_csv(std::ostream& out, const OrbitResult& r) {
  out << "iteration,residual,y\n";
  for (std::size_t k = 0; k < r.residual_history.size(); ++k)
    out << k << "," << format_double(r.residual_history[k]) << ","
        << format_double(k < r.y_history.size() ? r.y_history[k] : 0.0) << "\n";
}

// ---------------------------------------------------------------------------
// Reports

void Report::number(const std::string& key, double value) { text(key, format_double(value)); }

const std::string& Report::at(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  throw FormatError("report has no entry '" + key + "'");
}

std::string Report::str() const {
  std::string out;
  for (const auto& [k, v] : entries) out += k + ": " + v + "\n";
  return out;
}

Report parse_report(std::istream& in) {
  Report r;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto c = line.find(": ");
    if (c == std::string::npos) throw FormatError("report line " + std::to_string(lineno) + ": expected 'key: value'");
    r.text(line.substr(0, c), trim(std::string_view(line).substr(c + 2)));
  }
  return r;
}

}  // namespace pebm
