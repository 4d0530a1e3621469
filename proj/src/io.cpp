#include "euler2d/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "euler2d/error.hpp"

namespace euler2d::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_uint(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

enum class ValueType { Real, Count, Text, Exponents };

struct KeySpec {
  ValueType type;
  bool required;
};

const std::map<std::string, KeySpec>& known_keys() {
  static const std::map<std::string, KeySpec> keys{
      {"domain.L1", {ValueType::Real, true}},        {"domain.L2", {ValueType::Real, true}},
      {"grid.n1", {ValueType::Count, true}},         {"grid.n2", {ValueType::Count, true}},
      {"time.dt", {ValueType::Real, true}},          {"time.T", {ValueType::Real, true}},
      {"initial.preset", {ValueType::Text, true}},   {"initial.amplitude", {ValueType::Real, false}},
      {"initial.modes", {ValueType::Count, false}},  {"initial.j", {ValueType::Count, false}},
      {"initial.k", {ValueType::Count, false}},      {"initial.path", {ValueType::Text, false}},
      {"forcing.preset", {ValueType::Text, false}},  {"forcing.amplitude", {ValueType::Real, false}},
      {"forcing.ramp", {ValueType::Real, false}},    {"diagnostics.p_list", {ValueType::Exponents, false}},
      {"diagnostics.every", {ValueType::Count, false}}, {"diagnostics.ll_pairs", {ValueType::Count, false}},
      {"seed", {ValueType::Count, false}},
  };
  return keys;
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_f64(std::vector<unsigned char>& out, double v) { 
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

std::vector<unsigned char> encode(const Grid& g, FieldKind kind, double time,
                                  std::initializer_list<const ScalarField*> parts) {
  require(g.n1() <= 0xffffffffu && g.n2() <= 0xffffffffu, "snapshot dimensions exceed 32 bits");
  std::vector<unsigned char> out;
  out.reserve(snapshot_header_bytes + parts.size() * g.size() * 8);
  for (char c : {'E', 'U', 'L', '2'}) out.push_back(static_cast<unsigned char>(c));
  put_u32(out, snapshot_version);
  put_u32(out, static_cast<std::uint32_t>(g.n1()));
  put_u32(out, static_cast<std::uint32_t>(g.n2()));
  put_f64(out, g.rect().L1);
  put_f64(out, g.rect().L2);
  put_u32(out, static_cast<std::uint32_t>(kind));
  put_f64(out, time);
  for (const ScalarField* f : parts)
    for (double v : f->values()) put_f64(out, v);
  return out;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

}  // namespace

std::string ConfigResult::error_text() const {
  std::ostringstream os;
  for (const auto& e : errors) {
    if (e.line > 0) os << "line " << e.line << ": ";
    os << e.message << "\n";
  }
  return os.str();
}

std::optional<std::vector<double>> parse_p_list(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    auto v = to_double(tok);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

ConfigResult parse_config(const std::string& text) {
  ConfigResult res;
  std::map<std::string, std::pair<std::string, std::size_t>> values;
  std::istringstream is(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      res.errors.push_back({lineno, "", "expected 'key = value', got '" + trim(line) + "'"});
      continue;
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!known_keys().count(key)) {
      res.errors.push_back({lineno, key, "unknown key '" + key + "'"});
      continue;
    }
    if (auto it = values.find(key); it != values.end()) {
      res.errors.push_back({lineno, key, "duplicate key '" + key + "' (lines " + std::to_string(it->second.second) +
                                             " and " + std::to_string(lineno) + ")"});
      continue;
    }
    if (value.empty()) {
      res.errors.push_back({lineno, key, "missing value for '" + key + "'"});
      continue;
    }
    values[key] = {value, lineno};
  }
  for (const auto& [key, spec] : known_keys())
    if (spec.required && !values.count(key)) res.errors.push_back({0, key, "missing required key '" + key + "'"});

  solver::SimConfig cfg;
  auto real = [&](const std::string& key, double& dst) {
    auto it = values.find(key);
    if (it == values.end()) return;
    if (auto v = to_double(it->second.first))
      dst = *v;
    else
      res.errors.push_back({it->second.second, key, "'" + key + "' expects a number, got '" + it->second.first + "'"});
  };
  auto count = [&](const std::string& key, auto& dst) {
    auto it = values.find(key);
    if (it == values.end()) return;
    if (auto v = to_uint(it->second.first))
      dst = static_cast<std::remove_reference_t<decltype(dst)>>(*v);
    else
      res.errors.push_back({it->second.second, key,
                            "'" + key + "' expects a non-negative integer, got '" + it->second.first + "'"});
  };
  auto text_value = [&](const std::string& key, std::string& dst) {
    if (auto it = values.find(key); it != values.end()) dst = it->second.first;
  };
  real("domain.L1", cfg.rect.L1);
  real("domain.L2", cfg.rect.L2);
  count("grid.n1", cfg.n1);
  count("grid.n2", cfg.n2);
  real("time.dt", cfg.dt);
  real("time.T", cfg.T);
  text_value("initial.preset", cfg.initial.preset);
  real("initial.amplitude", cfg.initial.amplitude);
  count("initial.modes", cfg.initial.modes);
  count("initial.j", cfg.initial.j);
  count("initial.k", cfg.initial.k);
  text_value("initial.path", cfg.initial.path);
  text_value("forcing.preset", cfg.forcing.preset);
  real("forcing.amplitude", cfg.forcing.amplitude);
  real("forcing.ramp", cfg.forcing.ramp);
  count("diagnostics.every", cfg.record_every);
  count("diagnostics.ll_pairs", cfg.ll_pairs);
  count("seed", cfg.seed);
  if (auto it = values.find("diagnostics.p_list"); it != values.end()) {
    if (auto p = parse_p_list(it->second.first))
      cfg.p_list = *p;
    else
      res.errors.push_back({it->second.second, "diagnostics.p_list", "'diagnostics.p_list' expects numbers or inf"});
  }
  if (!res.errors.empty()) return res;

  for (const auto& problem : cfg.problems()) {
    const std::string key = problem.substr(0, problem.find(' '));
    std::size_t line = 0;
    if (auto it = values.find(key); it != values.end()) line = it->second.second;
    res.errors.push_back({line, key, problem});
  }
  if (res.errors.empty()) res.config = cfg;
  return res;
}

ConfigResult parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::vector<unsigned char> encode_snapshot(const ScalarField& f, double time) {
  return encode(f.grid(), FieldKind::Scalar, time, {&f});
}

std::vector<unsigned char> encode_snapshot(const VectorField& u, double time) {
  require(u.u1.grid() == u.u2.grid(), "vector components live on different grids");
  return encode(u.grid(), FieldKind::Vector, time, {&u.u1, &u.u2});
}

Snapshot decode_snapshot(const std::vector<unsigned char>& bytes, const std::string& source) {
  auto fail = [&](std::size_t offset, const std::string& what) -> Snapshot {
    throw IoError(source + ": " + what + " at byte offset " + std::to_string(offset));
  };
  if (bytes.size() < snapshot_header_bytes)
    return fail(bytes.size(), "truncated header (" + std::to_string(bytes.size()) + " of " +
                                  std::to_string(snapshot_header_bytes) + " bytes)");
  if (std::memcmp(bytes.data(), "EUL2", 4) != 0) return fail(0, "bad magic");
  const unsigned char* p = bytes.data();
  const auto version = static_cast<std::uint32_t>(get_le(p + 4, 4));
  if (version != snapshot_version) return fail(4, "unsupported version " + std::to_string(version));
  const auto n1 = static_cast<std::size_t>(get_le(p + 8, 4));
  const auto n2 = static_cast<std::size_t>(get_le(p + 12, 4));
  const double L1 = std::bit_cast<double>(get_le(p + 16, 8));
  const double L2 = std::bit_cast<double>(get_le(p + 24, 8));
  const auto kind = static_cast<std::uint32_t>(get_le(p + 32, 4));
  const double time = std::bit_cast<double>(get_le(p + 36, 8));
  if (n1 == 0 || n2 == 0) return fail(8, "empty grid");
  if (!(L1 > 0.0) || !(L2 > 0.0) || !std::isfinite(L1) || !std::isfinite(L2)) return fail(16, "bad rectangle");
  if (kind > 1) return fail(32, "unknown field kind " + std::to_string(kind));
  const std::size_t parts = kind == 1 ? 2 : 1;
  const std::size_t want = snapshot_header_bytes + parts * n1 * n2 * 8;
  if (bytes.size() < want)
    return fail(bytes.size(), "truncated payload (expected " + std::to_string(want) + " bytes)");
  if (bytes.size() > want) return fail(want, "trailing bytes after payload");

  Grid grid(Rectangle(L1, L2), n1, n2);
  Snapshot s;
  s.kind = static_cast<FieldKind>(kind);
  s.time = time;
  auto read_part = [&](std::size_t part) {
    std::vector<double> v(n1 * n2);
    const unsigned char* q = p + snapshot_header_bytes + part * n1 * n2 * 8;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::bit_cast<double>(get_le(q + 8 * i, 8));
    return ScalarField(grid, std::move(v));
  };
  s.field = read_part(0);
  if (parts == 2) s.second = read_part(1);
  return s;
}

namespace {

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

void write_snapshot(const std::string& path, const ScalarField& f, double time) {
  write_bytes(path, encode_snapshot(f, time));
}

void write_snapshot(const std::string& path, const VectorField& u, double time) {
  write_bytes(path, encode_snapshot(u, time));
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes, path);
}

void write_diagnostics_csv(const std::string& path, const std::vector<solver::DiagnosticsRecord>& records,
                           const std::vector<double>& p_list) {
  const double fixed[] = {2.0, 4.0, 8.0, std::numeric_limits<double>::infinity()};
  std::vector<std::ptrdiff_t> fixed_at;
  for (double p : fixed) {
    auto it = std::find(p_list.begin(), p_list.end(), p);
    fixed_at.push_back(it == p_list.end() ? -1 : it - p_list.begin());
  }
  std::vector<std::size_t> extra;
  for (std::size_t q = 0; q < p_list.size(); ++q)
    if (std::find(std::begin(fixed), std::end(fixed), p_list[q]) == std::end(fixed)) extra.push_back(q);

  std::ostringstream os;
  os << "t,energy,l2_vorticity,l4_vorticity,l8_vorticity,linf_vorticity,ll_norm,energy_residual,"
        "strong_residual,clamp_count";
  for (std::size_t q : extra) os << ",l" << p_label(p_list[q]) << "_vorticity";
  os << "\n";
  for (const auto& r : records) {
    os << format_number(r.t) << "," << format_number(r.energy);
    for (auto at : fixed_at) os << "," << (at < 0 ? std::string("nan") : format_number(r.lp_vorticity[at]));
    os << "," << format_number(r.ll_norm) << "," << format_number(r.energy_residual) << ","
       << format_number(r.strong_residual) << "," << r.clamp_count;
    for (std::size_t q : extra) os << "," << format_number(r.lp_vorticity[q]);
    os << "\n";
  }
  write_text(path, os.str());
}

void write_ytable_csv(const std::string& path, const solver::StabilityResult& result) {
  std::ostringstream os;
  os << "t";
  for (double d : result.deltas) os << ",Y_" << p_label(d);
  os << "\n";
  for (std::size_t q = 0; q < result.times.size(); ++q) {
    os << format_number(result.times[q]);
    for (const auto& Y : result.Y) os << "," << format_number(Y[q]);
    os << "\n";
  }
  write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace euler2d::io
