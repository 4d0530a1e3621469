#pragma once

// Config files, binary field snapshots and CSV output.
//
// Snapshot layout, little-endian: "EUL2", u32 version, u32 n1, u32 n2,
// f64 L1, f64 L2, u32 kind (0 scalar, 1 vector), f64 time, then n1 n2 f64
// values row-major per component. Writes are not synchronized; one writer
// per path.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "euler2d/grid.hpp"
#include "euler2d/solver.hpp"

namespace euler2d::io {

struct ConfigError {
  std::size_t line = 0;  // 0 when the problem is not tied to a line
  std::string key;
  std::string message;
};

struct ConfigResult {
  std::optional<solver::SimConfig> config;
  std::vector<ConfigError> errors;

  bool ok() const { return config.has_value(); }
  std::string error_text() const;
};

/// Parses "key = value" lines ('#' starts a comment). Never throws on bad
/// input; all problems are collected.
ConfigResult parse_config(const std::string& text);
/// Throws IoError when the file cannot be read.
ConfigResult parse_config_file(const std::string& path);

/// Parses "2,4,8,inf" (commas or spaces).
std::optional<std::vector<double>> parse_p_list(const std::string& text);

enum class FieldKind : std::uint32_t { Scalar = 0, Vector = 1 };

inline constexpr std::uint32_t snapshot_version = 1;
inline constexpr std::size_t snapshot_header_bytes = 44;

struct Snapshot {
  FieldKind kind = FieldKind::Scalar;
  double time = 0.0;
  ScalarField field;   // scalar, or first velocity component
  ScalarField second;  // second velocity component for vector snapshots

  VectorField vector() const { return VectorField(field, second); }
};

std::vector<unsigned char> encode_snapshot(const ScalarField& f, double time);
std::vector<unsigned char> encode_snapshot(const VectorField& u, double time);
/// source names the input in error messages.
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes, const std::string& source = "snapshot");

void write_snapshot(const std::string& path, const ScalarField& f, double time = 0.0);
void write_snapshot(const std::string& path, const VectorField& u, double time = 0.0);
Snapshot read_snapshot(const std::string& path);

/// Columns t, energy, l2_vorticity, l4_vorticity, l8_vorticity,
/// linf_vorticity, ll_norm, energy_residual, strong_residual, clamp_count;
/// further exponents of p_list are appended as l<p>_vorticity.
void write_diagnostics_csv(const std::string& path, const std::vector<solver::DiagnosticsRecord>& records,
                           const std::vector<double>& p_list);
/// Columns t, then Y_<delta> per delta.
void write_ytable_csv(const std::string& path, const solver::StabilityResult& result);

void write_text(const std::string& path, const std::string& text);

}  // namespace euler2d::io
