#pragma once

// One-dimensional trigonometric line operators on the interior-node lattice
// and their application along either axis of a row-major 2D array.
//
// With n interior nodes and N = n + 1 intervals, node m sits at m L / N.
// Sine modes are k = 1..n, cosine modes k = 0..n. "Interior" node sets are
// m = 1..n, "Full" node sets are m = 0..N.

#include <cstddef>
#include <span>
#include <vector>

namespace euler2d::spectral {

enum class Basis { Sine, Cosine };
enum class Nodes { Interior, Full };

std::size_t mode_count(Basis basis, std::size_t n);
std::size_t node_count(Nodes nodes, std::size_t n);

enum class Direction { Synthesis, Projection };

/// Synthesis evaluates sum_k c_k b_k at the node set; projection is the
/// discrete L2 projection c_k = <F, b_k> / <b_k, b_k> by the trapezoid rule
/// on the node set. Both run as FFTW DST-I / DCT-I transforms.
class LineOperator {
 public:
  LineOperator() = default;
  LineOperator(Basis basis, Nodes nodes, Direction direction, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void apply(std::span<const double> in, std::span<double> out) const;

  /// Applies along axis 0 (rows index) of an a0 x a1 array; result rows() x a1.
  std::vector<double> apply_axis0(std::span<const double> in, std::size_t a0, std::size_t a1) const;
  /// Applies along axis 1 of an a0 x a1 array; result a0 x rows().
  std::vector<double> apply_axis1(std::span<const double> in, std::size_t a0, std::size_t a1) const;

 private:
  // lines transforms; element e of line l sits at base + l * dist + e * stride.
  void transform(const double* in, std::size_t in_stride, std::size_t in_dist, double* out,
                 std::size_t out_stride, std::size_t out_dist, std::size_t lines) const;

  Basis basis_ = Basis::Sine;
  Nodes nodes_ = Nodes::Interior;
  Direction direction_ = Direction::Synthesis;
  std::size_t n_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

/// Cached trig tables and line operators for one axis.
class AxisTables {
 public:
  AxisTables() = default;
  AxisTables(std::size_t n, double length);

  std::size_t n() const { return n_; }
  std::size_t intervals() const { return n_ + 1; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_ + 1); }
  /// k pi / L.
  double wavenumber(std::size_t k) const;

  /// sin(pi q / N) and cos(pi q / N), exact at multiples of N / 2.
  double sin_pi(std::size_t q) const { return sin_table_[q % (2 * (n_ + 1))]; }
  double cos_pi(std::size_t q) const { return cos_table_[q % (2 * (n_ + 1))]; }

  /// Evaluates sum_k c_k b_k(x_m) at the chosen node set.
  const LineOperator& synthesis(Basis basis, Nodes nodes) const;
  /// Discrete L2 projection onto the basis: c_k = <F, b_k> / <b_k, b_k> using
  /// the trapezoid rule on the chosen node set (the two agree for sines).
  const LineOperator& projection(Basis basis, Nodes nodes) const;
  /// Discrete norm <b_k, b_k> on the full lattice (L/2, or L for cos k = 0).
  double basis_norm(Basis basis, std::size_t k) const;

 private:
  static std::size_t slot(Basis basis, Nodes nodes);

  std::size_t n_ = 0;
  double length_ = 0.0;
  std::vector<double> sin_table_;
  std::vector<double> cos_table_;
  std::vector<LineOperator> synthesis_;
  std::vector<LineOperator> projection_;
};

}  // namespace euler2d::spectral
