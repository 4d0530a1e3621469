#include "euler2d/trig_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>

#include "euler2d/error.hpp"

namespace euler2d::spectral {

namespace {

// sin(pi r / N) for r in [0, N], evaluated in the first quadrant.
double sin_half_turn(std::size_t r, std::size_t N) {
  if (r == 0 || r == N) return 0.0;
  const std::size_t mirrored = std::min(r, N - r);
  if (2 * mirrored == N) return 1.0;
  return std::sin(std::numbers::pi * static_cast<double>(mirrored) / static_cast<double>(N));
}

// cos(pi r / N) for r in [0, N].
double cos_half_turn(std::size_t r, std::size_t N) {
  if (2 * r == N) return 0.0;
  if (2 * r < N) return std::cos(std::numbers::pi * static_cast<double>(r) / static_cast<double>(N));
  return -std::cos(std::numbers::pi * static_cast<double>(N - r) / static_cast<double>(N));
}

}  // namespace

std::size_t mode_count(Basis basis, std::size_t n) { return basis == Basis::Sine ? n : n + 1; }
std::size_t node_count(Nodes nodes, std::size_t n) { return nodes == Nodes::Interior ? n : n + 2; }

namespace {

// Batched real-to-complex plans of length M over contiguous lines, keyed by
// (M, lines). Planning is serialized; execution on fresh arrays is thread-safe.
fftw_plan plan_for(std::size_t M, std::size_t lines) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  if (auto it = plans.find({M, lines}); it != plans.end()) return it->second;
  double* in = fftw_alloc_real(M * lines);
  fftw_complex* out = fftw_alloc_complex((M / 2 + 1) * lines);
  const int len = static_cast<int>(M);
  fftw_plan plan = fftw_plan_many_dft_r2c(1, &len, static_cast<int>(lines), in, nullptr, 1, len, out, nullptr, 1,
                                          len / 2 + 1, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (!plan) throw NumericalError("FFTW planning failed");
  plans.emplace(std::pair{M, lines}, plan);
  return plan;
}

}  // namespace

LineOperator::LineOperator(Basis basis, Nodes nodes, Direction direction, std::size_t n)
    : basis_(basis), nodes_(nodes), direction_(direction), n_(n) {
  require(n >= 1, "line operator needs n >= 1");
  const std::size_t modes = mode_count(basis, n);
  const std::size_t points = node_count(nodes, n);
  rows_ = direction == Direction::Synthesis ? points : modes;
  cols_ = direction == Direction::Synthesis ? modes : points;
}

// Sine lines are DST-I of length n over m = 1..n; cosine lines are DCT-I of
// length n + 2 over m = 0..N with the unused mode N zero. Both run as a real
// DFT of length 2N on the odd or even extension.
void LineOperator::transform(const double* in, std::size_t in_stride, std::size_t in_dist, double* out,
                             std::size_t out_stride, std::size_t out_dist, std::size_t lines) const {
  const bool sine = basis_ == Basis::Sine;
  const bool synth = direction_ == Direction::Synthesis;
  const std::size_t N = n_ + 1, M = 2 * N;
  thread_local std::vector<double> ext;
  thread_local std::vector<std::complex<double>> spec;
  ext.resize(M * lines);
  spec.resize((N + 1) * lines);

  // Logical transform input at extension index m (0..N).
  const std::size_t off = (!synth && sine && nodes_ == Nodes::Full) ? 1 : 0;
  const bool cos_interior_in = !synth && !sine && nodes_ == Nodes::Interior;
  for (std::size_t l = 0; l < lines; ++l) {
    const double* src = in + l * in_dist;
    double* r = &ext[l * M];
    if (sine) {
      r[0] = r[N] = 0.0;
      for (std::size_t m = 1; m <= n_; ++m) {
        const double v = src[(m - 1 + off) * in_stride];
        r[m] = v;
        r[M - m] = -v;
      }
    } else if (synth) {
      r[0] = 2.0 * src[0];
      for (std::size_t k = 1; k <= n_; ++k) r[k] = r[M - k] = src[k * in_stride];
      r[N] = 0.0;
    } else if (cos_interior_in) {
      r[0] = r[N] = 0.0;
      for (std::size_t m = 1; m <= n_; ++m) r[m] = r[M - m] = src[(m - 1) * in_stride];
    } else {
      for (std::size_t m = 0; m <= N; ++m) r[m] = src[m * in_stride];
      for (std::size_t m = 1; m < N; ++m) r[M - m] = r[m];
    }
  }
  fftw_execute_dft_r2c(plan_for(M, lines), ext.data(), reinterpret_cast<fftw_complex*>(spec.data()));

  const double inv = 1.0 / static_cast<double>(N);
  for (std::size_t l = 0; l < lines; ++l) {
    const std::complex<double>* c = &spec[l * (N + 1)];
    double* dst = out + l * out_dist;
    if (synth && sine) {
      // sum_k c_k sin(pi k m / N) = -Im(Y_m) / 2
      if (nodes_ == Nodes::Full) {
        dst[0] = 0.0;
        dst[N * out_stride] = 0.0;
        for (std::size_t m = 1; m <= n_; ++m) dst[m * out_stride] = -0.5 * c[m].imag();
      } else {
        for (std::size_t m = 1; m <= n_; ++m) dst[(m - 1) * out_stride] = -0.5 * c[m].imag();
      }
    } else if (synth) {
      const std::size_t m0 = nodes_ == Nodes::Interior ? 1 : 0;
      for (std::size_t r = 0; r < rows_; ++r) dst[r * out_stride] = 0.5 * c[r + m0].real();
    } else if (sine) {
      for (std::size_t k = 1; k <= n_; ++k) dst[(k - 1) * out_stride] = -c[k].imag() * inv;
    } else {
      dst[0] = 0.5 * c[0].real() * inv;
      for (std::size_t k = 1; k <= n_; ++k) dst[k * out_stride] = c[k].real() * inv;
    }
  }
}

void LineOperator::apply(std::span<const double> in, std::span<double> out) const {
  require(in.size() == cols_ && out.size() == rows_, "line operator size mismatch");
  transform(in.data(), 1, cols_, out.data(), 1, rows_, 1);
}

std::vector<double> LineOperator::apply_axis0(std::span<const double> in, std::size_t a0,
                                              std::size_t a1) const {
  require(a0 == cols_ && in.size() == a0 * a1, "axis-0 operand shape mismatch");
  std::vector<double> out(rows_ * a1);
  if (a1 > 0) transform(in.data(), a1, 1, out.data(), a1, 1, a1);
  return out;
}

std::vector<double> LineOperator::apply_axis1(std::span<const double> in, std::size_t a0,
                                              std::size_t a1) const {
  require(a1 == cols_ && in.size() == a0 * a1, "axis-1 operand shape mismatch");
  std::vector<double> out(a0 * rows_);
  if (a0 > 0) transform(in.data(), 1, a1, out.data(), 1, rows_, a0);
  return out;
}

std::size_t AxisTables::slot(Basis basis, Nodes nodes) {
  return (basis == Basis::Sine ? 0 : 2) + (nodes == Nodes::Interior ? 0 : 1);
}

AxisTables::AxisTables(std::size_t n, double length) : n_(n), length_(length) {
  require(n >= 1 && length > 0.0, "axis tables need n >= 1 and a positive length");
  const std::size_t N = n + 1;
  sin_table_.resize(2 * N);
  cos_table_.resize(2 * N);
  for (std::size_t q = 0; q < 2 * N; ++q) {
    if (q <= N) {
      sin_table_[q] = sin_half_turn(q, N);
      cos_table_[q] = cos_half_turn(q, N);
    } else {
      sin_table_[q] = -sin_half_turn(q - N, N);
      cos_table_[q] = -cos_half_turn(q - N, N);
    }
  }

  synthesis_.resize(4);
  projection_.resize(4);
  for (Basis basis : {Basis::Sine, Basis::Cosine})
    for (Nodes nodes : {Nodes::Interior, Nodes::Full}) {
      synthesis_[slot(basis, nodes)] = LineOperator(basis, nodes, Direction::Synthesis, n);
      projection_[slot(basis, nodes)] = LineOperator(basis, nodes, Direction::Projection, n);
    }
}

double AxisTables::wavenumber(std::size_t k) const {
  return static_cast<double>(k) * std::numbers::pi / length_;
}

const LineOperator& AxisTables::synthesis(Basis basis, Nodes nodes) const {
  return synthesis_[slot(basis, nodes)];
}

const LineOperator& AxisTables::projection(Basis basis, Nodes nodes) const {
  return projection_[slot(basis, nodes)];
}

double AxisTables::basis_norm(Basis basis, std::size_t k) const {
  if (basis == Basis::Cosine && (k == 0 || k == n_ + 1)) return length_;
  return 0.5 * length_;
}

}  // namespace euler2d::spectral
