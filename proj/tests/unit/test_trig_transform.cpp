#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "euler2d/trig_transform.hpp"

using namespace euler2d::spectral;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Direct sum oracle: sum_k c_k sin(k pi m / N) at m = 1..n.
std::vector<double> naive_sine(const std::vector<double>& c) {
  const std::size_t n = c.size();
  const double N = static_cast<double>(n + 1);
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t k = 1; k <= n; ++k) out[m - 1] += c[k - 1] * std::sin(pi * k * m / N);
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

// Direct oracle for every operator: dense sums with trapezoid weights.
std::vector<double> direct(Basis basis, Nodes nodes, Direction dir, std::size_t n, double L,
                           const std::vector<double>& in) {
  const std::size_t N = n + 1;
  const double h = L / static_cast<double>(N);
  const std::size_t k0 = basis == Basis::Sine ? 1 : 0;
  const std::size_t m0 = nodes == Nodes::Interior ? 1 : 0;
  const std::size_t modes = mode_count(basis, n), points = node_count(nodes, n);
  auto b = [&](std::size_t k, std::size_t m) {
    const double t = pi * static_cast<double>(k * m) / static_cast<double>(N);
    return basis == Basis::Sine ? std::sin(t) : std::cos(t);
  };
  if (dir == Direction::Synthesis) {
    std::vector<double> out(points, 0.0);
    for (std::size_t a = 0; a < points; ++a)
      for (std::size_t q = 0; q < modes; ++q) out[a] += in[q] * b(k0 + q, m0 + a);
    return out;
  }
  std::vector<double> out(modes, 0.0);
  for (std::size_t q = 0; q < modes; ++q) {
    const std::size_t k = k0 + q;
    const double norm = (basis == Basis::Cosine && k == 0) ? L : 0.5 * L;
    for (std::size_t a = 0; a < points; ++a) {
      const std::size_t m = m0 + a;
      const double w = (m == 0 || m == N) ? 0.5 : 1.0;
      out[q] += w * h * in[a] * b(k, m) / norm;
    }
  }
  return out;
}

TEST_CASE("every line operator matches its direct sum") {
  for (std::size_t n : {1u, 2u, 7u, 12u, 31u}) {
    const double L = 1.7;
    for (Basis basis : {Basis::Sine, Basis::Cosine})
      for (Nodes nodes : {Nodes::Interior, Nodes::Full})
        for (Direction dir : {Direction::Synthesis, Direction::Projection}) {
          AxisTables ax(n, L);
          const auto& op = dir == Direction::Synthesis ? ax.synthesis(basis, nodes) : ax.projection(basis, nodes);
          auto in = random_vector(op.cols(), static_cast<unsigned>(n));
          std::vector<double> out(op.rows());
          op.apply(in, out);
          CHECK(max_diff(out, direct(basis, nodes, dir, n, L, in)) < 1e-13 * static_cast<double>(n + 2));
        }
  }
}

TEST_CASE("sine synthesis agrees with the direct sum on power-of-two and odd sizes") {
  for (std::size_t n : {7u, 15u, 31u, 20u, 127u}) {
    AxisTables ax(n, 1.0);
    const auto& op = ax.synthesis(Basis::Sine, Nodes::Interior);
    auto c = random_vector(n, 3);
    std::vector<double> out(n);
    op.apply(c, out);
    CHECK(max_diff(out, naive_sine(c)) < 1e-12 * static_cast<double>(n));
  }
}

TEST_CASE("sine projection inverts synthesis") {
  for (std::size_t n : {12u, 63u}) {
    AxisTables ax(n, 2.5);
    auto c = random_vector(n, 4);
    std::vector<double> v(n), back(n);
    ax.synthesis(Basis::Sine, Nodes::Interior).apply(c, v);
    ax.projection(Basis::Sine, Nodes::Interior).apply(v, back);
    CHECK(max_diff(c, back) < 1e-13 * n);
  }
}

TEST_CASE("cosine projection on the full lattice inverts cosine synthesis") {
  const std::size_t n = 10;
  AxisTables ax(n, 1.0);
  auto c = random_vector(n + 1, 5);
  std::vector<double> v(n + 2), back(n + 1);
  ax.synthesis(Basis::Cosine, Nodes::Full).apply(c, v);
  ax.projection(Basis::Cosine, Nodes::Full).apply(v, back);
  CHECK(max_diff(c, back) < 1e-13);
}

TEST_CASE("trig tables are exact at quarter turns") {
  AxisTables ax(7, 1.0);  // N = 8
  CHECK(ax.sin_pi(0) == 0.0);
  CHECK(ax.sin_pi(8) == 0.0);
  CHECK(ax.cos_pi(4) == 0.0);
  CHECK(ax.sin_pi(4) == 1.0);
  CHECK(ax.cos_pi(8) == -1.0);
}

TEST_CASE("axis applies agree with per-line apply") {
  const std::size_t a0 = 5, a1 = 7;
  AxisTables ax0(a0, 1.0), ax1(a1, 1.0);
  auto data = random_vector(a0 * a1, 6);
  auto r0 = ax0.synthesis(Basis::Sine, Nodes::Interior).apply_axis0(data, a0, a1);
  auto r1 = ax1.synthesis(Basis::Sine, Nodes::Interior).apply_axis1(data, a0, a1);
  for (std::size_t j = 0; j < a1; ++j) {
    std::vector<double> col(a0);
    for (std::size_t i = 0; i < a0; ++i) col[i] = data[i * a1 + j];
    auto ref = naive_sine(col);
    for (std::size_t i = 0; i < a0; ++i) CHECK(r0[i * a1 + j] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < a0; ++i) {
    std::vector<double> row(data.begin() + i * a1, data.begin() + (i + 1) * a1);
    auto ref = naive_sine(row);
    for (std::size_t j = 0; j < a1; ++j) CHECK(r1[i * a1 + j] == doctest::Approx(ref[j]).epsilon(1e-12));
  }
}
