#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace euler2d {

/// The closed rectangle [0, L1] x [0, L2].
struct Rectangle {
  double L1 = 1.0;
  double L2 = 1.0;

  Rectangle() = default;
  Rectangle(double l1, double l2);

  double area() const { return L1 * L2; }
  double diameter() const;
  bool operator==(const Rectangle&) const = default;
};

/// Uniform tensor grid of interior nodes. Node (i, j), 0-based, sits at
/// ((i + 1) h1, (j + 1) h2); boundary nodes are implicit.
class Grid {
 public:
  Grid() = default;
  Grid(Rectangle rect, std::size_t n1, std::size_t n2);

  const Rectangle& rect() const { return rect_; }
  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t size() const { return n1_ * n2_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  double cell_area() const { return h1_ * h2_; }

  double x(std::size_t i) const { return static_cast<double>(i + 1) * h1_; }
  double y(std::size_t j) const { return static_cast<double>(j + 1) * h2_; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * n2_ + j; }

  bool operator==(const Grid& other) const {
    return rect_ == other.rect_ && n1_ == other.n1_ && n2_ == other.n2_;
  }

 private:
  Rectangle rect_{};
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  double h1_ = 0.0;
  double h2_ = 0.0;
};

/// Samples of a scalar at the interior nodes of a grid, row-major in i.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Grid grid, double fill = 0.0);
  ScalarField(Grid grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.n1(); ++i)
      for (std::size_t j = 0; j < grid.n2(); ++j)
        out(i, j) = f(grid.x(i), grid.y(j));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }

  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  Grid grid_{};
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Sine-series coefficients c_jk of sum c_jk sin(j pi x / L1) sin(k pi y / L2),
/// j = 1..n1, k = 1..n2, stored at (j - 1, k - 1).
struct SpectralCoeffs {
  Grid grid;
  std::vector<double> c;

  double& operator()(std::size_t j, std::size_t k) { return c[grid.index(j, k)]; }
  double operator()(std::size_t j, std::size_t k) const { return c[grid.index(j, k)]; }
};

/// Velocity (or forcing) samples. When produced by the Biot-Savart map the
/// stream-function coefficients are attached so that derivatives can be taken
/// term by term.
struct VectorField {
  ScalarField u1;
  ScalarField u2;
  std::shared_ptr<const SpectralCoeffs> stream;

  VectorField() = default;
  explicit VectorField(const Grid& grid) : u1(grid), u2(grid) {}
  VectorField(ScalarField a, ScalarField b);

  const Grid& grid() const { return u1.grid(); }

  template <class F>
  static VectorField sample(const Grid& grid, F&& f) {
    VectorField out(grid);
    for (std::size_t i = 0; i < grid.n1(); ++i)
      for (std::size_t j = 0; j < grid.n2(); ++j) {
        auto [a, b] = f(grid.x(i), grid.y(j));
        out.u1(i, j) = a;
        out.u2(i, j) = b;
      }
    return out;
  }
};

// Discrete norms use the trapezoid rule on the node lattice with zero
// boundary values, i.e. h1 h2 times the sum over interior nodes.
double integral(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& f, const VectorField& g);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& u);
double linf_norm(const ScalarField& f);
double linf_norm(const VectorField& u);
/// Lp norm; p = infinity gives the max norm.
double lp_norm(const ScalarField& f, double p);

}  // namespace euler2d
