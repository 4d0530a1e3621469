#include "euler2d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "euler2d/error.hpp"

namespace euler2d {

Rectangle::Rectangle(double l1, double l2) : L1(l1), L2(l2) {
  require(std::isfinite(l1) && std::isfinite(l2) && l1 > 0.0 && l2 > 0.0,
          "rectangle side lengths must be positive and finite");
}

double Rectangle::diameter() const { return std::hypot(L1, L2); }

Grid::Grid(Rectangle rect, std::size_t n1, std::size_t n2)
    : rect_(rect), n1_(n1), n2_(n2) {
  require(n1 >= 1 && n2 >= 1, "grid needs at least one interior node per axis");
  require(rect.L1 > 0.0 && rect.L2 > 0.0, "grid rectangle must be non-degenerate");
  h1_ = rect.L1 / static_cast<double>(n1 + 1);
  h2_ = rect.L2 / static_cast<double>(n2 + 1);
}

ScalarField::ScalarField(Grid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.size(), fill) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(values_.size() == grid_.size(),
          "field has " + std::to_string(values_.size()) + " values, grid needs " +
              std::to_string(grid_.size()));
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require(grid_ == other.grid_, "field grids differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require(grid_ == other.grid_, "field grids differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(ScalarField a, ScalarField b) : u1(std::move(a)), u2(std::move(b)) {
  require(u1.grid() == u2.grid(), "vector components must share a grid");
}

double integral(const ScalarField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * f.grid().cell_area();
}

double inner(const ScalarField& f, const ScalarField& g) {
  require(f.grid() == g.grid(), "field grids differ");
  double sum = 0.0;
  auto a = f.values();
  auto b = g.values();
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum * f.grid().cell_area();
}

double inner(const VectorField& f, const VectorField& g) {
  return inner(f.u1, g.u1) + inner(f.u2, g.u2);
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }
double l2_norm(const VectorField& u) { return std::sqrt(inner(u, u)); }

double linf_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double linf_norm(const VectorField& u) {
  double m = 0.0;
  auto a = u.u1.values();
  auto b = u.u2.values();
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::hypot(a[k], b[k]));
  return m;
}

double lp_norm(const ScalarField& f, double p) {
  require(p >= 1.0, "Lp norm needs p >= 1");
  const double top = linf_norm(f);
  if (std::isinf(p) || top == 0.0) return top;
  double sum = 0.0;
  for (double v : f.values()) sum += std::pow(std::abs(v) / top, p);
  return top * std::pow(sum * f.grid().cell_area(), 1.0 / p);
}

}  // namespace euler2d
