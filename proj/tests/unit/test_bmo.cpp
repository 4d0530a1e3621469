#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "euler2d/bmo.hpp"
#include "euler2d/error.hpp"

using namespace euler2d;
using namespace euler2d::bmo;
constexpr double pi = std::numbers::pi;

namespace {

// Independent enumeration of the square family: every k-block whose start
// is a multiple of max(1, k/2) or is end-aligned.
double brute_sharp_at(const ScalarField& f, std::size_t i0, std::size_t j0) {
  const Grid& g = f.grid();
  double best = 0.0;
  for (std::size_t k = 1; k <= g.n1(); k *= 2) {
    const std::size_t stride = std::max<std::size_t>(1, k / 2);
    for (std::size_t a = 0; a + k <= g.n1(); ++a) {
      if (a % stride != 0 && a + k != g.n1()) continue;
      for (std::size_t b = 0; b + k <= g.n2(); ++b) {
        if (b % stride != 0 && b + k != g.n2()) continue;
        if (i0 < a || i0 >= a + k || j0 < b || j0 >= b + k) continue;
        double mean = 0.0, absmean = 0.0;
        for (std::size_t i = a; i < a + k; ++i)
          for (std::size_t j = b; j < b + k; ++j) {
            mean += f(i, j);
            absmean += std::abs(f(i, j));
          }
        mean /= double(k * k);
        absmean /= double(k * k);
        double dev = 0.0;
        for (std::size_t i = a; i < a + k; ++i)
          for (std::size_t j = b; j < b + k; ++j) dev += std::abs(f(i, j) - mean);
        best = std::max(best, dev / double(k * k));
        if (k * g.h1() * k * g.h2() >= area_threshold(g.rect()) * (1 - 1e-12)) best = std::max(best, absmean);
      }
    }
  }
  return best;
}

ScalarField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  ScalarField f(g);
  for (auto& v : f.values()) v = d(rng);
  return f;
}

ScalarField log_corner(const Grid& g) {
  return ScalarField::sample(g, [](double x, double y) { return std::log(std::hypot(x, y)); });
}

}  // namespace

TEST_CASE("sharp function of a constant") {
  Grid g(Rectangle(1, 1), 32, 32);
  auto s = sharp_function(ScalarField(g, -3.0));
  for (double v : s.values()) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("sharp function of a step against brute force") {
  Grid g(Rectangle(1, 1), 16, 16);
  auto f = ScalarField::sample(g, [](double x, double) { return x < 0.5 ? 1.0 : -1.0; });
  auto s = sharp_function(f);
  CHECK(s(7, 8) == doctest::Approx(1.0));
  CHECK(s(8, 8) == doctest::Approx(1.0));
  auto r = random_field(g, 4);
  auto sr = sharp_function(r);
  for (std::size_t i = 0; i < 16; i += 3)
    for (std::size_t j = 0; j < 16; j += 5) {
      CHECK(s(i, j) == doctest::Approx(brute_sharp_at(f, i, j)).epsilon(1e-14));
      CHECK(sr(i, j) == doctest::Approx(brute_sharp_at(r, i, j)).epsilon(1e-14));
    }
}

TEST_CASE("oscillation part ignores added constants and sharp <= 2 sup") {
  Grid g(Rectangle(2, 1), 40, 20);
  auto f = random_field(g, 5);
  auto a = sharp_parts(f).oscillation;
  auto b = sharp_parts(f + ScalarField(g, 7.5)).oscillation;
  CHECK(linf_norm(a - b) < 1e-12);
  CHECK(linf_norm(sharp_function(f)) <= 2.0 * linf_norm(f));
}

TEST_CASE("sharp function of log distance to a corner stays bounded") {
  std::vector<double> b, top;
  for (std::size_t n : {64u, 128u, 256u}) {
    auto f = log_corner(Grid(Rectangle(1, 1), n, n));
    b.push_back(bmo_r(f));
    top.push_back(linf_norm(f));
  }
  CHECK(b[2] <= 1.1 * b[0]);
  // max |f| = -log(sqrt 2 h) grows by log 2 per doubling.
  CHECK(top[1] - top[0] == doctest::Approx(std::log(129.0 / 65.0)).epsilon(1e-9));
  CHECK(top[2] - top[1] == doctest::Approx(std::log(257.0 / 129.0)).epsilon(1e-9));
}

TEST_CASE("bmo norms of simple fields") {
  Grid g(Rectangle(1, 1), 32, 32);
  auto one = bmo_norms(ScalarField(g, 1.0));
  CHECK(one.bmo_r == doctest::Approx(1.0));
  CHECK(one.bmo_z >= 1.0);
  CHECK(one.chain_holds());
  auto zero = bmo_norms(ScalarField(g));
  CHECK(zero.bmo_r == 0.0);
  CHECK(zero.bmo_z == 0.0);
  CHECK(zero.linf == 0.0);
  for (unsigned seed = 0; seed < 5; ++seed) CHECK(bmo_norms(random_field(g, seed)).chain_holds());
  CHECK(bmo_norms(log_corner(g)).chain_holds());
}

TEST_CASE("small rectangles use the reduced area threshold") {
  CHECK(area_threshold(Rectangle(0.5, 0.5)) == doctest::Approx(0.0625));
  CHECK(area_threshold(Rectangle(3, 3)) == 1.0);
  Grid g(Rectangle(0.5, 0.5), 31, 31);
  CHECK(bmo_r(ScalarField(g, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("odd reflection") {
  Grid g(Rectangle(pi, 1.0), 20, 7);
  auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * (1 + y); });
  auto h = odd_reflection(f, Edge::Left);
  CHECK(h.grid().n1() == 41);
  CHECK(h.grid().rect().L1 == doctest::Approx(2 * pi));
  CHECK(h.grid().h1() == doctest::Approx(g.h1()));
  // sin extended oddly is sin on [-pi, pi], i.e. sin(x' - pi) on the shifted grid.
  auto expected = ScalarField::sample(h.grid(), [](double x, double y) { return std::sin(x - pi) * (1 + y); });
  CHECK(linf_norm(h - expected) < 1e-14);

  auto r = random_field(g, 7);
  for (Edge e : {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top}) {
    auto hr = odd_reflection(r, e);
    for (std::size_t i = 0; i < g.n1(); ++i)
      for (std::size_t j = 0; j < g.n2(); ++j) {
        double orig = 0, mirror = 0;
        switch (e) {
          case Edge::Left: orig = hr(21 + i, j); mirror = hr(19 - i, j); break;
          case Edge::Right: orig = hr(i, j); mirror = hr(40 - i, j); break;
          case Edge::Bottom: orig = hr(i, 8 + j); mirror = hr(i, 6 - j); break;
          case Edge::Top: orig = hr(i, j); mirror = hr(i, 14 - j); break;
        }
        CHECK(orig == r(i, j));
        CHECK(mirror + r(i, j) == 0.0);
      }
  }
  // Reflecting across both edges at a corner gives the four-quadrant device.
  auto both = odd_reflection(odd_reflection(r, Edge::Left), Edge::Bottom);
  CHECK(both(19 - 3, 6 - 2) == r(3, 2));
}

TEST_CASE("odd reflection at most doubles bmo_z") {
  Grid g(Rectangle(1, 1), 31, 31);
  auto one = ScalarField(g, 1.0);
  CHECK(bmo_z(odd_reflection(one, Edge::Left)) <= 2.0 * bmo_z(one));
  auto r = random_field(g, 9);
  for (Edge e : {Edge::Left, Edge::Top})
    CHECK(bmo_z(odd_reflection(r, e)) <= 2.0 * bmo_z(r));
}

TEST_CASE("John-Nirenberg ratios") {
  Grid g(Rectangle(1, 1), 128, 128);
  const std::vector<double> ps{2, 4, 8, 16, 32};
  auto ones = jn_ratios(ScalarField(g, 1.0), ps);
  const double area = 128.0 * 128.0 * g.cell_area();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    CHECK(ones[k].second == doctest::Approx(std::pow(area, 1.0 / ps[k]) / ps[k]).epsilon(1e-12));
    if (k > 0) CHECK(ones[k].second < ones[k - 1].second);
  }
  const double cd = calibrate_jn_constant(Rectangle(1, 1), ps);
  CHECK(cd > 0.0);
  CHECK_FALSE(jn_check(log_corner(g), ps, cd).violated);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  std::vector<double> c(36);
  for (auto& v : c) v = d(rng);
  auto band = ScalarField::sample(g, [&](double x, double y) {
    double s = 0;
    for (int j = 1; j <= 6; ++j)
      for (int k = 1; k <= 6; ++k) s += c[(j - 1) * 6 + k - 1] * std::sin(j * pi * x) * std::sin(k * pi * y);
    return s;
  });
  const double b = bmo_r(band);
  for (const auto& [p, r] : jn_ratios(band, ps))
    CHECK(r <= linf_norm(band) * std::pow(area, 1.0 / p) / (p * b) * (1 + 1e-12));
  CHECK_THROWS_AS(jn_ratios(band, std::vector<double>{1.5}), PreconditionError);
}

TEST_CASE("W2bmo ratio") {
  Grid g(Rectangle(pi, pi), 63, 63);
  auto f = ScalarField::sample(g, [](double x, double y) { return 2 * std::sin(x) * std::sin(y); });
  // Oracle from closed-form derivatives of psi = sin x sin y.
  auto ss = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
  auto cc = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::cos(y); });
  const double oracle = (bmo_r(ss) + std::max(bmo_r(-1.0 * ss), bmo_r(cc))) / bmo_z(f);
  CHECK(w2bmo_ratio(f) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(w2bmo_ratio(-3.5 * f) == doctest::Approx(w2bmo_ratio(f)).epsilon(1e-12));
  CHECK_THROWS_AS(w2bmo_ratio(ScalarField(g)), PreconditionError);
}

TEST_CASE("W2bmo ratio of indicators is resolution independent") {
  std::vector<double> ratios;
  double checker = 0.0;
  for (std::size_t n : {64u, 128u, 256u}) {
    Grid g(Rectangle(1, 1), n, n);
    auto ind = ScalarField::sample(g, [](double x, double y) { return x < 0.5 && y < 0.5 ? 1.0 : 0.0; });
    ratios.push_back(w2bmo_ratio(ind));
    auto cb = ScalarField::sample(g, [](double x, double y) {
      return (static_cast<int>(std::floor(8 * x)) + static_cast<int>(std::floor(8 * y))) % 2 ? 1.0 : -1.0;
    });
    checker = std::max(checker, w2bmo_ratio(cb));
  }
  const double mean = (ratios[0] + ratios[1] + ratios[2]) / 3.0;
  for (double r : ratios) CHECK(std::abs(r - mean) <= 0.1 * mean);
  CHECK(checker < 2.0 * *std::max_element(ratios.begin(), ratios.end()));
}

TEST_CASE("constant growth study") {
  const std::vector<double> ps{2, 4, 8, 16, 32};
  Grid g(Rectangle(1, 1), 64, 64);
  std::vector<ScalarField> zeros{ScalarField(g)};
  CHECK(constant_growth_study(ps, zeros).table.empty());

  std::vector<ScalarField> mode{ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); })};
  auto st = constant_growth_study(ps, mode);
  REQUIRE(st.table.size() == 5);
  for (const auto& [p, r] : st.table) CHECK(r == doctest::Approx(1.0 / (2.0 * pi * pi) * pi * pi).epsilon(2e-2));
  CHECK(std::abs(st.slope) < 1e-2);

  std::vector<std::pair<double, double>> power{{2, 3 * 8.0}, {4, 3 * 64.0}, {8, 3 * 512.0}};
  CHECK(loglog_slope(power) == doctest::Approx(3.0));
  CHECK_THROWS_AS(constant_growth_study(std::vector<double>{1.0}, mode), PreconditionError);
}
