#include "euler2d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "euler2d/error.hpp"
#include "euler2d/quadrature.hpp"

namespace euler2d::geometry {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double norm(Point p) { return std::hypot(p.x, p.y); }

double signed_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

double segment_distance(Point p, Point a, Point b) {
  const Point e = b - a;
  const double len2 = dot(e, e);
  double t = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * e));
}

// Distance from p to the ray {s v : s >= 0}.
double ray_distance(Point p, Point v) {
  if (dot(p, v) <= 0.0) return norm(p);
  return std::abs(cross(v, p)) / norm(v);
}

}  // namespace

ConvexBody::ConvexBody(std::vector<Point> ccw) : vertices_(std::move(ccw)) {
  const std::size_t m = vertices_.size();
  normals_.resize(m);
  offsets_.resize(m);
  angles_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Point e = vertices_[(i + 1) % m] - vertices_[i];
    const double len = norm(e);
    normals_[i] = {e.y / len, -e.x / len};
    offsets_[i] = dot(normals_[i], vertices_[i]);
    angles_[i] = std::atan2(vertices_[i].y, vertices_[i].x);
    if (i > 0)
      while (angles_[i] < angles_[i - 1]) angles_[i] += two_pi;
  }
}

ConvexBody ConvexBody::from_vertices(std::vector<Point> vertices) {
  std::vector<Point> v;
  for (const Point& p : vertices) {
    require(std::isfinite(p.x) && std::isfinite(p.y), "polygon vertex is not finite");
    if (v.empty() || norm(p - v.back()) > 0.0) v.push_back(p);
  }
  while (v.size() > 1 && norm(v.front() - v.back()) == 0.0) v.pop_back();
  require(v.size() >= 3, "a convex body needs at least three distinct vertices");
  const double area = signed_area(v);
  require(area != 0.0, "polygon is degenerate (zero area)");
  if (area < 0.0) std::reverse(v.begin(), v.end());
  ConvexBody body(std::move(v));
  require(body.is_convex(), "polygon is not convex");
  return body;
}

ConvexBody ConvexBody::from_support(const std::vector<double>& h) {
  const std::size_t m = h.size();
  require(m >= 3, "support samples need at least three angles");
  std::vector<Point> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double a = two_pi * static_cast<double>(i) / static_cast<double>(m);
    const double b = two_pi * static_cast<double>(i + 1) / static_cast<double>(m);
    // Solve x cos a + y sin a = h_i, x cos b + y sin b = h_{i+1}.
    const double det = std::sin(b - a);
    require(det > 0.0, "support angles must span less than pi between samples");
    const double h0 = h[i];
    const double h1 = h[(i + 1) % m];
    v[i] = {(h0 * std::sin(b) - h1 * std::sin(a)) / det, (h1 * std::cos(a) - h0 * std::cos(b)) / det};
  }
  return from_vertices(std::move(v));
}

ConvexBody ConvexBody::square(double half_side) {
  require(half_side > 0.0, "square half side must be positive");
  const double s = half_side;
  return from_vertices({{-s, -s}, {s, -s}, {s, s}, {-s, s}});
}

ConvexBody ConvexBody::disk(double radius, std::size_t samples) {
  require(radius > 0.0, "disk radius must be positive");
  return from_support(std::vector<double>(samples, radius));
}

ConvexBody ConvexBody::regular_polygon(std::size_t sides, double circumradius) {
  require(sides >= 3 && circumradius > 0.0, "regular polygon needs >= 3 sides and a positive radius");
  std::vector<Point> v(sides);
  for (std::size_t i = 0; i < sides; ++i) {
    const double a = two_pi * static_cast<double>(i) / static_cast<double>(sides);
    v[i] = {circumradius * std::cos(a), circumradius * std::sin(a)};
  }
  return from_vertices(std::move(v));
}

bool ConvexBody::contains_origin() const {
  return std::all_of(offsets_.begin(), offsets_.end(), [](double d) { return d > 0.0; });
}

void ConvexBody::require_origin() const {
  require(contains_origin(), "the origin is not strictly interior to the body");
}

double ConvexBody::minkowski(Point x) const {
  require_origin();
  if (x.x == 0.0 && x.y == 0.0) return 0.0;
  const std::size_t m = vertices_.size();
  if (m <= 16) {
    double mu = 0.0;
    for (std::size_t i = 0; i < m; ++i) mu = std::max(mu, dot(normals_[i], x) / offsets_[i]);
    return mu;
  }
  double theta = std::atan2(x.y, x.x);
  while (theta < angles_[0]) theta += two_pi;
  while (theta >= angles_[0] + two_pi) theta -= two_pi;
  const auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
  const std::size_t i = static_cast<std::size_t>(it - angles_.begin()) - 1;
  // The sector's edge, plus neighbours to absorb rounding in the angle search.
  double mu = 0.0;
  for (std::size_t e : {(i + m - 1) % m, i, (i + 1) % m})
    mu = std::max(mu, dot(normals_[e], x) / offsets_[e]);
  return mu;
}

double ConvexBody::inradius() const {
  require_origin();
  return *std::min_element(offsets_.begin(), offsets_.end());
}

double ConvexBody::lipschitz() const { return 1.0 / inradius(); }

double ConvexBody::outradius() const {
  double r = 0.0;
  for (const Point& v : vertices_) r = std::max(r, norm(v));
  return r;
}

double ConvexBody::boundary_graph_lipschitz() const {
  require_origin();
  const std::size_t m = vertices_.size();
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (const Point& v : {vertices_[i], vertices_[(i + 1) % m]}) {
      const double ratio = norm(v) / offsets_[i];
      best = std::max(best, std::sqrt(std::max(0.0, ratio * ratio - 1.0)));
    }
  return best;
}

double ConvexBody::interior_margin(Point p) const {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    margin = std::min(margin, offsets_[i] - dot(normals_[i], p));
  return margin;
}

double ConvexBody::distance(Point p) const {
  if (interior_margin(p) >= 0.0) return 0.0;
  const std::size_t m = vertices_.size();
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i)
    d = std::min(d, segment_distance(p, vertices_[i], vertices_[(i + 1) % m]));
  return d;
}

bool ConvexBody::is_convex() const {
  const std::size_t m = vertices_.size();
  const double scale = outradius();
  for (std::size_t i = 0; i < m; ++i) {
    const Point e0 = vertices_[(i + 1) % m] - vertices_[i];
    const Point e1 = vertices_[(i + 2) % m] - vertices_[(i + 1) % m];
    if (cross(e0, e1) < -1e-12 * scale * scale) return false;
  }
  return true;
}

Point ConvexBody::lower_left() const {
  Point p = vertices_[0];
  for (const Point& v : vertices_) p = {std::min(p.x, v.x), std::min(p.y, v.y)};
  return p;
}

Point ConvexBody::upper_right() const {
  Point p = vertices_[0];
  for (const Point& v : vertices_) p = {std::max(p.x, v.x), std::max(p.y, v.y)};
  return p;
}

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  points.erase(std::unique(points.begin(), points.end(),
                           [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
               points.end());
  if (points.size() < 3) return points;
  std::vector<Point> hull(2 * points.size());
  std::size_t k = 0;
  for (const Point& p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Point p = points[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double hausdorff_distance(const ConvexBody& a, const ConvexBody& b) {
  double d = 0.0;
  for (const Point& v : a.vertices()) d = std::max(d, b.distance(v));
  for (const Point& v : b.vertices()) d = std::max(d, a.distance(v));
  return d;
}

MollifierRule mollifier_rule(std::size_t radial, std::size_t angular) {
  require(radial >= 1 && angular >= 2, "mollifier rule needs radial >= 1 and angular >= 2");
  if (angular % 2 == 1) ++angular;
  const auto r = gauss_legendre(radial, 0.0, 0.5);
  MollifierRule rule;
  const std::size_t half = angular / 2;
  double total = 0.0;
  for (std::size_t a = 0; a < r.nodes.size(); ++a) {
    const double w = r.weights[a] * r.nodes[a] * bump2(r.nodes[a]);
    for (std::size_t b = 0; b < half; ++b) {
      const double t = two_pi * static_cast<double>(b) / static_cast<double>(angular);
      const Point y{r.nodes[a] * std::cos(t), r.nodes[a] * std::sin(t)};
      // Antipodal pairs keep the rule's first moment exactly zero.
      rule.offsets.push_back(y);
      rule.offsets.push_back(-1.0 * y);
      rule.weights.push_back(w);
      rule.weights.push_back(w);
      total += 2.0 * w;
    }
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

double mollified_defect(const ConvexBody& body, double eps, Point x, const MollifierRule& rule) {
  require(eps > 0.0, "mollification radius must be positive");
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q)
    sum += rule.weights[q] * body.defect(x - eps * rule.offsets[q]);
  return sum;
}

namespace {

// rho is affine on each cone over an edge; if the support ball of the
// mollifier stays in one cone the average is exact and equals rho(x).
bool ball_in_single_cone(const ConvexBody& body, Point x, double radius) {
  const auto& v = body.vertices();
  const std::size_t m = v.size();
  if (std::hypot(x.x, x.y) <= radius) return false;
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = v[i];
    const Point b = v[(i + 1) % m];
    if (cross(a, x) >= 0.0 && cross(x, b) >= 0.0) {
      return ray_distance(x, a) > radius && ray_distance(x, b) > radius;
    }
  }
  return false;
}

double fast_mollified_defect(const ConvexBody& body, double eps, Point x, const MollifierRule& rule) {
  if (body.size() <= 16 && ball_in_single_cone(body, x, 0.5 * eps)) return body.defect(x);
  return mollified_defect(body, eps, x, rule);
}

}  // namespace

Lattice Lattice::covering(const ConvexBody& body, double margin, double h) {
  require(h > 0.0 && margin >= 0.0, "lattice needs positive spacing");
  const Point lo = body.lower_left() - Point{margin, margin};
  const Point hi = body.upper_right() + Point{margin, margin};
  Lattice l;
  l.origin = lo;
  l.h = h;
  l.nx = static_cast<std::size_t>(std::ceil((hi.x - lo.x) / h)) + 1;
  l.ny = static_cast<std::size_t>(std::ceil((hi.y - lo.y) / h)) + 1;
  return l;
}

double DefectField::measured_lipschitz() const {
  const std::size_t nx = lattice.nx, ny = lattice.ny;
  double best = 0.0;
  const double diag = std::sqrt(2.0) * lattice.h;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = at(i, j);
      if (i + 1 < nx) best = std::max(best, std::abs(at(i + 1, j) - v) / lattice.h);
      if (j + 1 < ny) best = std::max(best, std::abs(at(i, j + 1) - v) / lattice.h);
      if (i + 1 < nx && j + 1 < ny) best = std::max(best, std::abs(at(i + 1, j + 1) - v) / diag);
      if (i + 1 < nx && j > 0) best = std::max(best, std::abs(at(i + 1, j - 1) - v) / diag);
    }
  return best;
}

double DefectField::midpoint_convexity_defect() const {
  const std::size_t nx = lattice.nx, ny = lattice.ny;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i1 = 0; i1 < nx; ++i1)
    for (std::size_t j1 = 0; j1 < ny; ++j1)
      for (std::size_t i2 = i1; i2 < nx; i2 += 2)
        for (std::size_t j2 = j1 % 2; j2 < ny; j2 += 2) {
          if (i2 == i1 && j2 <= j1) continue;
          const double mid = at((i1 + i2) / 2, (j1 + j2) / 2);
          worst = std::max(worst, mid - 0.5 * (at(i1, j1) + at(i2, j2)));
        }
  return worst;
}

DefectField mollify_defect(const ConvexBody& body, double eps, const Lattice& lattice,
                           const MollifierRule& rule) {
  require(eps > 0.0, "mollification radius must be positive");
  require(eps < body.inradius(), "mollification radius exceeds the body's inradius");
  DefectField field;
  field.lattice = lattice;
  field.epsilon = eps;
  field.lipschitz_bound = body.lipschitz();
  field.values.resize(lattice.nx * lattice.ny);
  for (std::size_t i = 0; i < lattice.nx; ++i)
    for (std::size_t j = 0; j < lattice.ny; ++j)
      field.values[i * lattice.ny + j] = fast_mollified_defect(body, eps, lattice.at(i, j), rule);
  return field;
}

ConvexBody build_approximating_domain(const ConvexBody& body, std::size_t k,
                                      const std::vector<std::size_t>& schedule,
                                      const ApproxOptions& options) {
  require(k < schedule.size(), "level index beyond the schedule");
  require(schedule[k] > 0, "schedule entries must be positive");
  const double eps = 1.0 / static_cast<double>(schedule[k]);
  if (eps >= body.inradius())
    throw PreconditionError("level " + std::to_string(k) + " (n = " + std::to_string(schedule[k]) +
                            ") is too coarse: the sublevel set is empty");
  const Point lo = body.lower_left();
  const Point hi = body.upper_right();
  const double width = std::max(hi.x - lo.x, hi.y - lo.y);
  const double h = std::min(options.spacing_fraction * eps, width / static_cast<double>(options.min_nodes));
  const Lattice lat = Lattice::covering(body, h, h);
  const double lip = body.lipschitz();

  // Sign of rho_eps + eps from cheap bounds: rho <= rho_eps <= rho + Lip eps / 2.
  std::vector<signed char> inside(lat.nx * lat.ny);
  std::vector<double> exact(lat.nx * lat.ny, std::numeric_limits<double>::quiet_NaN());
  auto level = [&](std::size_t i, std::size_t j) {
    double& v = exact[i * lat.ny + j];
    if (std::isnan(v)) v = fast_mollified_defect(body, eps, lat.at(i, j), options.rule) + eps;
    return v;
  };
  for (std::size_t i = 0; i < lat.nx; ++i)
    for (std::size_t j = 0; j < lat.ny; ++j) {
      const double rho = body.defect(lat.at(i, j));
      signed char s;
      if (rho >= -eps) s = 0;
      else if (rho < -eps - 0.5 * lip * eps) s = 1;
      else s = level(i, j) < 0.0 ? 1 : 0;
      inside[i * lat.ny + j] = s;
    }

  std::vector<Point> crossings;
  auto edge = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    if (inside[i0 * lat.ny + j0] == inside[i1 * lat.ny + j1]) return;
    const double a = level(i0, j0);
    const double b = level(i1, j1);
    const double t = a / (a - b);
    crossings.push_back(lat.at(i0, j0) + t * (lat.at(i1, j1) - lat.at(i0, j0)));
  };
  for (std::size_t i = 0; i < lat.nx; ++i)
    for (std::size_t j = 0; j < lat.ny; ++j) {
      if (i + 1 < lat.nx) edge(i, j, i + 1, j);
      if (j + 1 < lat.ny) edge(i, j, i, j + 1);
    }
  auto hull = convex_hull(std::move(crossings));
  if (hull.size() < 3)
    throw PreconditionError("level " + std::to_string(k) + ": the sublevel set is empty on the lattice");
  return ConvexBody::from_vertices(std::move(hull));
}

bool schedule_nests(const ConvexBody& body, const std::vector<std::size_t>& schedule) {
  const double lip = body.lipschitz();
  for (std::size_t k = 0; k + 1 < schedule.size(); ++k) {
    const double e0 = 1.0 / static_cast<double>(schedule[k]);
    const double e1 = 1.0 / static_cast<double>(schedule[k + 1]);
    if (!(e1 * (1.0 + 0.5 * lip) < e0)) return false;
  }
  return !schedule.empty();
}

bool ApproxReport::passed() const {
  if (!schedule_ok) return false;
  for (const auto& c : levels) {
    if (!c.convex || !c.inside_body || !c.nested_in_next) return false;
    if (c.graph_lipschitz > lipschitz_gate) return false;
    if (c.hausdorff > 3.0 / static_cast<double>(c.n)) return false;
  }
  return true;
}

std::string ApproxReport::text() const {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "body lipschitz(rho) " << body_lipschitz << "\n";
  out << "body boundary graph lipschitz " << body_graph_lipschitz << "\n";
  out << "lipschitz gate " << lipschitz_gate << "\n";
  out << "schedule nesting condition " << (schedule_ok ? "pass" : "fail") << "\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& c = levels[k];
    out << "level " << k << " n=" << c.n << " vertices=" << c.vertex_count
        << " convex=" << (c.convex ? "pass" : "fail")
        << " inside_body=" << (c.inside_body ? "pass" : "fail")
        << " nested=" << (c.nested_in_next ? "pass" : "fail")
        << " graph_lipschitz=" << c.graph_lipschitz
        << " hausdorff=" << c.hausdorff << " (limit " << 3.0 / static_cast<double>(c.n) << ")";
    if (k + 1 < levels.size())
      out << " closeness=" << c.closeness << " (target " << c.closeness_target << ", not gated)";
    out << "\n";
  }
  out << "result " << (passed() ? "pass" : "fail") << "\n";
  return out.str();
}

ApproxReport certify_approximations(const ConvexBody& body, const std::vector<std::size_t>& schedule,
                                    const ApproxOptions& options) {
  ApproxReport report;
  report.body_lipschitz = body.lipschitz();
  report.body_graph_lipschitz = body.boundary_graph_lipschitz();
  report.lipschitz_gate = 1.25 * std::max(report.body_lipschitz, report.body_graph_lipschitz);
  report.schedule_ok = schedule_nests(body, schedule);
  for (std::size_t k = 0; k < schedule.size(); ++k)
    report.domains.push_back(build_approximating_domain(body, k, schedule, options));

  // Coarse probe lattice for the closeness condition between successive levels.
  const Point lo = body.lower_left();
  const Point hi = body.upper_right();
  const double probe_h = std::max(hi.x - lo.x, hi.y - lo.y) / 40.0;
  const Lattice probe = Lattice::covering(body, 0.0, probe_h);

  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const ConvexBody& d = report.domains[k];
    LevelCertificate c;
    c.n = schedule[k];
    c.vertex_count = d.size();
    c.convex = d.is_convex();
    c.inside_body = std::all_of(d.vertices().begin(), d.vertices().end(),
                                [&](Point v) { return body.strictly_contains(v); });
    if (k + 1 < schedule.size()) {
      const ConvexBody& next = report.domains[k + 1];
      c.nested_in_next = std::all_of(d.vertices().begin(), d.vertices().end(),
                                     [&](Point v) { return next.strictly_contains(v); });
      const double e0 = 1.0 / static_cast<double>(schedule[k]);
      const double e1 = 1.0 / static_cast<double>(schedule[k + 1]);
      for (std::size_t i = 0; i < probe.nx; ++i)
        for (std::size_t j = 0; j < probe.ny; ++j) {
          const Point x = probe.at(i, j);
          c.closeness = std::max(c.closeness, std::abs(fast_mollified_defect(body, e0, x, options.rule) -
                                                       fast_mollified_defect(body, e1, x, options.rule)));
        }
      c.closeness_target = std::pow(static_cast<double>(schedule[k]), -3.0);
    }
    c.graph_lipschitz = d.boundary_graph_lipschitz();
    c.hausdorff = hausdorff_distance(d, body);
    report.levels.push_back(c);
  }
  return report;
}

ConvexBody read_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open polygon file " + path);
  std::vector<Point> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    Point p;
    if (!(ls >> p.x)) continue;
    std::string rest;
    if (!(ls >> p.y) || (ls >> rest))
      throw IoError(path + ":" + std::to_string(lineno) + ": expected two numbers \"x y\"");
    v.push_back(p);
  }
  return ConvexBody::from_vertices(std::move(v));
}

void write_polygon(const ConvexBody& body, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write polygon file " + path);
  out << std::setprecision(17);
  for (const Point& p : body.vertices()) out << p.x << " " << p.y << "\n";
  if (!out) throw IoError("failed writing polygon file " + path);
}

}  // namespace euler2d::geometry
