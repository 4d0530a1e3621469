#pragma once

// Convex bodies containing the origin, their Minkowski functional, the
// mollified defect rho_eps = (mu - 1) * phi2_eps, and the nested smooth convex
// approximating domains {rho_{1/n_k} < -1/n_k}.

#include <cstddef>
#include <string>
#include <vector>

namespace euler2d::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

/// Convex polygon stored as counterclockwise vertices. Bodies given by
/// support samples are converted by intersecting adjacent support lines.
class ConvexBody {
 public:
  /// Accepts either orientation; rejects non-convex or degenerate input.
  static ConvexBody from_vertices(std::vector<Point> vertices);
  /// h[i] is the support function at angle 2 pi i / h.size().
  static ConvexBody from_support(const std::vector<double>& h);
  static ConvexBody square(double half_side);
  static ConvexBody disk(double radius, std::size_t samples = 256);
  static ConvexBody regular_polygon(std::size_t sides, double circumradius);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool contains_origin() const;

  /// mu(x) = inf{lambda > 0 : x / lambda in the closed body}. Defined on all
  /// of R^2; throws if the origin is not strictly interior.
  double minkowski(Point x) const;
  double defect(Point x) const { return minkowski(x) - 1.0; }

  /// Lipschitz constant of mu, 1 / dist(0, boundary).
  double lipschitz() const;
  /// dist(0, boundary).
  double inradius() const;
  /// max |v|.
  double outradius() const;
  /// Lipschitz constant of the boundary as a radial graph over the angle,
  /// max over edge endpoints of tan(angle between ray and edge normal).
  double boundary_graph_lipschitz() const;

  /// Signed margin: positive inside, min over edges of the distance to the edge line.
  double interior_margin(Point p) const;
  bool strictly_contains(Point p, double tol = 0.0) const { return interior_margin(p) > tol; }
  /// Euclidean distance from p to the filled polygon (0 inside).
  double distance(Point p) const;
  bool is_convex() const;

  Point lower_left() const;
  Point upper_right() const;

 private:
  explicit ConvexBody(std::vector<Point> ccw);
  void require_origin() const;

  std::vector<Point> vertices_;
  std::vector<Point> normals_;    // outward unit normal of edge i -> i+1
  std::vector<double> offsets_;   // dot(normal, v_i)
  std::vector<double> angles_;    // polar angle of vertex i, increasing from angles_[0]
};

/// Andrew monotone chain; collinear points dropped. Result is counterclockwise.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Hausdorff distance between two filled convex polygons.
double hausdorff_distance(const ConvexBody& a, const ConvexBody& b);

/// Polar product rule for phi2_eps: radial Gauss-Legendre times uniform
/// angles, weights normalized to sum to one.
struct MollifierRule {
  std::vector<Point> offsets;  // for eps = 1
  std::vector<double> weights;
};
MollifierRule mollifier_rule(std::size_t radial = 16, std::size_t angular = 48);

/// rho_eps(x) = sum_q w_q rho(x - eps y_q).
double mollified_defect(const ConvexBody& body, double eps, Point x, const MollifierRule& rule);

/// Uniform lattice origin + (i h, j h), i < nx, j < ny.
struct Lattice {
  Point origin;
  double h = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  Point at(std::size_t i, std::size_t j) const {
    return {origin.x + static_cast<double>(i) * h, origin.y + static_cast<double>(j) * h};
  }
  /// Lattice covering the body's bounding box grown by margin, spacing <= h.
  static Lattice covering(const ConvexBody& body, double margin, double h);
};

struct DefectField {
  Lattice lattice;
  std::vector<double> values;  // row-major in i
  double epsilon = 0.0;
  /// Lip(rho_eps) <= Lip(rho), since rho_eps is a positive average of translates.
  double lipschitz_bound = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * lattice.ny + j]; }
  /// Largest difference quotient between lattice neighbours (including diagonals).
  double measured_lipschitz() const;
  /// Largest violation of rho((x + y) / 2) <= (rho(x) + rho(y)) / 2 over all
  /// lattice pairs with an exact lattice midpoint.
  double midpoint_convexity_defect() const;
};

/// Samples rho_eps on the lattice. Throws if eps >= inradius.
DefectField mollify_defect(const ConvexBody& body, double eps, const Lattice& lattice,
                           const MollifierRule& rule = mollifier_rule());

struct ApproxOptions {
  /// Upper bound on the contour lattice spacing as a fraction of eps.
  double spacing_fraction = 0.25;
  /// Lower bound on lattice nodes across the bounding box.
  std::size_t min_nodes = 64;
  MollifierRule rule = mollifier_rule();
};

/// Omega_k = {rho_{1/n_k} < -1/n_k} as a convex polygon: lattice edge
/// crossings of the level set, followed by a convex hull.
ConvexBody build_approximating_domain(const ConvexBody& body, std::size_t k,
                                      const std::vector<std::size_t>& schedule,
                                      const ApproxOptions& options = {});

/// True if eps_{k+1} < eps_k / (1 + Lip / 2) for every k, which makes the
/// exact level sets nested.
bool schedule_nests(const ConvexBody& body, const std::vector<std::size_t>& schedule);

struct LevelCertificate {
  std::size_t n = 0;
  std::size_t vertex_count = 0;
  bool convex = false;
  bool inside_body = false;
  bool nested_in_next = true;  // vacuous for the last level
  double graph_lipschitz = 0.0;
  double hausdorff = 0.0;
  /// sup |rho_{1/n_k} - rho_{1/n_{k+1}}| on the lattice and the n_k^{-3} target.
  double closeness = 0.0;
  double closeness_target = 0.0;
};

struct ApproxReport {
  std::vector<ConvexBody> domains;
  std::vector<LevelCertificate> levels;
  double body_lipschitz = 0.0;
  double body_graph_lipschitz = 0.0;
  double lipschitz_gate = 0.0;
  bool schedule_ok = false;

  /// Convexity, containment, nesting, uniform Lipschitz and Hausdorff <= 3 / n_k.
  bool passed() const;
  std::string text() const;
};

ApproxReport certify_approximations(const ConvexBody& body, const std::vector<std::size_t>& schedule,
                                    const ApproxOptions& options = {});

/// Reads "x y" pairs, one per line; '#' starts a comment.
ConvexBody read_polygon(const std::string& path);
void write_polygon(const ConvexBody& body, const std::string& path);

}  // namespace euler2d::geometry
