#pragma once

#include "dov/common.hpp"
#include "dov/grid.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dov {

/// Body given by closures on unit vectors.
struct AnalyticBody {
  int dim = 0;
  std::function<double(const Vec&)> radial;
  std::function<double(const Vec&)> support;     // empty when not convex
  std::function<Vec(const Vec&)> gauss_map;       // boundary point -> outer unit normal, optional
  std::optional<Vec> semiaxes;                    // set for balls and ellipsoids
  std::string label;
};

/// Radial function known at the nodes of a grid. Off-grid lookups use the
/// nearest node.
struct RadialSamples {
  GridPtr grid;
  Vec values;
  bool convex = false;
};

/// { x : <v_i, x> <= h_i } with unit v_i and h_i > 0.
struct HPolytope {
  Mat normals;  // dim x m
  Vec supports;

  int dim() const { return static_cast<int>(normals.rows()); }
  Eigen::Index facets() const { return supports.size(); }
};

/// conv{x_j} with the origin in its interior.
struct PointHull {
  Mat points;  // dim x k
};

/// Star body about the origin in one of the supported representations.
class StarBody {
 public:
  using Rep = std::variant<AnalyticBody, RadialSamples, HPolytope, PointHull>;

  StarBody(AnalyticBody b);
  StarBody(RadialSamples b);
  StarBody(HPolytope b);
  StarBody(PointHull b);

  const Rep& rep() const { return rep_; }
  int dim() const;
  bool is_convex() const;

  const HPolytope* polytope() const { return std::get_if<HPolytope>(&rep_); }
  const AnalyticBody* analytic() const { return std::get_if<AnalyticBody>(&rep_); }
  const RadialSamples* samples() const { return std::get_if<RadialSamples>(&rep_); }
  const PointHull* hull() const { return std::get_if<PointHull>(&rep_); }

 private:
  Rep rep_;
};

inline constexpr double kPositiveDenominator = 1e-12;

double radial(const StarBody& body, const Vec& u);
double support(const StarBody& body, const Vec& u);

/// Radial function at every node of `grid`. RadialSamples defined on the same
/// grid are returned verbatim.
Vec radial_on_grid(const StarBody& body, const SphereGrid& grid);

double radial(const HPolytope& p, const Vec& u);
double support(const HPolytope& p, const Vec& u);

/// Every direction lies in the cone of the normals (bounded polytope).
bool is_bounded(const Mat& normals);

/// Throws ValidationError unless normals are unit, supports positive and the
/// polytope bounded.
void validate(const HPolytope& p);

StarBody ball(int n, double r = 1.0);
StarBody ellipsoid(const Vec& semiaxes);
/// Axis-parallel cube [-a, a]^n as an H-polytope with normals e_1, -e_1, e_2, ...
StarBody cube(int n, double a = 1.0);
/// Regular m-gon with facet normals at angles phase + 2 pi k / m.
StarBody regular_polygon(int m, double h = 1.0, double phase = 0.0);
StarBody hpolytope(Mat normals, Vec supports);
StarBody scale(const StarBody& body, double r);

StarBody polar(const StarBody& body);

/// Aleksandrov body [f] of f given on the columns of `normals`.
StarBody wulff(const Mat& normals, const Vec& f);
StarBody wulff(const SphereGrid& grid, const Vec& f);
/// Convex hull <f> = conv{ f(u) u }.
StarBody hull(const Mat& directions, const Vec& f);
StarBody hull(const SphereGrid& grid, const Vec& f);

/// Max deviation over probe directions between the support of [f]* (via the
/// Wulff shape sampled on the grid and the polar identity h_{K*} = 1/rho_K) and
/// the support of <1/f>.
double check_polar_hull_relation(const Vec& f, const SphereGrid& grid, const SphereGrid& probe);

struct AlphaValue {
  Direction normal;
  std::optional<Eigen::Index> facet;
};

/// Outer normal at the boundary point rho(u) u. Ties between facets go to the
/// lowest index.
AlphaValue alpha_map(const StarBody& body, const Vec& u);
bool has_alpha_map(const StarBody& body);

struct BoundaryPoint {
  Direction direction;
  double radius = 0.0;
  std::optional<Eigen::Index> facet;
};
BoundaryPoint boundary_point(const StarBody& body, const Vec& u);

/// Per-node ray tracing of a polytope over a grid.
struct PolytopeRays {
  Vec rho;                                 // radial function at each node
  Eigen::VectorXi facet;                   // lowest-index argmin facet
  /// Nodes whose argmin is attained by several facets (relative 1e-12), with
  /// the tied facet indices.
  std::vector<std::pair<Eigen::Index, std::vector<Eigen::Index>>> ties;
  /// Total weight of tied nodes.
  double tied_weight = 0.0;
};

PolytopeRays trace_rays(const HPolytope& p, const SphereGrid& grid);

/// Facet indices whose argmin region on the grid is empty.
std::vector<Eigen::Index> empty_facets(const HPolytope& p, const PolytopeRays& rays);

}  // namespace dov
