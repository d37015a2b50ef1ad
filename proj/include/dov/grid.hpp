#pragma once

#include "dov/common.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace dov {

enum class GridKind { UniformCircle, ProductGauss, MonteCarlo };

/// Parsed form of "circle:2048", "sphere:64x128", "mc:100000:seed=7".
struct GridSpec {
  GridKind kind = GridKind::UniformCircle;
  Eigen::Index count = 0;    // circle and mc node count
  Eigen::Index polar = 0;    // sphere: Gauss-Legendre nodes in cos(theta)
  Eigen::Index azimuth = 0;  // sphere: uniform azimuth nodes
  std::uint64_t seed = 7;

  static GridSpec parse(std::string_view text);
  std::string str() const;
  /// One dyadic refinement: doubles every resolution parameter, keeps the seed.
  GridSpec refined() const;
};

/// Default resolution per dimension: circle:2048, sphere:64x128, mc:100000:seed=7.
GridSpec default_grid_spec(int dim);

/// Quadrature nodes on S^{n-1}. Immutable after construction.
class SphereGrid {
 public:
  SphereGrid(int dim, GridSpec spec, Mat nodes, Vec weights);

  int dim() const { return dim_; }
  Eigen::Index size() const { return weights_.size(); }
  const Mat& nodes() const { return nodes_; }
  Eigen::Ref<const Vec> node(Eigen::Index j) const { return nodes_.col(j); }
  double weight(Eigen::Index j) const { return weights_[j]; }
  const Vec& weights() const { return weights_; }
  GridKind kind() const { return spec_.kind; }
  std::optional<std::uint64_t> seed() const;
  const GridSpec& spec() const { return spec_; }
  std::string id() const { return spec_.str(); }

  /// Typical angular distance between neighbouring nodes.
  double spacing() const;

  /// Index of the node closest to u (largest inner product).
  Eigen::Index nearest(const Vec& u) const;

 private:
  int dim_;
  GridSpec spec_;
  Mat nodes_;  // dim x N, one node per column
  Vec weights_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

SphereGrid build_grid(int dim, const GridSpec& spec);
SphereGrid build_grid(int dim, std::string_view spec);
GridPtr make_grid(int dim, std::string_view spec);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(Eigen::Index count, Vec& nodes, Vec& weights);

/// Sum_j w_j values_j, checking that every value is finite.
double integrate_values(const SphereGrid& grid, const Vec& values);

/// Evaluates f at every node (f receives the node as Eigen::Ref<const Vec>).
template <class F>
Vec eval_on_grid(const SphereGrid& grid, F&& f) {
  Vec out(grid.size());
  parallel_for(grid.size(), [&](std::ptrdiff_t j) { out[j] = f(grid.node(j)); });
  return out;
}

/// Sum_j w_j f(u_j), reduced in node order.
template <class F>
double integrate(const SphereGrid& grid, F&& f) {
  return integrate_values(grid, eval_on_grid(grid, std::forward<F>(f)));
}

/// Atoms (v_i, c_i) on the sphere.
struct DiscreteMeasure {
  Mat normals;  // dim x m
  Vec weights;

  int dim() const { return static_cast<int>(normals.rows()); }
  Eigen::Index size() const { return weights.size(); }
  double total() const { return weights.sum(); }
  /// Unit normals, positive weights, pairwise distinct normals.
  void validate() const;
};

/// min over probe nodes v of sum_i c_i <v_i, v>_+.
double hemisphere_margin(const DiscreteMeasure& atoms, const SphereGrid& probe);

}  // namespace dov
