#pragma once

#include "dov/bodies.hpp"
#include "dov/functions.hpp"
#include "dov/grid.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dov {

struct VolumeResult {
  double value = 0.0;
  std::string grid_id;
  double estimated_error = 0.0;  // |value on refined grid - value|
};

/// sum_j w_j G(rho_j, u_j)
double dual_volume_value(const GFn& G, const Vec& rho, const SphereGrid& grid);
double dual_volume_value(const GFn& G, const StarBody& K, const SphereGrid& grid);

/// Value on `grid` plus the gap to one dyadic refinement.
VolumeResult dual_volume(const GFn& G, const StarBody& K, const SphereGrid& grid);

/// V_n(K) = (1/n) int rho_K^n.
double volume(const StarBody& K, const SphereGrid& grid);

/// (1/n) int rho_K^q rho_Q^{n-q}
double dual_volume_q(const StarBody& K, const StarBody& Q, double q, const SphereGrid& grid);

/// (1/n) int phi(rho_K u) phi2(rho_L / rho_K) rho_K^n
double dual_orlicz_mixed(const Density& phi, const std::function<double(double)>& phi2, const StarBody& K,
                         const StarBody& L, const SphereGrid& grid);

/// (1/n) int phi(rho_K u) varphi(rho_K) g(u), g given at the nodes.
double breve_mixed(const Density& phi, const std::function<double(double)>& varphi, const StarBody& K,
                   const Vec& g, const SphereGrid& grid);

/// (1/n) int phi(rho_L / rho_K) rho_K^q rho_Q^{n-q}
double mixed_q_phi(const StarBody& K, const StarBody& L, const StarBody& Q, double q,
                   const std::function<double(double)>& phi, const SphereGrid& grid);

/// Per-node outer normals of a body: facet indices for polytopes, one normal
/// per node for bodies with a Gauss map. Nodes on ridges carry every tied
/// facet and their weight is split equally.
struct AlphaAssignment {
  Vec rho;                // rho_K at the nodes
  Mat normals;            // dim x k candidate normals
  Vec support;            // h_K at each candidate normal
  Eigen::VectorXi index;  // primary normal per node
  std::vector<std::pair<Eigen::Index, std::vector<Eigen::Index>>> ties;
  double tied_weight = 0.0;
  bool atomic = false;    // polytope: normals are facets
};

AlphaAssignment assign_alpha(const StarBody& K, const SphereGrid& grid);

/// sum_j w_j node_j * mean_{normals a of node j} per_normal_a
double alpha_integral(const AlphaAssignment& A, const SphereGrid& grid, const Vec& node_values,
                      const Vec& per_normal);

/// Accumulates w_j node_j onto the normals of each node (ties split equally).
Vec alpha_accumulate(const AlphaAssignment& A, const SphereGrid& grid, const Vec& node_values);

/// Support of L at each column of `normals`.
Vec support_at(const StarBody& L, const Mat& normals);

/// Surface area measure S(P, .): atoms (v_i, (1/h_i) int_{R_i} rho^n).
DiscreteMeasure surface_area_measure(const HPolytope& P, const SphereGrid& grid);

/// (1/n) sum_i phi(h_L(v_i)/h_K(v_i)) h_K(v_i) S_i
double orlicz_mixed_volume(const HPolytope& K, const StarBody& L, const std::function<double(double)>& phi,
                           const SphereGrid& grid);

/// (1/n) int (h_L/h_K)(alpha_K(u)) rho_K^n
double v1_radial(const StarBody& K, const StarBody& L, const SphereGrid& grid);

/// (1/n) int (h_L/h_K)(alpha_K)^p (rho_K/rho_Q)^q rho_Q^n
double mixed_pq(const StarBody& K, const StarBody& L, const StarBody& Q, double p, double q,
                const SphereGrid& grid);

/// (1/n) int phi( psi((h_L/h_K)(alpha_K)) (rho_K/rho_Q)^n ) rho_Q^n
double mixed_phipsi(const StarBody& K, const StarBody& L, const StarBody& Q,
                    const std::function<double(double)>& phi, const std::function<double(double)>& psi,
                    const SphereGrid& grid);

/// (1/n) int log rho_K, or (1/n) int log(rho_K/rho_Q) rho_Q^n.
double dual_entropy(const StarBody& K, const std::optional<StarBody>& Q, const SphereGrid& grid);

}  // namespace dov
