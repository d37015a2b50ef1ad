#pragma once
// Independent reference computations for the tests. Nothing here calls into
// the library's geometry code.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

/// Vertices of {x : N^T x <= h} by brute force over n-subsets of facets.
inline std::vector<Eigen::VectorXd> vertices(const Eigen::MatrixXd& N, const Eigen::VectorXd& h) {
  const int n = static_cast<int>(N.rows());
  const int m = static_cast<int>(N.cols());
  std::vector<Eigen::VectorXd> out;
  std::vector<int> idx(n);
  auto try_subset = [&]() {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) {
      A.row(r) = N.col(idx[r]).transpose();
      b[r] = h[idx[r]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < n) return;
    const Eigen::VectorXd x = lu.solve(b);
    for (int i = 0; i < m; ++i) {
      if (N.col(i).dot(x) > h[i] + 1e-9) return;
    }
    for (const auto& y : out) {
      if ((y - x).norm() < 1e-9) return;
    }
    out.push_back(x);
  };
  // lexicographic n-subsets
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    try_subset();
    int k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline double support(const std::vector<Eigen::VectorXd>& verts, const Eigen::VectorXd& u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : verts) best = std::max(best, v.dot(u));
  return best;
}

inline double radial(const Eigen::MatrixXd& N, const Eigen::VectorXd& h, const Eigen::VectorXd& u) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < N.cols(); ++i) {
    const double c = N.col(i).dot(u);
    if (c > 0) best = std::min(best, h[i] / c);
  }
  return best;
}

/// Shoelace area of a planar polytope.
inline double polygon_area(const Eigen::MatrixXd& N, const Eigen::VectorXd& h) {
  auto v = vertices(N, h);
  std::sort(v.begin(), v.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
  });
  double a = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& p = v[k];
    const auto& q = v[(k + 1) % v.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * std::abs(a);
}

inline double ball_volume(int n, double r = 1.0) {
  return std::pow(pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(r, n);
}

inline double sphere_area(int n) { return n * ball_volume(n); }

}  // namespace oracle
