#include "dov/lp.hpp"

#include <cmath>
#include <vector>

namespace dov {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  // rows: constraints then objective row at index m_
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Mat::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Mat t_;
  std::vector<Eigen::Index> basis_;

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double& rhs(Eigen::Index r) { return t_(r, cols()); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  // Minimises the objective row over columns [0, active). Returns false if unbounded.
  bool run(Eigen::Index active) {
    const Eigen::Index obj = rows();
    for (int iter = 0; iter < 100000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index c = 0; c < active; ++c) {
        if (t_(obj, c) < -kPivotTol) {
          enter = c;  // Bland: lowest index with negative reduced cost
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a > kPivotTol) {
          const double ratio = t_(r, cols()) / a;
          if (leave < 0 || ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && basis_[r] < basis_[leave])) {
            leave = r;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw NumericalError("simplex: iteration limit reached");
  }
};

}  // namespace

LpResult solve_standard_lp(const Mat& A, const Vec& b, const Vec& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n) throw ValidationError("solve_standard_lp: dimension mismatch");

  // Columns: n structural, m artificial.
  Tableau tab(m, n + m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    tab.t_.block(r, 0, 1, n) = sign * A.row(r);
    tab.t_(r, n + r) = 1.0;
    tab.rhs(r) = sign * b[r];
    tab.basis_[r] = n + r;
  }
  // Phase 1 objective: sum of artificials, expressed in non-basic terms.
  for (Eigen::Index r = 0; r < m; ++r) tab.t_.row(m) -= tab.t_.row(r);
  for (Eigen::Index r = 0; r < m; ++r) tab.t_(m, n + r) = 0.0;
  tab.run(n + m);

  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  LpResult result;
  if (-tab.t_(m, n + m) > 1e-9 * scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis.
  for (Eigen::Index r = 0; r < m; ++r) {
    if (tab.basis_[r] < n) continue;
    for (Eigen::Index col = 0; col < n; ++col) {
      if (std::abs(tab.t_(r, col)) > kPivotTol) {
        tab.pivot(r, col);
        break;
      }
    }
  }

  // Phase 2 objective row.
  tab.t_.row(m).setZero();
  tab.t_.block(m, 0, 1, n) = c.transpose();
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index bc = tab.basis_[r];
    if (bc < n && c[bc] != 0.0) tab.t_.row(m) -= c[bc] * tab.t_.row(r);
  }
  // Artificial columns are frozen out of phase 2.
  if (!tab.run(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x = Vec::Zero(n);
  for (Eigen::Index r = 0; r < m; ++r) {
    if (tab.basis_[r] < n) result.x[tab.basis_[r]] = tab.rhs(r);
  }
  result.value = c.dot(result.x);
  return result;
}

}  // namespace dov
