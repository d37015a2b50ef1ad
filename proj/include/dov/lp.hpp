#pragma once

#include "dov/common.hpp"

namespace dov {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec x;
};

/// min c.x  subject to  A x = b, x >= 0.
///
/// Two-phase tableau simplex with Bland's rule. Intended for the small
/// standard-form problems that arise from polytope support evaluation
/// (a handful of rows, up to a few thousand columns).
LpResult solve_standard_lp(const Mat& A, const Vec& b, const Vec& c);

}  // namespace dov
