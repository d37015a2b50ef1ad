#pragma once

#include "dov/common.hpp"

#include <functional>
#include <vector>

namespace dov {

/// Extrapolated derivative at 0 from a geometric step ladder.
struct FdEstimate {
  double value = 0.0;
  double error = 0.0;   // |last diagonal - previous diagonal| of the Neville table
  double order = 0.0;   // observed order of the raw differences (inf when they agree exactly)
  std::vector<double> steps;
  std::vector<double> raw;  // raw difference quotients per step
};

/// (f(eps) - f(0)) / eps on decreasing steps with a constant ratio, extrapolated
/// with error terms eps, eps^2, ...
FdEstimate richardson_one_sided(const std::function<double(double)>& f, const std::vector<double>& steps);

/// (f(eps) - f(-eps)) / (2 eps), error terms eps^2, eps^4, ...
FdEstimate richardson_centered(const std::function<double(double)>& f, const std::vector<double>& steps);

/// Plain centered difference.
double centered_difference(const std::function<double(double)>& f, double step);

/// Steps 10^{-first}, ..., 10^{-last}.
std::vector<double> decade_ladder(int first, int last);

}  // namespace dov
