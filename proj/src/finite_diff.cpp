#include "dov/finite_diff.hpp"

#include <cmath>
#include <limits>

namespace dov {

namespace {

FdEstimate extrapolate(std::vector<double> steps, std::vector<double> raw, int power) {
  const std::size_t k = raw.size();
  if (k < 2) throw ValidationError("richardson: need at least two steps");
  const double r = steps[0] / steps[1];
  for (std::size_t i = 1; i < k; ++i) {
    if (std::abs(steps[i - 1] / steps[i] - r) > 1e-9 * r) throw ValidationError("richardson: steps must have a constant ratio");
  }
  std::vector<std::vector<double>> T(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    T[i][0] = raw[i];
    for (std::size_t j = 1; j <= i; ++j) {
      const double f = std::pow(r, static_cast<double>(power * j)) - 1.0;
      T[i][j] = T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / f;
    }
  }
  FdEstimate e;
  e.value = T[k - 1][k - 1];
  e.error = std::abs(T[k - 1][k - 1] - T[k - 2][k - 2]);
  // order from the three largest steps, where truncation error dominates rounding
  if (k >= 3) {
    const double d1 = std::abs(raw[1] - raw[0]);
    const double d2 = std::abs(raw[2] - raw[1]);
    if (d2 == 0.0) e.order = std::numeric_limits<double>::infinity();
    else e.order = std::log(d1 / d2) / std::log(r);
  } else {
    e.order = std::numeric_limits<double>::quiet_NaN();
  }
  e.steps = std::move(steps);
  e.raw = std::move(raw);
  return e;
}

}  // namespace

FdEstimate richardson_one_sided(const std::function<double(double)>& f, const std::vector<double>& steps) {
  const double f0 = f(0.0);
  std::vector<double> raw;
  for (double h : steps) raw.push_back((f(h) - f0) / h);
  return extrapolate(steps, raw, 1);
}

FdEstimate richardson_centered(const std::function<double(double)>& f, const std::vector<double>& steps) {
  std::vector<double> raw;
  for (double h : steps) raw.push_back((f(h) - f(-h)) / (2.0 * h));
  return extrapolate(steps, raw, 2);
}

double centered_difference(const std::function<double(double)>& f, double step) {
  return (f(step) - f(-step)) / (2.0 * step);
}

std::vector<double> decade_ladder(int first, int last) {
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(std::pow(10.0, -k));
  return out;
}

}  // namespace dov
