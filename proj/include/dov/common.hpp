#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace dov {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Unit vector in R^n. Stored as a plain Eigen vector; constructors that
/// accept directions check the norm with `require_unit`.
using Direction = Eigen::VectorXd;

/// Read-only view of a direction (grid columns bind without copying).
using DirRef = Eigen::Ref<const Vec>;

/// Bad input: malformed specs, violated preconditions, hemisphere failures.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not produce a finite or converged value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

/// H^{n-1}(S^{n-1}): 2*pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Volume of the unit ball, sphere_area(n) / n.
double ball_volume(int n);

void require_unit(const Vec& u, const char* what);

std::string format_vec(const Vec& v);

/// Worker count used by node loops. Defaults to DOV_THREADS or 1.
int num_threads();
void set_num_threads(int n);

/// Runs fn(i) for i in [0, count). Each index must write only its own slot;
/// callers reduce afterwards in index order so results do not depend on the
/// thread count.
void parallel_for(std::ptrdiff_t count, const std::function<void(std::ptrdiff_t)>& fn);

}  // namespace dov
