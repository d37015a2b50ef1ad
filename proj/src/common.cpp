#include "dov/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>
#include <vector>

namespace dov {

double sphere_area(int n) {
  if (n < 1) throw ValidationError("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

void require_unit(const Vec& u, const char* what) {
  if (u.size() < 2) throw ValidationError(std::string(what) + ": direction must have dimension >= 2");
  if (!u.allFinite() || std::abs(u.norm() - 1.0) > 1e-12) {
    throw ValidationError(std::string(what) + ": not a unit vector " + format_vec(u));
  }
}

std::string format_vec(const Vec& v) {
  std::ostringstream os;
  os.precision(6);
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ']';
  return os.str();
}

namespace {

int initial_threads() {
  if (const char* env = std::getenv("DOV_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> value{initial_threads()};
  return value;
}

}  // namespace

int num_threads() { return thread_setting().load(); }

void set_num_threads(int n) {
  if (n < 1) throw ValidationError("thread count must be positive");
  thread_setting().store(n);
}

void parallel_for(std::ptrdiff_t count, const std::function<void(std::ptrdiff_t)>& fn) {
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(num_threads(), count));
  if (workers <= 1 || count < 256) {
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::ptrdiff_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::ptrdiff_t lo = w * chunk;
        const std::ptrdiff_t hi = std::min(count, lo + chunk);
        for (std::ptrdiff_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dov
