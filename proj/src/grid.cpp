#include "dov/grid.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <set>
#include <sstream>
#include <vector>

namespace dov {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_number(std::string_view s, std::string_view whole) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("grid spec '" + std::string(whole) + "': bad number '" + std::string(s) + "'");
  }
  return value;
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

GridSpec GridSpec::parse(std::string_view text) {
  auto parts = split(text, ':');
  GridSpec spec;
  if (parts.size() == 2 && parts[0] == "circle") {
    spec.kind = GridKind::UniformCircle;
    spec.count = parse_number<long>(parts[1], text);
  } else if (parts.size() == 2 && parts[0] == "sphere") {
    auto dims = split(parts[1], 'x');
    if (dims.size() != 2) throw ValidationError("grid spec '" + std::string(text) + "': expected sphere:PxA");
    spec.kind = GridKind::ProductGauss;
    spec.polar = parse_number<long>(dims[0], text);
    spec.azimuth = parse_number<long>(dims[1], text);
    spec.count = spec.polar * spec.azimuth;
  } else if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "mc") {
    spec.kind = GridKind::MonteCarlo;
    spec.count = parse_number<long>(parts[1], text);
    if (parts.size() == 3) {
      if (parts[2].substr(0, 5) != "seed=") {
        throw ValidationError("grid spec '" + std::string(text) + "': expected seed=<n>");
      }
      spec.seed = parse_number<std::uint64_t>(parts[2].substr(5), text);
    }
  } else {
    throw ValidationError("unrecognised grid spec '" + std::string(text) +
                          "' (expected circle:N, sphere:PxA or mc:N[:seed=S])");
  }
  if (spec.count <= 0 || (spec.kind == GridKind::ProductGauss && (spec.polar <= 0 || spec.azimuth <= 0))) {
    throw ValidationError("grid spec '" + std::string(text) + "': resolution must be positive");
  }
  return spec;
}

std::string GridSpec::str() const {
  std::ostringstream os;
  switch (kind) {
    case GridKind::UniformCircle: os << "circle:" << count; break;
    case GridKind::ProductGauss: os << "sphere:" << polar << 'x' << azimuth; break;
    case GridKind::MonteCarlo: os << "mc:" << count << ":seed=" << seed; break;
  }
  return os.str();
}

GridSpec GridSpec::refined() const {
  GridSpec r = *this;
  r.count *= 2;
  if (kind == GridKind::ProductGauss) {
    r.polar *= 2;
    r.azimuth *= 2;
    r.count = r.polar * r.azimuth;
  }
  return r;
}

GridSpec default_grid_spec(int dim) {
  if (dim == 2) return GridSpec::parse("circle:2048");
  if (dim == 3) return GridSpec::parse("sphere:64x128");
  return GridSpec::parse("mc:100000:seed=7");
}

SphereGrid::SphereGrid(int dim, GridSpec spec, Mat nodes, Vec weights)
    : dim_(dim), spec_(std::move(spec)), nodes_(std::move(nodes)), weights_(std::move(weights)) {}

std::optional<std::uint64_t> SphereGrid::seed() const {
  if (spec_.kind == GridKind::MonteCarlo) return spec_.seed;
  return std::nullopt;
}

double SphereGrid::spacing() const {
  switch (spec_.kind) {
    case GridKind::UniformCircle: return 2.0 * kPi / static_cast<double>(size());
    case GridKind::ProductGauss:
      return std::max(kPi / static_cast<double>(spec_.polar), 2.0 * kPi / static_cast<double>(spec_.azimuth));
    case GridKind::MonteCarlo:
      return std::pow(sphere_area(dim_) / static_cast<double>(size()), 1.0 / (dim_ - 1));
  }
  return 0.0;
}

Eigen::Index SphereGrid::nearest(const Vec& u) const {
  if (u.size() != dim_) throw ValidationError("nearest: dimension mismatch");
  if (spec_.kind == GridKind::UniformCircle) {
    const double n = static_cast<double>(size());
    double angle = std::atan2(u[1], u[0]);
    auto k = static_cast<Eigen::Index>(std::llround(angle / (2.0 * kPi) * n));
    k %= size();
    if (k < 0) k += size();
    return k;
  }
  Eigen::Index best = 0;
  (nodes_.transpose() * u).maxCoeff(&best);
  return best;
}

void gauss_legendre(Eigen::Index count, Vec& nodes, Vec& weights) {
  nodes.resize(count);
  weights.resize(count);
  const Eigen::Index half = (count + 1) / 2;
  for (Eigen::Index i = 0; i < half; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(count) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (Eigen::Index j = 1; j <= count; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
      }
      dp = static_cast<double>(count) * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[count - 1 - i] = z;
    weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

SphereGrid build_grid(int dim, const GridSpec& spec) {
  if (dim < 2) throw ValidationError("build_grid: dimension must be >= 2");
  if (spec.count <= 0) throw ValidationError("build_grid: resolution must be positive");
  const Eigen::Index n = spec.count;
  switch (spec.kind) {
    case GridKind::UniformCircle: {
      if (dim != 2) throw ValidationError("circle grids require dimension 2, got " + std::to_string(dim));
      Mat nodes(2, n);
      for (Eigen::Index k = 0; k < n; ++k) {
        double angle = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        nodes(0, k) = std::cos(angle);
        nodes(1, k) = std::sin(angle);
      }
      return SphereGrid(dim, spec, std::move(nodes), Vec::Constant(n, 2.0 * kPi / static_cast<double>(n)));
    }
    case GridKind::ProductGauss: {
      if (dim != 3) throw ValidationError("sphere grids require dimension 3, got " + std::to_string(dim));
      Vec z, wz;
      gauss_legendre(spec.polar, z, wz);
      Mat nodes(3, n);
      Vec weights(n);
      const double dphi = 2.0 * kPi / static_cast<double>(spec.azimuth);
      Eigen::Index j = 0;
      for (Eigen::Index i = 0; i < spec.polar; ++i) {
        const double s = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
        for (Eigen::Index k = 0; k < spec.azimuth; ++k, ++j) {
          const double phi = dphi * static_cast<double>(k);
          nodes(0, j) = s * std::cos(phi);
          nodes(1, j) = s * std::sin(phi);
          nodes(2, j) = z[i];
          weights[j] = wz[i] * dphi;
        }
      }
      return SphereGrid(dim, spec, std::move(nodes), std::move(weights));
    }
    case GridKind::MonteCarlo: {
      std::mt19937_64 rng(spec.seed);
      Mat nodes(dim, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        double norm = 0.0;
        do {
          for (int d = 0; d < dim; d += 2) {
            // Box-Muller pair
            const double r = std::sqrt(-2.0 * std::log(1.0 - unit_uniform(rng)));
            const double t = 2.0 * kPi * unit_uniform(rng);
            nodes(d, j) = r * std::cos(t);
            if (d + 1 < dim) nodes(d + 1, j) = r * std::sin(t);
          }
          norm = nodes.col(j).norm();
        } while (norm < 1e-12);
        nodes.col(j) /= norm;
      }
      return SphereGrid(dim, spec, std::move(nodes), Vec::Constant(n, sphere_area(dim) / static_cast<double>(n)));
    }
  }
  throw ValidationError("build_grid: unknown grid kind");
}

SphereGrid build_grid(int dim, std::string_view spec) { return build_grid(dim, GridSpec::parse(spec)); }

GridPtr make_grid(int dim, std::string_view spec) { return std::make_shared<const SphereGrid>(build_grid(dim, spec)); }

double integrate_values(const SphereGrid& grid, const Vec& values) {
  if (values.size() != grid.size()) throw ValidationError("integrate: value count does not match grid");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) {
      throw NumericalError("non-finite integrand at node " + std::to_string(j) + " u=" +
                           format_vec(grid.node(j)));
    }
    sum += grid.weight(j) * values[j];
  }
  return sum;
}

void DiscreteMeasure::validate() const {
  if (normals.cols() != weights.size()) throw ValidationError("measure: normal and weight counts differ");
  if (size() == 0) throw ValidationError("measure: no atoms");
  for (Eigen::Index i = 0; i < size(); ++i) {
    require_unit(normals.col(i), "measure normal");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw ValidationError("measure: atom " + std::to_string(i) + " has non-positive weight");
    }
    for (Eigen::Index k = 0; k < i; ++k) {
      if ((normals.col(i) - normals.col(k)).norm() < 1e-12) {
        throw ValidationError("measure: atoms " + std::to_string(k) + " and " + std::to_string(i) +
                              " share a normal");
      }
    }
  }
}

double hemisphere_margin(const DiscreteMeasure& atoms, const SphereGrid& probe) {
  if (atoms.size() == 0) throw ValidationError("hemisphere_margin: no atoms");
  if (atoms.dim() != probe.dim()) throw ValidationError("hemisphere_margin: dimension mismatch");
  // (m x N) inner products, clipped at zero, weighted column sums
  Mat dots = atoms.normals.transpose() * probe.nodes();
  Vec sums = dots.cwiseMax(0.0).transpose() * atoms.weights;
  return sums.minCoeff();
}

}  // namespace dov
