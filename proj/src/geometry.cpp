#include "homvcp/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include "homvcp/errors.hpp"

namespace homvcp {

HomRay HomRay::from_vector(const Vec& v) {
  if (v.size() < 2) throw Error(ErrorKind::DimensionMismatch, "homogenized vectors need dimension >= 2");
  if (!v.allFinite()) throw Error(ErrorKind::DegenerateRay, "non-finite coordinates");
  const double norm = v.norm();
  if (norm < kUnitTolerance) throw Error(ErrorKind::DegenerateRay, "zero vector has no ray");
  Vec dir = v / norm;
  double& last = dir[dir.size() - 1];
  if (last < -1e-12) throw Error(ErrorKind::DegenerateRay, "negative homogenizing coordinate");
  if (last < 0.0) last = 0.0;
  return HomRay(std::move(dir));
}

HomRay homogenize_point(const Vec& y) {
  if (!y.allFinite()) throw Error(ErrorKind::DomainError, "point has non-finite entries");
  Vec lifted(y.size() + 1);
  lifted << y, 1.0;
  return HomRay::from_vector(lifted);
}

HomRay homogenize_direction(const Vec& d) {
  if (!d.allFinite()) throw Error(ErrorKind::DomainError, "direction has non-finite entries");
  if (d.norm() < kUnitTolerance) throw Error(ErrorKind::ZeroDirection, "direction has zero length");
  Vec lifted(d.size() + 1);
  lifted << d, 0.0;
  return HomRay::from_vector(lifted);
}

Dehomogenized dehomogenize(const HomRay& ray) {
  const Vec q = ray.head();
  const double mu = ray.level();
  if (mu > kLevelTolerance) return {Dehomogenized::Kind::Point, q / mu};
  const double qn = q.norm();
  if (qn < kUnitTolerance) throw Error(ErrorKind::DegenerateRay, "ray is neither point nor direction");
  return {Dehomogenized::Kind::Direction, q / qn};
}

GenCone::GenCone(std::vector<HomRay> generators) : generators_(std::move(generators)) {
  if (generators_.empty()) throw Error(ErrorKind::InvalidCone, "a generated cone needs at least one generator");
  const Index dim = generators_.front().ambient_dim();
  columns_.resize(dim, static_cast<Index>(generators_.size()));
  for (std::size_t j = 0; j < generators_.size(); ++j) {
    if (generators_[j].ambient_dim() != dim)
      throw Error(ErrorKind::DimensionMismatch, "generators of different dimension");
    columns_.col(static_cast<Index>(j)) = generators_[j].dir();
  }
}

GenCone GenCone::from_points_and_directions(const std::vector<Vec>& points,
                                            const std::vector<Vec>& directions) {
  std::vector<HomRay> gens;
  gens.reserve(points.size() + directions.size());
  for (const auto& p : points) gens.push_back(homogenize_point(p));
  for (const auto& d : directions) gens.push_back(homogenize_direction(d));
  return GenCone(std::move(gens));
}

void RoiSpec::validate() const {
  if (center.size() == 0 || !center.allFinite())
    throw Error(ErrorKind::DomainError, "region of interest center must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorKind::DomainError, "region of interest radius must be positive");
}

namespace {

// Least squares restricted to the passive columns.
Vec solve_passive(const Mat& a, const Vec& b, const std::vector<Index>& passive) {
  Mat sub(a.rows(), static_cast<Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(static_cast<Index>(k)) = a.col(passive[k]);
  return sub.colPivHouseholderQr().solve(b);
}

}  // namespace

ConeProjection project_onto_cone(const Vec& v, const Mat& generators, const NnlsOptions& options) {
  if (generators.rows() != v.size())
    throw Error(ErrorKind::DimensionMismatch, "vector and cone dimensions differ");
  const Index n = generators.cols();

  // Work with unit columns; zero columns never enter the passive set.
  Mat a = generators;
  Vec scale = Vec::Ones(n);
  std::vector<bool> usable(static_cast<std::size_t>(n), true);
  for (Index j = 0; j < n; ++j) {
    const double norm = a.col(j).norm();
    if (norm < kUnitTolerance) {
      usable[static_cast<std::size_t>(j)] = false;
      a.col(j).setZero();
    } else {
      scale[j] = norm;
      a.col(j) /= norm;
    }
  }

  Vec x = Vec::Zero(n);
  std::vector<bool> in_passive(static_cast<std::size_t>(n), false);
  std::vector<bool> rejected(static_cast<std::size_t>(n), false);
  const double tol = options.tolerance * std::max(1.0, v.norm());
  const long budget = static_cast<long>(options.max_iterations_per_generator) * std::max<Index>(n, 1);
  long iterations = 0;

  Vec w = a.transpose() * (v - a * x);
  for (;;) {
    Index enter = -1;
    double best = tol;
    for (Index j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      if (!usable[sj] || in_passive[sj] || rejected[sj]) continue;
      if (w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter < 0) break;
    in_passive[static_cast<std::size_t>(enter)] = true;

    bool first_pass = true;
    for (;;) {
      if (++iterations > budget)
        throw Error(ErrorKind::NumericalFailure, "nonnegative least squares exceeded its iteration budget");
      std::vector<Index> passive;
      for (Index j = 0; j < n; ++j)
        if (in_passive[static_cast<std::size_t>(j)]) passive.push_back(j);
      const Vec z = solve_passive(a, v, passive);

      bool feasible = true;
      for (std::size_t k = 0; k < passive.size(); ++k)
        if (z[static_cast<Index>(k)] <= 0.0) feasible = false;
      if (feasible) {
        x.setZero();
        for (std::size_t k = 0; k < passive.size(); ++k) x[passive[k]] = z[static_cast<Index>(k)];
        break;
      }
      // A freshly entered column that immediately goes nonpositive signals a
      // numerically dependent column; drop it instead of cycling.
      if (first_pass) {
        const auto it = std::find(passive.begin(), passive.end(), enter);
        const auto k = static_cast<Index>(it - passive.begin());
        if (z[k] <= 0.0) {
          in_passive[static_cast<std::size_t>(enter)] = false;
          rejected[static_cast<std::size_t>(enter)] = true;
          break;
        }
      }
      first_pass = false;

      double alpha = 1.0;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double zk = z[static_cast<Index>(k)];
        if (zk <= 0.0) {
          const double xk = x[passive[k]];
          alpha = std::min(alpha, xk / (xk - zk));
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Index j = passive[k];
        x[j] += alpha * (z[static_cast<Index>(k)] - x[j]);
        if (x[j] <= 1e-15) {
          x[j] = 0.0;
          in_passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
    w = a.transpose() * (v - a * x);
    std::fill(rejected.begin(), rejected.end(), false);
    for (Index j = 0; j < n; ++j)
      if (!in_passive[static_cast<std::size_t>(j)] && x[j] != 0.0) x[j] = 0.0;
  }

  ConeProjection out;
  out.projection = a * x;
  out.distance = (v - out.projection).norm();
  out.coefficients = x.cwiseQuotient(scale);
  return out;
}

ConeProjection project_onto_gencone(const Vec& v, const GenCone& cone, const NnlsOptions& options) {
  return project_onto_cone(v, cone.matrix(), options);
}

double dist_unit_to_truncated(const Vec& u, const GenCone& cone) {
  if (u.norm() > 1.0 + 1e-9) throw Error(ErrorKind::DomainError, "expected a vector in the unit ball");
  return project_onto_gencone(u, cone).distance;
}

std::vector<Vec> sphere_sample(int dim, int count, std::uint64_t seed) {
  if (dim < 2 || count < 1) throw Error(ErrorKind::DomainError, "sphere_sample needs dim >= 2 and count >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  if (dim == 2) {
    const double step = 2.0 * std::numbers::pi / count;
    const double offset = std::uniform_real_distribution<double>(0.0, step)(rng);
    for (int i = 0; i < count; ++i) {
      const double t = offset + step * i;
      Vec v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(std::move(v));
    }
    return out;
  }
  std::normal_distribution<double> normal;
  if (dim == 3) {
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = normal(rng);
    const Eigen::Matrix3d rotation = Eigen::HouseholderQR<Eigen::Matrix3d>(g).householderQ();
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      const Eigen::Vector3d p(r * std::cos(phi), r * std::sin(phi), z);
      out.emplace_back(rotation * p);
    }
    return out;
  }
  while (static_cast<int>(out.size()) < count) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    const double n = v.norm();
    if (n > 1e-12) out.push_back(v / n);
  }
  return out;
}

std::vector<Vec> sample_cone_rays(const GenCone& cone, int resolution, std::uint64_t seed,
                                  double* chord_gap) {
  if (resolution < 1) throw Error(ErrorKind::DomainError, "resolution must be positive");
  const Mat& g = cone.matrix();
  const Index count = g.cols();
  std::vector<Vec> rays;
  double gap = 0.0;
  for (Index i = 0; i < count; ++i) rays.emplace_back(g.col(i));
  for (Index i = 0; i < count; ++i) {
    for (Index j = i + 1; j < count; ++j) {
      Vec previous = g.col(i);
      for (int k = 1; k <= resolution; ++k) {
        const double t = static_cast<double>(k) / resolution;
        Vec mix = (1.0 - t) * g.col(i) + t * g.col(j);
        const double n = mix.norm();
        // Opposite generators: the segment passes through the origin.
        if (n < 1e-9) {
          previous = g.col(j);
          continue;
        }
        mix /= n;
        gap = std::max(gap, (mix - previous).norm());
        previous = mix;
        if (k < resolution) rays.push_back(mix);
      }
    }
  }
  const int extra = resolution * static_cast<int>(g.rows());
  for (const auto& s : sphere_sample(static_cast<int>(g.rows()), extra, seed)) {
    const Vec p = project_onto_cone(s, g).projection;
    const double n = p.norm();
    if (n > 1e-6) rays.push_back(p / n);
  }
  if (chord_gap) *chord_gap = gap;
  return rays;
}

double sampled_excess(const GenCone& from, const GenCone& to, int resolution, Execution exec) {
  if (from.ambient_dim() != to.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch, "cones live in different spaces");
  const auto rays = sample_cone_rays(from, resolution, 0x5eed);
  std::vector<double> dist(rays.size());
  parallel_for(rays.size(), [&](std::size_t i) { dist[i] = dist_unit_to_truncated(rays[i], to); }, exec);
  return dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
}

SampledHausdorff truncated_hausdorff_sampled(const GenCone& a, const GenCone& b, int resolution,
                                             Execution exec) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch, "cones live in different spaces");
  double gap_a = 0.0;
  double gap_b = 0.0;
  sample_cone_rays(a, resolution, 0x5eed, &gap_a);
  sample_cone_rays(b, resolution, 0x5eed, &gap_b);
  SampledHausdorff out;
  out.estimate = std::max(sampled_excess(a, b, resolution, exec), sampled_excess(b, a, resolution, exec));
  out.resolution_gap = std::max(gap_a, gap_b);
  return out;
}

}  // namespace homvcp
