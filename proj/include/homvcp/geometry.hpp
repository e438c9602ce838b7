#pragma once

// Homogenization calculus, projections onto finitely generated cones and the
// (truncated) Hausdorff machinery used throughout the library.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "homvcp/parallel.hpp"

namespace homvcp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Last coordinate above this value marks a homogenized point, otherwise a
// direction.
inline constexpr double kLevelTolerance = 1e-9;
inline constexpr double kUnitTolerance = 1e-12;

/// A ray of a homogenized set: unit vector in R^{m+1}, last coordinate >= 0.
class HomRay {
 public:
  /// Normalizes `v`; throws DegenerateRay for (near) zero vectors and for a
  /// negative last coordinate.
  static HomRay from_vector(const Vec& v);

  const Vec& dir() const { return dir_; }
  double level() const { return dir_[dir_.size() - 1]; }
  bool level_positive() const { return level() > kLevelTolerance; }
  Index ambient_dim() const { return dir_.size(); }
  /// Objective-space part (first m coordinates).
  Vec head() const { return dir_.head(dir_.size() - 1); }

 private:
  explicit HomRay(Vec dir) : dir_(std::move(dir)) {}
  Vec dir_;
};

struct Dehomogenized {
  enum class Kind { Point, Direction };
  Kind kind;
  Vec value;

  bool is_point() const { return kind == Kind::Point; }
};

HomRay homogenize_point(const Vec& y);
HomRay homogenize_direction(const Vec& d);
Dehomogenized dehomogenize(const HomRay& ray);

/// Finitely generated cone in R^{m+1} spanned by unit HomRay generators.
class GenCone {
 public:
  explicit GenCone(std::vector<HomRay> generators);

  /// Homogenized cone of conv(points) + cone(directions).
  static GenCone from_points_and_directions(const std::vector<Vec>& points,
                                            const std::vector<Vec>& directions);

  const std::vector<HomRay>& generators() const { return generators_; }
  /// Generators as matrix columns.
  const Mat& matrix() const { return columns_; }
  Index ambient_dim() const { return columns_.rows(); }
  std::size_t size() const { return generators_.size(); }

 private:
  std::vector<HomRay> generators_;
  Mat columns_;
};

struct RoiSpec {
  Vec center;
  double radius = 1.0;

  /// Throws DomainError unless radius > 0 and center is finite.
  void validate() const;
};

struct NnlsOptions {
  double tolerance = 1e-10;
  int max_iterations_per_generator = 100;
};

struct ConeProjection {
  Vec projection;
  double distance = 0.0;
  Vec coefficients;
};

/// Euclidean projection of `v` onto cone(columns of `generators`), solved as
/// a nonnegative least squares problem with the Lawson-Hanson active set
/// method. Generators need not be unit or linearly independent.
ConeProjection project_onto_cone(const Vec& v, const Mat& generators,
                                 const NnlsOptions& options = {});

ConeProjection project_onto_gencone(const Vec& v, const GenCone& cone,
                                    const NnlsOptions& options = {});

/// d(u, K ∩ B) for ||u|| <= 1. Equals d(u, K) since the cone projection of u
/// has norm at most ||u||.
double dist_unit_to_truncated(const Vec& u, const GenCone& cone);

/// Deterministic quasi-uniform unit vectors: equally spaced angles for dim 2,
/// a randomly rotated Fibonacci lattice for dim 3 and normalized Gaussians
/// otherwise. Same (dim, count, seed) gives the same list.
std::vector<Vec> sphere_sample(int dim, int count, std::uint64_t seed);

struct SampledHausdorff {
  double estimate = 0.0;
  /// Largest chord between consecutive sampled rays on any generator pair; for
  /// ambient dimension <= 3 the true value is within this of the estimate.
  double resolution_gap = 0.0;
};

/// Unit rays of `cone` used to evaluate excesses: generators, normalized pair
/// mixtures with `resolution` subdivisions and projected sphere samples.
std::vector<Vec> sample_cone_rays(const GenCone& cone, int resolution,
                                  std::uint64_t seed, double* chord_gap = nullptr);

/// Sampled excess e[K1 ∩ B, K2 ∩ B].
double sampled_excess(const GenCone& from, const GenCone& to, int resolution,
                      Execution exec = Execution::Parallel);

SampledHausdorff truncated_hausdorff_sampled(const GenCone& a, const GenCone& b,
                                             int resolution,
                                             Execution exec = Execution::Parallel);

/// Distance between unit vectors `u` and the ray cone{r} (r unit).
inline double dist_unit_to_ray(const Vec& u, const Vec& r) {
  const double c = u.dot(r);
  if (c <= 0.0) return u.norm();
  const double s = u.squaredNorm() - c * c;
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

}  // namespace homvcp
