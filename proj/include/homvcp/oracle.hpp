#pragma once

// Independent verification against analytic instances (m = 2): dense rays
// of bd hom P, a brute-force truncated Hausdorff measurement, the net-and-
// shrink existence construction and the single-point relative bound.

#include <vector>

#include <json.hpp>

#include "homvcp/engine.hpp"
#include "homvcp/instances.hpp"

namespace homvcp {

/// Unit rays of bd hom(P - center): rays through sampled boundary points
/// with consecutive chord at most `chord`, each unbounded piece continued
/// until its ray is within `chord` of the limit, plus the arc of the
/// recession face 0+P x {0}.
struct DenseRays {
  std::vector<Vec> rays;
  double chord = 0.0;
  Vec center;
  /// 0+P generators and their matrix (columns).
  Mat recession;
};

DenseRays dense_boundary_rays(const AnalyticInstance& instance, const Vec& center, int resolution);

/// d(u, hom(P - center)) for unit u: 0 for members, otherwise the nearest
/// sampled boundary ray.
double hom_distance(const Vec& u, const AnalyticInstance& instance, const DenseRays& dense);

struct VerificationReport {
  double measured_gap = 0.0;
  /// e(hom P ∩ B, hom P_X ∩ B) and e(hom P_X ∩ B, hom P ∩ B).
  double inner_excess = 0.0;
  double outer_excess = 0.0;
  int resolution = 0;
  long sample_count = 0;
  Vec worst_ray;
  double slack = 0.0;
  double delta = 0.0;
  /// Largest membership violation of an image vertex.
  double vertex_violation = 0.0;
  bool inner = true;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Throws UnsupportedDimension for m != 2.
VerificationReport brute_force_dtH(const ApproxSolution& solution, const AnalyticInstance& instance,
                                   int resolution, Execution exec = Execution::Parallel);

/// min_i{delta / (2 ||d_i||), 1} for the largest ||d_i||.
double shrink_factor(double max_offset, double delta);

struct ExistenceReport {
  ApproxSolution solution;
  VerificationReport verification;
  std::size_t net_size = 0;
  /// Upper bound on d_H(conv net, hom P ∩ B) from nearest-net-point checks.
  double net_gap = 0.0;
  double t_bar = 0.0;
  double max_offset = 0.0;
  /// Pre-images before dropping points whose images are not extreme.
  std::size_t preimage_count = 0;
  /// Largest membership violation of a de-homogenized shrunk point.
  double shrunk_violation = 0.0;
};

/// Constructive existence procedure. net_resolution is the number of
/// sphere samples tried as interior net points (0 picks one from delta).
/// Throws DomainError unless 0 < delta < 1 and NetTooCoarse if the net
/// misses its delta/2 target.
ExistenceReport existence_construction(const AnalyticInstance& instance, double delta, int net_resolution = 0,
                                       int verify_resolution = 1000, Execution exec = Execution::Parallel);

struct PointBoundReport {
  double set_distance = 0.0;
  double bound = 0.0;
  /// d(u_x, hom P): excess of hom{x} over hom P.
  double excess = 0.0;
  /// Ray distance between hom{x} and hom{z} for the nearest z in P.
  double pair_distance = 0.0;
  double slack = 0.0;
  bool pass = false;
};

/// Checks d_tH-type bounds for the single point x with d(x, P) <= epsilon.
/// Throws PreconditionViolation when d(x, P) > epsilon.
PointBoundReport point_bound_check(const Vec& x, const AnalyticInstance& instance, double epsilon,
                                   const DenseRays& dense);
PointBoundReport point_bound_check(const Vec& x, const AnalyticInstance& instance, double epsilon,
                                   int resolution = 2000);

}  // namespace homvcp
