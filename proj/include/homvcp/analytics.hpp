#pragma once

// Closed-form error analytics: the region of validity, the absolute error
// bound alpha(r, delta), its inverse in delta, sampled trade-off curves and
// the boundary-point classifier.

#include <utility>
#include <vector>

#include "homvcp/engine.hpp"
#include "homvcp/instances.hpp"

namespace homvcp {

/// R_delta = sqrt(1/delta^2 - 1). DomainError unless 0 < delta < 1.
double region_of_validity(double delta);

/// delta (r^2 + 1) / (sqrt(1 - delta^2) - delta r). OutOfValidity for
/// r >= R_delta.
double alpha(double r, double delta);

/// Largest delta in (0, 1) with r < R_delta and alpha(r, delta) <= target.
double max_delta_for(double r, double alpha_target);

struct ErrorCurve {
  double delta = 0.0;
  /// (r, alpha) pairs, strictly increasing in both.
  std::vector<std::pair<double, double>> samples;
  double r_validity = 0.0;
};

/// Samples r_i = R_delta (1 - 0.001^{(i+1)/count}), so the last radius is
/// 0.999 R_delta and the grid tightens geometrically toward the asymptote.
ErrorCurve error_curve(double delta, int r_count);

struct WorstCase {
  double y = 0.0;
  double n = 0.0;
  double achieved = 0.0;
};

/// Planar configuration in which the bound is attained: y = r and n on the
/// ray at angular distance delta from cone{(y, 1)}.
WorstCase worst_case_construction(double r, double delta);

enum class BoundaryKind { NearBoundary, NearDirection };
const char* to_string(BoundaryKind kind);

struct BoundaryClassification {
  BoundaryKind kind = BoundaryKind::NearBoundary;
  double bound = 0.0;
  /// NearBoundary: nearest point of bd P. NearDirection: nearest unit
  /// direction of 0+P.
  Vec witness;
  /// Smallest ray distance from cone{(y, 1)} to a level-one boundary ray
  /// of hom P (NearBoundary only).
  double q = 0.0;
  /// d(y, bd P) or d(y/||y||, 0+P), whichever the bound refers to.
  double measured = 0.0;
};

struct ClassifyOptions {
  double tolerance = 1e-6;
  /// Reject points farther than this from bd P_X.
  double on_boundary_tolerance = 1e-6;
};

/// Classifies y (in RoI-shifted coordinates) on bd P_X against the analytic
/// upper image. Points inside the validity region are tried as
/// NearBoundary first, others as NearDirection first. Throws NeitherCase if
/// no case verifies and DomainError if y is not on bd P_X.
BoundaryClassification classify_boundary_point(const Vec& y, const ApproxSolution& solution,
                                               const AnalyticInstance& instance,
                                               const ClassifyOptions& options = {});

}  // namespace homvcp
