#pragma once

#include <optional>

#include "homvcp/problem.hpp"
#include "homvcp/solver.hpp"

namespace homvcp {

struct ScalarizeConfig {
  SolverConfig solver;
  /// Break ties among scalarization minimizers by smallest ||x||.
  bool tie_break = true;
  double mu_min = 1e-6;
  double mu_max = 1.5;
  /// Gap tolerance of the squared-distance projection objective.
  double projection_tolerance = 1e-14;
  /// Slack on the cone constraint of the Pascoletti-Serafini problem.
  double ps_feasibility = 1e-12;
};

/// min w^T F(x) over S. Unbounded is detected by ball growth.
SolveReport weighted_sum_min(const VcpProblem& problem, const Vec& w, const ScalarizeConfig& config = {});

struct HomProjection {
  Vec q;
  double mu = 0.0;
  /// u/mu when the perspective branch wins with mu above mu_min.
  std::optional<Vec> witness_x;
  /// Perspective-branch point u/mu regardless of which branch wins.
  std::optional<Vec> perspective_x;
  double distance = 0.0;
  SolveStatus status = SolveStatus::Optimal;

  /// (q, mu) in R^{m+1}.
  Vec lifted() const;
};

/// Nearest point of hom P = cl cone((F[S]+C) x {1}) to v, ||v|| <= 1.
/// The recession branch uses C (a subset of 0+P), so the returned point is
/// always in hom P.
HomProjection project_onto_hom_upper_image(const VcpProblem& problem, const Vec& v,
                                           const ScalarizeConfig& config = {});

struct PsResult {
  SolveReport report;
  double t = 0.0;
  Vec image;
};

/// min t s.t. F(x) <=_C reference + t * direction, x in S.
PsResult pascoletti_serafini(const VcpProblem& problem, const Vec& reference, const Vec& direction,
                             const ScalarizeConfig& config = {});

}  // namespace homvcp
