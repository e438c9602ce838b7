#pragma once

// Small-dimensional nonsmooth convex minimization from value/subgradient
// oracles: min f(x) s.t. c(x) <= feas_tol, x in a ball.

#include <functional>
#include <limits>
#include <string>

#include "homvcp/geometry.hpp"

namespace homvcp {

enum class SolveStatus { Optimal, Unbounded, Infeasible, ToleranceReached, BudgetExhausted };
const char* to_string(SolveStatus status);

enum class SolverMethod { Ellipsoid, Subgradient };

struct SolverConfig {
  SolverMethod method = SolverMethod::Ellipsoid;
  /// Gap tolerance, relative to max(1, |f|).
  double tolerance = 1e-12;
  int max_iterations = 20000;
  // Projected subgradient: steps a/(k+b), capped at subgradient_cap.
  double step_a = 1.0;
  double step_b = 10.0;
  int subgradient_cap = 50000;
  // Ball growth for unboundedness detection.
  double initial_radius = 1e3;
  double radius_growth = 100.0;
  double max_radius = 1e9;
  double unbounded_threshold = 1e8;
};

/// Value plus one subgradient written into *grad (when non-null).
using Oracle = std::function<double(const Vec& x, Vec* grad)>;

struct ConvexProgram {
  int dim = 0;
  Oracle objective;
  /// Optional; x is feasible iff constraint(x) <= feas_tol.
  Oracle constraint;
  double feas_tol = 0.0;
  Vec center;
};

struct SolveReport {
  SolveStatus status = SolveStatus::BudgetExhausted;
  Vec x;
  double value = std::numeric_limits<double>::infinity();
  double certified_gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
  double radius = 0.0;
  bool on_ball_boundary = false;
};

/// Minimization over {feasible} ∩ B(center, radius).
SolveReport minimize_in_ball(const ConvexProgram& program, double radius, const SolverConfig& config);

/// Minimization with ball growth: a minimizer stuck on the ball boundary
/// triggers growth; Unbounded once the value drops below
/// -unbounded_threshold or max_radius is reached on the boundary.
SolveReport minimize(const ConvexProgram& program, const SolverConfig& config);

}  // namespace homvcp
