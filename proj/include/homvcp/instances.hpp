#pragma once

// Built-in problems with closed-form upper images, used as ground truth by
// the oracle, analytics and acceptance tests.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "homvcp/problem.hpp"

namespace homvcp {

/// One smooth piece of bd P: t -> point(t) for t in [t0, t1]. An infinite t1
/// means the piece is unbounded and point(t)/||point(t)|| tends to
/// `limit_direction`.
struct BoundaryPiece {
  std::function<Vec(double)> point;
  double t0 = 0.0;
  double t1 = 0.0;
  Vec limit_direction;

  bool unbounded() const { return !std::isfinite(t1); }
};

struct BoundaryDistance {
  double distance = 0.0;
  Vec nearest;
};

class AnalyticInstance {
 public:
  virtual ~AnalyticInstance() = default;

  const VcpProblem& problem() const { return problem_; }
  const std::string& name() const { return problem_.name(); }

  /// Amount by which y misses P (0 for members); compared against membership
  /// tolerances.
  virtual double membership_violation(const Vec& y) const = 0;
  bool contains(const Vec& y, double tol = 1e-9) const { return membership_violation(y) <= tol; }

  virtual std::vector<BoundaryPiece> boundary() const = 0;
  /// Unit generators of the recession cone 0+P.
  virtual std::vector<Vec> recession_generators() const = 0;
  /// Feasible x with F(x) <=_C y for a member y of P.
  virtual Vec preimage(const Vec& y) const = 0;

  /// d(y, bd P) over the boundary parameterization: coarse scan followed by
  /// golden-section refinement on every piece.
  BoundaryDistance distance_to_boundary(const Vec& y, double tol = 1e-10) const;

 protected:
  explicit AnalyticInstance(VcpProblem problem) : problem_(std::move(problem)) {}

 private:
  VcpProblem problem_;
};

/// F(x) = (x, x^2 - 1) on S = R, C = R^2_+.
std::shared_ptr<const AnalyticInstance> parabola2d();
/// F(x) = x on {x >= 0, x1 + x2 >= 1}, C = R^2_+.
std::shared_ptr<const AnalyticInstance> linear2d();
/// The parabola objective with C = {y : y2 >= 2|y1|} given as a second-order
/// cone. P = {y : y2 >= psi(y1)} where psi(t) = min_x x^2 - 1 + 2|t - x|.
std::shared_ptr<const AnalyticInstance> soc2d();

std::shared_ptr<const AnalyticInstance> builtin_instance(const std::string& name);
std::vector<std::string> builtin_names();

/// Analytic instance matching a problem, or null for user problems and
/// builtins whose cone was overridden.
std::shared_ptr<const AnalyticInstance> analytic_for(const VcpProblem& problem);

/// psi for soc2d by one-dimensional minimization (the instance's oracle).
double soc2d_lower_envelope(double t);

}  // namespace homvcp
