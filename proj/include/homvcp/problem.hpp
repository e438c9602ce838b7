#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homvcp/cone.hpp"
#include "homvcp/expr.hpp"

namespace homvcp {

/// Convex vector optimization problem: minimize F(x) w.r.t. C over
/// S = {x : g_j(x) <= 0}. Objectives may carry a shift p so that the
/// problem seen by solvers is F(x) - p.
class VcpProblem {
 public:
  VcpProblem(std::string name, int n, std::vector<Expr> objectives, std::vector<Expr> constraints,
             OrderingCone cone);

  const std::string& name() const { return name_; }
  int m() const { return static_cast<int>(objectives_.size()); }
  int n() const { return n_; }
  const OrderingCone& cone() const { return cone_; }
  const std::vector<Expr>& objectives() const { return objectives_; }
  const std::vector<Expr>& constraints() const { return constraints_; }
  const Vec& shift() const { return shift_; }

  /// F(x) - shift.
  Vec objective(const Vec& x) const;
  /// F(x) - shift and the subgradient Jacobian (row i belongs to F_i).
  Vec objective(const Vec& x, Mat& jacobian) const;
  /// max_j g_j(x) with a subgradient of the maximizing constraint; -inf if
  /// there are no constraints.
  double max_constraint(const Vec& x, Vec* grad = nullptr) const;
  bool feasible(const Vec& x, double tol = 0.0) const { return max_constraint(x) <= tol; }

  /// Copy whose objectives are shifted by -p (on top of any existing shift).
  VcpProblem shifted(const Vec& p) const;

  /// Original document if the problem came from a builtin name.
  const std::optional<std::string>& builtin() const { return builtin_; }
  void set_builtin(std::string name) { builtin_ = std::move(name); }

  nlohmann::json to_json() const;

 private:
  std::string name_;
  int n_;
  std::vector<Expr> objectives_;
  std::vector<Expr> constraints_;
  OrderingCone cone_;
  Vec shift_;
  std::optional<std::string> builtin_;
};

/// Parses a problem document (builtin reference or explicit expressions).
VcpProblem load_problem(const nlohmann::json& doc);

/// Midpoint convexity check of every component along random segments,
/// within 1e-8. Throws NonConvex on violation.
void check_sampled_convexity(const VcpProblem& problem, int segments, std::uint64_t seed);

}  // namespace homvcp
