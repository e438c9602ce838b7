#include "homvcp/solver.hpp"

#include <algorithm>
#include <cmath>

#include "homvcp/errors.hpp"

namespace homvcp {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::ToleranceReached: return "ToleranceReached";
    case SolveStatus::BudgetExhausted: return "BudgetExhausted";
  }
  return "Unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility of x: returns the violation (<= 0 when feasible) and a cut
// direction for the most violated constraint, ball first.
double violation(const ConvexProgram& prog, const Vec& x, double radius, Vec& cut) {
  const Vec off = x - prog.center;
  const double ball = off.norm() - radius;
  if (ball > 0.0) {
    cut = off / off.norm();
    return ball;
  }
  if (prog.constraint) {
    const double c = prog.constraint(x, &cut) - prog.feas_tol;
    if (c > 0.0) return c;
  }
  return ball;
}

// Deep-cut ellipsoid method in square-root form: E = {c + B u : ||u|| <= 1},
// so the shape matrix B B^T stays positive semidefinite under rounding.
// One-dimensional programs are lifted by a dummy coordinate because the
// update formulas need d >= 2.
SolveReport ellipsoid(const ConvexProgram& prog, double radius, const SolverConfig& cfg) {
  const int n = prog.dim;
  const int d = std::max(n, 2);
  Vec c = Vec::Zero(d);
  c.head(n) = prog.center;
  Mat b = Mat::Identity(d, d) * radius;
  const auto lift = [&](const Vec& g) {
    Vec out = Vec::Zero(d);
    out.head(n) = g;
    return out;
  };
  const double dd = d;

  SolveReport rep;
  rep.radius = radius;
  double lower = -kInf;
  Vec grad(n);
  Vec cut(n);
  int k = 0;
  for (; k < cfg.max_iterations; ++k) {
    const Vec x = c.head(n);
    double alpha = 0.0;
    Vec g;
    const double viol = violation(prog, x, radius, cut);
    if (viol > 0.0) {
      g = lift(cut);
      const double s = (b.transpose() * g).norm();
      if (!(s > 0.0)) break;
      alpha = viol / s;
      if (alpha >= 1.0) {
        // No feasible point with value below the incumbent remains.
        if (rep.x.size() == 0) {
          rep.status = SolveStatus::Infeasible;
          rep.iterations = k;
          return rep;
        }
        lower = rep.value;
        break;
      }
    } else {
      const double f = prog.objective(x, &grad);
      if (f < rep.value) {
        rep.value = f;
        rep.x = x;
      }
      g = lift(grad);
      const double s = (b.transpose() * g).norm();
      if (!(s > 0.0)) {
        if (grad.norm() == 0.0) lower = rep.value;
        break;
      }
      lower = std::max(lower, f - s);
      if (rep.value - lower <= cfg.tolerance * std::max(1.0, std::abs(rep.value))) break;
      alpha = (f - rep.value) / s;
    }
    Vec u = b.transpose() * g;
    u /= u.norm();
    const Vec bu = b * u;
    c -= (1.0 + dd * alpha) / (dd + 1.0) * bu;
    // B <- sqrt(delta) B (I - tau u u^T) realizes the usual rank-one update
    const double delta = dd * dd * (1.0 - alpha * alpha) / (dd * dd - 1.0);
    const double tau = 1.0 - std::sqrt((dd - 1.0) * (1.0 - alpha) / ((dd + 1.0) * (1.0 + alpha)));
    b = std::sqrt(delta) * (b - tau * bu * u.transpose());
    if (!b.allFinite() || !c.allFinite()) break;
  }
  rep.iterations = k;
  if (rep.x.size() == 0) {
    rep.status = k >= cfg.max_iterations ? SolveStatus::BudgetExhausted : SolveStatus::Infeasible;
    return rep;
  }
  rep.certified_gap = std::max(0.0, rep.value - lower);
  const double tol = cfg.tolerance * std::max(1.0, std::abs(rep.value));
  if (rep.certified_gap <= tol)
    rep.status = k < cfg.max_iterations ? SolveStatus::Optimal : SolveStatus::ToleranceReached;
  else
    rep.status = SolveStatus::BudgetExhausted;
  return rep;
}

// Projected subgradient with diminishing normalized steps a/(k+b). Provides
// no lower bound, so the gap stays infinite.
SolveReport subgradient(const ConvexProgram& prog, double radius, const SolverConfig& cfg) {
  SolveReport rep;
  rep.radius = radius;
  Vec x = prog.center;
  Vec g(prog.dim);
  Vec cut(prog.dim);
  for (int k = 0; k < cfg.subgradient_cap; ++k) {
    const double step = cfg.step_a / (k + cfg.step_b);
    if (violation(prog, x, radius, cut) > 0.0) {
      g = cut;
    } else {
      const double f = prog.objective(x, &g);
      if (f < rep.value) {
        rep.value = f;
        rep.x = x;
      }
    }
    const double gn = g.norm();
    if (gn == 0.0) {
      rep.certified_gap = 0.0;
      rep.status = SolveStatus::Optimal;
      rep.iterations = k;
      return rep;
    }
    x -= step * g / gn;
    const Vec off = x - prog.center;
    if (off.norm() > radius) x = prog.center + off * (radius / off.norm());
  }
  rep.iterations = cfg.subgradient_cap;
  rep.status = rep.x.size() == 0 ? SolveStatus::Infeasible : SolveStatus::BudgetExhausted;
  return rep;
}

}  // namespace

SolveReport minimize_in_ball(const ConvexProgram& program, double radius, const SolverConfig& config) {
  if (program.dim < 1 || program.center.size() != program.dim)
    throw Error(ErrorKind::DimensionMismatch, "program center does not match its dimension");
  if (!program.objective) throw Error(ErrorKind::SolverFailure, "program has no objective");
  SolveReport rep = config.method == SolverMethod::Ellipsoid ? ellipsoid(program, radius, config)
                                                              : subgradient(program, radius, config);
  if (rep.x.size() != 0) rep.on_ball_boundary = (rep.x - program.center).norm() >= radius * (1.0 - 1e-6);
  return rep;
}

SolveReport minimize(const ConvexProgram& program, const SolverConfig& config) {
  double radius = config.initial_radius;
  for (;;) {
    SolveReport rep = minimize_in_ball(program, radius, config);
    const bool last = radius >= config.max_radius;
    if (rep.status == SolveStatus::Infeasible) {
      if (last) return rep;
    } else if (!rep.on_ball_boundary) {
      return rep;
    } else if (rep.value < -config.unbounded_threshold || last) {
      rep.status = SolveStatus::Unbounded;
      return rep;
    }
    radius *= config.radius_growth;
  }
}

}  // namespace homvcp
