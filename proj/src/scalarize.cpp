#include "homvcp/scalarize.hpp"

#include <algorithm>

#include "homvcp/errors.hpp"

namespace homvcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Oracle constraint_oracle(const VcpProblem& problem) {
  if (problem.constraints().empty()) return nullptr;
  return [&problem](const Vec& x, Vec* g) { return problem.max_constraint(x, g); };
}

}  // namespace

SolveReport weighted_sum_min(const VcpProblem& problem, const Vec& w, const ScalarizeConfig& config) {
  if (w.size() != problem.m()) throw Error(ErrorKind::DimensionMismatch, "weight has wrong dimension");
  if (!w.allFinite() || w.norm() < kUnitTolerance) throw Error(ErrorKind::DomainError, "weight must be nonzero");
  if (problem.cone().project(-w).norm() > 1e-12 * w.norm())
    throw Error(ErrorKind::DomainError, "weight must lie in the dual cone");

  ConvexProgram prog;
  prog.dim = problem.n();
  prog.center = Vec::Zero(problem.n());
  prog.objective = [&](const Vec& x, Vec* g) {
    Mat jac;
    const Vec f = problem.objective(x, jac);
    if (g) *g = jac.transpose() * w;
    return w.dot(f);
  };
  prog.constraint = constraint_oracle(problem);

  SolverConfig first = config.solver;
  if (config.tie_break) first.tolerance *= 0.5;
  SolveReport rep = minimize(prog, first);
  if (!config.tie_break || (rep.status != SolveStatus::Optimal && rep.status != SolveStatus::ToleranceReached))
    return rep;

  // Ties: minimize w^T F(x) + rho ||x||^2. For polyhedral faces a small rho
  // returns exactly the least-norm minimizer; the result is kept only if it
  // stays optimal within tolerance, so biased nonlinear solutions are dropped.
  const double fstar = rep.value;
  const double rho = 1e-3 * w.norm();
  ConvexProgram reg = prog;
  reg.objective = [&](const Vec& x, Vec* g) {
    const double f = prog.objective(x, g);
    if (g) *g += 2.0 * rho * x;
    return f + rho * x.squaredNorm();
  };
  SolverConfig second = config.solver;
  second.tolerance = 1e-14;
  const SolveReport tb = minimize_in_ball(reg, rep.x.norm() * 1.01 + 1.0, second);
  if (tb.x.size() != 0) {
    const double v = prog.objective(tb.x, nullptr);
    if (v - fstar <= first.tolerance * std::max(1.0, std::abs(fstar))) {
      rep.certified_gap += std::max(0.0, v - fstar);
      rep.value = v;
      rep.x = tb.x;
    }
  }
  return rep;
}

Vec HomProjection::lifted() const {
  Vec out(q.size() + 1);
  out << q, mu;
  return out;
}

HomProjection project_onto_hom_upper_image(const VcpProblem& problem, const Vec& v,
                                           const ScalarizeConfig& config) {
  const int m = problem.m();
  const int n = problem.n();
  if (v.size() != m + 1) throw Error(ErrorKind::DimensionMismatch, "v must live in R^{m+1}");
  if (v.norm() > 1.0 + 1e-9) throw Error(ErrorKind::DomainError, "v must lie in the unit ball");
  const Vec vq = v.head(m);
  const double vmu = v[m];
  const OrderingCone& cone = problem.cone();

  // Recession branch: (proj_C(vq), 0).
  HomProjection rec;
  rec.q = cone.project(vq);
  rec.mu = 0.0;
  rec.distance = (v - rec.lifted()).norm();

  // Perspective branch over z = (u, mu), x = u / mu.
  ConvexProgram prog;
  prog.dim = n + 1;
  prog.center = Vec::Zero(n + 1);
  prog.center[n] = 0.5 * (config.mu_min + std::min(1.0, config.mu_max));
  prog.objective = [&](const Vec& z, Vec* g) {
    const double mu = z[n];
    const Vec x = z.head(n) / mu;
    Mat jac;
    const Vec f = problem.objective(x, jac);
    const Vec w = vq - mu * f;
    const Vec r = w - cone.project(w);
    if (g) {
      g->resize(n + 1);
      g->head(n) = -2.0 * jac.transpose() * r;
      (*g)[n] = -2.0 * r.dot(f - jac * x) - 2.0 * (vmu - mu);
    }
    return r.squaredNorm() + (vmu - mu) * (vmu - mu);
  };
  prog.constraint = [&](const Vec& z, Vec* g) {
    const double mu = z[n];
    double best = config.mu_min - mu;
    if (g) {
      *g = Vec::Zero(n + 1);
      (*g)[n] = -1.0;
    }
    if (mu - config.mu_max > best) {
      best = mu - config.mu_max;
      if (g) {
        *g = Vec::Zero(n + 1);
        (*g)[n] = 1.0;
      }
    }
    if (best > 0.0 || problem.constraints().empty()) return best;
    const Vec x = z.head(n) / mu;
    Vec gc;
    const double c = problem.max_constraint(x, &gc);
    if (mu * c > best) {
      best = mu * c;
      if (g) {
        g->head(n) = gc;
        (*g)[n] = c - gc.dot(x);
      }
    }
    return best;
  };

  SolverConfig cfg = config.solver;
  cfg.tolerance = config.projection_tolerance;
  SolveReport best;
  for (double radius = 4.0; radius <= 4.0 * std::pow(8.0, 5); radius *= 8.0) {
    best = minimize_in_ball(prog, radius, cfg);
    if (best.x.size() == 0 || !best.on_ball_boundary) break;
  }
  if (best.x.size() == 0) {
    if (best.status == SolveStatus::Infeasible)
      throw Error(ErrorKind::SolverFailure, "perspective branch found no feasible point (empty S?)");
    throw Error(ErrorKind::SolverFailure, "perspective branch did not converge");
  }

  HomProjection per;
  per.status = best.status;
  per.mu = best.x[n];
  const Vec x = best.x.head(n) / per.mu;
  const Vec f = problem.objective(x);
  per.q = per.mu * f + cone.project(vq - per.mu * f);
  per.distance = (v - per.lifted()).norm();
  per.perspective_x = x;
  if (per.mu > config.mu_min * (1.0 + 1e-6)) per.witness_x = x;

  if (rec.distance < per.distance) {
    rec.perspective_x = x;
    rec.status = per.status;
    return rec;
  }
  return per;
}

PsResult pascoletti_serafini(const VcpProblem& problem, const Vec& reference, const Vec& direction,
                             const ScalarizeConfig& config) {
  const OrderingCone& cone = problem.cone();
  if (!cone.solid()) throw Error(ErrorKind::NonSolidCone, "Pascoletti-Serafini needs a solid ordering cone");
  if (reference.size() != problem.m() || direction.size() != problem.m())
    throw Error(ErrorKind::DimensionMismatch, "reference and direction must live in R^m");
  if (!reference.allFinite()) throw Error(ErrorKind::DomainError, "reference must be finite");
  if (!cone.interior(direction)) throw Error(ErrorKind::DomainError, "direction must lie in the interior of C");
  const int n = problem.n();

  // h(x, t) = d(F(x) - ref - t c, -C) <= 0
  auto cone_gap = [&](const Vec& z, Vec* g) {
    const Vec x = z.head(n);
    const double t = z[n];
    Mat jac;
    const Vec w = problem.objective(x, jac) - reference - t * direction;
    const Vec r = w + cone.project(-w);
    const double h = r.norm();
    if (g) {
      g->resize(n + 1);
      if (h > 0.0) {
        const Vec rh = r / h;
        g->head(n) = jac.transpose() * rh;
        (*g)[n] = -direction.dot(rh);
      } else {
        g->setZero();
      }
    }
    return h;
  };

  ConvexProgram prog;
  prog.dim = n + 1;
  prog.center = Vec::Zero(n + 1);
  prog.objective = [n](const Vec& z, Vec* g) {
    if (g) {
      *g = Vec::Zero(n + 1);
      (*g)[n] = 1.0;
    }
    return z[n];
  };
  prog.constraint = [&](const Vec& z, Vec* g) {
    double best = cone_gap(z, g) - config.ps_feasibility;
    if (!problem.constraints().empty()) {
      Vec gc;
      const double c = problem.max_constraint(z.head(n), &gc);
      if (c > best) {
        best = c;
        if (g) {
          *g = Vec::Zero(n + 1);
          g->head(n) = gc;
        }
      }
    }
    return best;
  };

  PsResult out;
  out.report = minimize(prog, config.solver);
  if (out.report.status == SolveStatus::Infeasible)
    throw Error(ErrorKind::SolverFailure, "Pascoletti-Serafini problem has no feasible point");
  if (out.report.status == SolveStatus::BudgetExhausted && out.report.x.size() == 0)
    throw Error(ErrorKind::BudgetExhausted, "Pascoletti-Serafini solve exhausted its budget");
  out.t = out.report.x[n];
  out.report.x = out.report.x.head(n).eval();
  out.image = problem.objective(out.report.x);
  return out;
}

}  // namespace homvcp
