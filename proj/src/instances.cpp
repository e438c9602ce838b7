#include "homvcp/instances.hpp"

#include <algorithm>
#include <limits>

#include "homvcp/errors.hpp"

namespace homvcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Golden-section minimization of a unimodal f on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<Expr> parabola_objectives() {
  return {Expr::variable(1, 0), Expr::sum({Expr::square(Expr::variable(1, 0)), Expr::constant(1, -1.0)})};
}

class Parabola2d final : public AnalyticInstance {
 public:
  Parabola2d() : AnalyticInstance(make()) {}

  static VcpProblem make() {
    VcpProblem p("parabola2d", 1, parabola_objectives(), {},
                 OrderingCone::polyhedral({vec2(1, 0), vec2(0, 1)}));
    p.set_builtin("parabola2d");
    return p;
  }

  static double phi(double t) { return t <= 0.0 ? t * t - 1.0 : -1.0; }

  double membership_violation(const Vec& y) const override { return std::max(0.0, phi(y[0]) - y[1]); }

  std::vector<BoundaryPiece> boundary() const override {
    return {{[](double t) { return vec2(-t, t * t - 1.0); }, 0.0, kInf, vec2(0, 1)},
            {[](double t) { return vec2(t, -1.0); }, 0.0, kInf, vec2(1, 0)}};
  }

  std::vector<Vec> recession_generators() const override { return {vec2(1, 0), vec2(0, 1)}; }

  Vec preimage(const Vec& y) const override {
    Vec x(1);
    x << std::min(y[0], 0.0);
    return x;
  }
};

class Linear2d final : public AnalyticInstance {
 public:
  Linear2d() : AnalyticInstance(make()) {}

  static VcpProblem make() {
    std::vector<Expr> objectives{Expr::variable(2, 0), Expr::variable(2, 1)};
    std::vector<Expr> constraints{Expr::affine(vec2(-1, -1), 1.0), Expr::affine(vec2(-1, 0), 0.0),
                                  Expr::affine(vec2(0, -1), 0.0)};
    VcpProblem p("linear2d", 2, std::move(objectives), std::move(constraints),
                 OrderingCone::polyhedral({vec2(1, 0), vec2(0, 1)}));
    p.set_builtin("linear2d");
    return p;
  }

  double membership_violation(const Vec& y) const override {
    return std::max({0.0, -y[0], -y[1], 1.0 - y[0] - y[1]});
  }

  std::vector<BoundaryPiece> boundary() const override {
    return {{[](double t) { return vec2(0.0, 1.0 + t); }, 0.0, kInf, vec2(0, 1)},
            {[](double t) { return vec2(t, 1.0 - t); }, 0.0, 1.0, Vec()},
            {[](double t) { return vec2(1.0 + t, 0.0); }, 0.0, kInf, vec2(1, 0)}};
  }

  std::vector<Vec> recession_generators() const override { return {vec2(1, 0), vec2(0, 1)}; }

  Vec preimage(const Vec& y) const override { return y.cwiseMax(0.0); }
};

class Soc2d final : public AnalyticInstance {
 public:
  Soc2d() : AnalyticInstance(make()) {}

  static VcpProblem make() {
    VcpProblem p("soc2d", 1, parabola_objectives(), {}, OrderingCone::second_order(vec2(0, 1), 0.5));
    p.set_builtin("soc2d");
    return p;
  }

  double membership_violation(const Vec& y) const override {
    return std::max(0.0, soc2d_lower_envelope(y[0]) - y[1]);
  }

  std::vector<BoundaryPiece> boundary() const override {
    const double s = std::sqrt(5.0);
    return {{[](double t) { return vec2(t, t * t - 1.0); }, -1.0, 1.0, Vec()},
            {[](double t) { return vec2(1.0 + t, 2.0 * t); }, 0.0, kInf, vec2(1 / s, 2 / s)},
            {[](double t) { return vec2(-1.0 - t, 2.0 * t); }, 0.0, kInf, vec2(-1 / s, 2 / s)}};
  }

  std::vector<Vec> recession_generators() const override { return problem().cone().generators(); }

  Vec preimage(const Vec& y) const override {
    Vec x(1);
    x << std::clamp(y[0], -1.0, 1.0);
    return x;
  }
};

}  // namespace

double soc2d_lower_envelope(double t) {
  auto f = [t](double x) { return x * x - 1.0 + 2.0 * std::abs(t - x); };
  const double span = 2.0 + std::abs(t);
  const double x = golden_min(f, -span, span, 1e-13);
  return std::min({f(x), f(std::clamp(t, -1.0, 1.0))});
}

BoundaryDistance AnalyticInstance::distance_to_boundary(const Vec& y, double tol) const {
  BoundaryDistance best{kInf, Vec()};
  const int grid = 400;
  for (const auto& piece : boundary()) {
    auto dist = [&](double t) { return (piece.point(t) - y).norm(); };
    double hi = piece.t1;
    if (piece.unbounded()) {
      // Far enough that every later point is farther than the piece start.
      const double reach = y.norm() + dist(piece.t0);
      hi = piece.t0 + 1.0;
      while (piece.point(hi).norm() <= reach + 1.0) hi = piece.t0 + 2.0 * (hi - piece.t0);
    }
    int arg = 0;
    double val = kInf;
    for (int i = 0; i <= grid; ++i) {
      const double t = piece.t0 + (hi - piece.t0) * i / grid;
      const double d = dist(t);
      if (d < val) {
        val = d;
        arg = i;
      }
    }
    const double step = (hi - piece.t0) / grid;
    const double lo_t = piece.t0 + std::max(0, arg - 1) * step;
    const double hi_t = piece.t0 + std::min(grid, arg + 1) * step;
    const double t = golden_min(dist, lo_t, hi_t, tol * std::max(1.0, hi_t - lo_t));
    for (double cand : {t, piece.t0 + arg * step}) {
      const double d = dist(cand);
      if (d < best.distance) best = {d, piece.point(cand)};
    }
  }
  return best;
}

std::shared_ptr<const AnalyticInstance> parabola2d() {
  static const auto inst = std::make_shared<const Parabola2d>();
  return inst;
}

std::shared_ptr<const AnalyticInstance> linear2d() {
  static const auto inst = std::make_shared<const Linear2d>();
  return inst;
}

std::shared_ptr<const AnalyticInstance> soc2d() {
  static const auto inst = std::make_shared<const Soc2d>();
  return inst;
}

std::vector<std::string> builtin_names() { return {"parabola2d", "linear2d", "soc2d"}; }

std::shared_ptr<const AnalyticInstance> builtin_instance(const std::string& name) {
  if (name == "parabola2d") return parabola2d();
  if (name == "linear2d") return linear2d();
  if (name == "soc2d") return soc2d();
  throw Error(ErrorKind::UnknownInstance, "no builtin named '" + name + "'");
}

std::shared_ptr<const AnalyticInstance> analytic_for(const VcpProblem& problem) {
  if (!problem.builtin()) return nullptr;
  auto inst = builtin_instance(*problem.builtin());
  if (!(inst->problem().cone() == problem.cone())) return nullptr;
  return inst;
}

}  // namespace homvcp
