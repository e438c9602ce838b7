#include <doctest.h>

#include <random>

#include "homvcp/errors.hpp"
#include "homvcp/instances.hpp"

using namespace homvcp;
using nlohmann::json;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Closed form of min_x x^2 - 1 + 2|t - x|, worked out by cases.
double soc_envelope_by_hand(double t) {
  if (t > 1.0) return 2.0 * t - 2.0;
  if (t < -1.0) return -2.0 * t - 2.0;
  return t * t - 1.0;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("parabola membership") {
  const auto p = parabola2d();
  CHECK(p->contains(v2(2, -1)));
  CHECK(p->distance_to_boundary(v2(2, -1)).distance < 1e-9);
  CHECK(p->contains(v2(-2, 3)));
  CHECK(p->distance_to_boundary(v2(-2, 3)).distance < 1e-9);
  CHECK_FALSE(p->contains(v2(-2, 2.9)));
  CHECK(p->contains(v2(0, 5)));
  CHECK(p->distance_to_boundary(v2(0, 5)).distance > 1.0);
}

TEST_CASE("linear2d membership") {
  const auto l = linear2d();
  CHECK(l->contains(v2(1, 0)));
  CHECK(l->distance_to_boundary(v2(1, 0)).distance < 1e-12);
  CHECK_FALSE(l->contains(v2(0.4, 0.4)));
  CHECK(l->recession_generators().size() == 2);
}

TEST_CASE("soc2d cone and envelope") {
  const auto s = soc2d();
  const auto& c = s->problem().cone();
  CHECK(c.contains(v2(0, 1)));
  CHECK_FALSE(c.contains(v2(1, 1)));
  CHECK(c.contains(v2(0.4, 0.9)));
  CHECK(c.solid());
  for (double t = -4.0; t <= 4.0; t += 0.173) CHECK(soc2d_lower_envelope(t) == doctest::Approx(soc_envelope_by_hand(t)).epsilon(1e-9));
}

TEST_CASE("load_problem documents") {
  const VcpProblem p = load_problem(json{{"builtin", "parabola2d"}});
  CHECK(p.m() == 2);
  CHECK(p.n() == 1);
  CHECK(analytic_for(p) != nullptr);

  const VcpProblem q = load_problem(json::parse(R"({"builtin":"parabola2d","cone":{"generators":[[1,0],[0,1]]}})"));
  CHECK(analytic_for(q) == parabola2d());

  CHECK(kind_of([] { load_problem(json::parse(R"({"builtin":"parabola2d","cone":{"generators":[]}})")); }) ==
        ErrorKind::InvalidCone);
  CHECK(kind_of([] { load_problem(json{{"builtin", "nope"}}); }) == ErrorKind::UnknownInstance);
  CHECK(kind_of([] { load_problem(json{{"m", 2}}); }) == ErrorKind::SchemaError);
  CHECK(kind_of([] {
          load_problem(json::parse(R"({"m":1,"n":1,"objective":[{"scale":{"factor":-1,"expr":{"square":{"var":0}}}}],
                                       "cone":{"generators":[[1]]}})"));
        }) == ErrorKind::NonConvex);
  CHECK(kind_of([] {
          load_problem(json::parse(R"({"builtin":"parabola2d","cone":{"generators":[[1,0],[-1,0]]}})"));
        }) == ErrorKind::InvalidCone);
}

TEST_CASE("user problem round trip") {
  const json doc = json::parse(R"({
    "name": "box", "m": 2, "n": 2,
    "objective": [{"var": 0}, {"sum": [{"square": {"affine": {"coef": [1, -1], "const": 0}}}, {"abs": {"var": 1}}]}],
    "constraints": [{"max": [{"affine": {"coef": [1, 0], "const": -3}}, {"affine": {"coef": [-1, 0], "const": -3}}]}],
    "cone": {"soc": {"axis": [1, 1], "aperture": 1.5}}})");
  const VcpProblem p = load_problem(doc);
  const VcpProblem back = load_problem(p.to_json());
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Vec x = v2(normal(rng), normal(rng));
    CHECK((p.objective(x) - back.objective(x)).norm() < 1e-15);
    CHECK(p.max_constraint(x) == back.max_constraint(x));
  }
  CHECK(back.cone() == p.cone());
}

TEST_CASE("property: images plus cone points are members") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::exponential_distribution<double> expo(0.5);
  for (const auto& inst : {parabola2d(), linear2d(), soc2d()}) {
    const auto& prob = inst->problem();
    const auto& gens = prob.cone().generators();
    for (int i = 0; i < 400; ++i) {
      Vec x(prob.n());
      for (int j = 0; j < prob.n(); ++j) x[j] = prob.name() == "linear2d" ? std::abs(normal(rng)) + 0.5 : normal(rng);
      if (!prob.feasible(x)) continue;
      Vec y = prob.objective(x);
      for (const auto& g : gens) y += expo(rng) * g;
      CHECK(inst->contains(y, 1e-9));
    }
  }
}

TEST_CASE("property: boundary points sit on the boundary") {
  for (const auto& inst : {parabola2d(), linear2d(), soc2d()}) {
    const Vec inward = inst->problem().cone().interior_direction();
    for (const auto& piece : inst->boundary()) {
      const double hi = piece.unbounded() ? piece.t0 + 50.0 : piece.t1;
      for (int i = 0; i <= 2000; ++i) {
        const double t = piece.t0 + (hi - piece.t0) * i / 2000.0;
        const Vec y = piece.point(t);
        CHECK(inst->contains(y, 1e-9));
        CHECK_FALSE(inst->contains(y - 1e-4 * inward, 1e-9));
      }
    }
  }
}

TEST_CASE("property: subgradients match finite differences") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (const auto& inst : {parabola2d(), linear2d(), soc2d()}) {
    const auto& prob = inst->problem();
    for (int i = 0; i < 100; ++i) {
      Vec x(prob.n());
      Vec d(prob.n());
      for (int j = 0; j < prob.n(); ++j) {
        x[j] = normal(rng);
        d[j] = normal(rng);
      }
      Mat jac;
      const Vec f = prob.objective(x, jac);
      const double h = 1e-6;
      const Vec fd = (prob.objective(x + h * d) - prob.objective(x - h * d)) / (2 * h);
      CHECK((fd - jac * d).norm() <= 1e-4);
    }
  }
}

TEST_CASE("shifted problems subtract the center") {
  const auto& prob = parabola2d()->problem();
  const VcpProblem s = prob.shifted(v2(1, -20));
  Vec x(1);
  x << 0.5;
  CHECK((s.objective(x) - (prob.objective(x) - v2(1, -20))).norm() < 1e-15);
}

TEST_CASE("dual generators") {
  const auto quad = parabola2d()->problem().cone().dual_generators();
  REQUIRE(quad.size() == 2);
  for (const auto& w : quad) CHECK(w.minCoeff() >= -1e-15);
  const auto soc = soc2d()->problem().cone();
  for (const auto& w : soc.dual_generators())
    for (const auto& g : soc.generators()) CHECK(w.dot(g) >= -1e-12);
}
