#include <doctest.h>

#include <random>

#include "homvcp/errors.hpp"
#include "homvcp/instances.hpp"
#include "homvcp/oracle.hpp"
#include "support.hpp"

using namespace homvcp;
using namespace homvcp::test;

namespace {

ApproxSolution single_vertex(const AnalyticInstance& inst, const Vec& x, double delta) {
  ApproxSolution sol;
  sol.X = {x};
  sol.image_vertices = {inst.problem().objective(x)};
  sol.cone_generators = inst.problem().cone().generators();
  sol.delta_target = delta;
  sol.roi = RoiSpec{v2(0, 0), 1.0};
  return sol;
}

// Excess of hom P over the solution cone from a plain uniform grid on the
// parabola, independent of the adaptive walk.
double uniform_grid_excess(const ApproxSolution& sol) {
  const GenCone g = sol.hom_cone();
  double worst = 0.0;
  for (int i = -400000; i <= 400000; ++i) {
    const double t = i * 2.5e-3;
    worst = std::max(worst, dist_unit_to_truncated(homogenize_point(v2(t, t * t - 1)).dir(), g));
  }
  for (const Vec& d : {v2(1, 0), v2(0, 1)}) worst = std::max(worst, dist_unit_to_truncated(homogenize_direction(d).dir(), g));
  return worst;
}

}  // namespace

TEST_CASE("exact solution on the linear problem measures zero") {
  const auto inst = linear2d();
  ApproxSolution sol = single_vertex(*inst, v2(1, 0), 0.2);
  sol.X.push_back(v2(0, 1));
  sol.image_vertices.push_back(v2(0, 1));
  const VerificationReport rep = brute_force_dtH(sol, *inst, 1000);
  CHECK(rep.measured_gap <= 1e-12);
  CHECK(rep.pass);
}

TEST_CASE("single vertex on the parabola: convergence in resolution") {
  const auto inst = parabola2d();
  const ApproxSolution sol = single_vertex(*inst, Vec::Zero(1), 0.5);
  const double g500 = brute_force_dtH(sol, *inst, 500).measured_gap;
  const double g1000 = brute_force_dtH(sol, *inst, 1000).measured_gap;
  const double g2000 = brute_force_dtH(sol, *inst, 2000).measured_gap;
  CHECK(std::abs(g2000 - g1000) < 1e-3);
  CHECK(std::abs(g1000 - g500) < 1e-3);
  CHECK(g1000 >= g500 - 1e-9);
  CHECK(g2000 >= g1000 - 1e-9);
  CHECK(g2000 == doctest::Approx(uniform_grid_excess(sol)).epsilon(1e-3));
  CHECK(g2000 > 0.0);
  CHECK(g2000 <= 1.0);
}

TEST_CASE("worst ray is reproducible and attains the gap") {
  const auto inst = parabola2d();
  const ApproxSolution sol = single_vertex(*inst, v2(0.5, 0).head(1), 0.5);
  const VerificationReport a = brute_force_dtH(sol, *inst, 800);
  const VerificationReport b = brute_force_dtH(sol, *inst, 800, Execution::Serial);
  CHECK(a.worst_ray == b.worst_ray);
  CHECK(a.measured_gap == b.measured_gap);
  CHECK(dist_unit_to_truncated(a.worst_ray, sol.hom_cone()) == doctest::Approx(a.measured_gap).epsilon(1e-12));
}

TEST_CASE("vertex outside the upper image fails verification") {
  const auto inst = parabola2d();
  ApproxSolution sol = approximate(inst->problem(), run_config(0.5, v2(0, 0), 1.5));
  sol.image_vertices.push_back(v2(0, -2));
  sol.X.push_back(Vec::Zero(1));
  const VerificationReport rep = brute_force_dtH(sol, *inst, 500);
  CHECK_FALSE(rep.inner);
  CHECK_FALSE(rep.pass);
  CHECK(rep.vertex_violation > 0.5);
}

TEST_CASE("oracle rejects other dimensions") {
  const auto inst = parabola2d();
  ApproxSolution sol = single_vertex(*inst, Vec::Zero(1), 0.5);
  sol.roi.center = v3(0, 0, 0);
  try {
    brute_force_dtH(sol, *inst, 100);
    FAIL("expected UnsupportedDimension");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedDimension);
  }
}

TEST_CASE("shrink factor") {
  CHECK(shrink_factor(2.0, 0.5) == doctest::Approx(0.125));
  CHECK(shrink_factor(0.1, 0.5) == 1.0);
  CHECK(shrink_factor(0.0, 0.5) == 1.0);
}

TEST_CASE("existence construction") {
  const auto inst = parabola2d();
  const ExistenceReport rep = existence_construction(*inst, 0.5);
  CHECK(rep.verification.pass);
  CHECK(rep.verification.measured_gap <= 0.5);
  CHECK(rep.net_gap <= 0.25);
  CHECK(rep.shrunk_violation <= 1e-9);
  CHECK(rep.t_bar == doctest::Approx(shrink_factor(rep.max_offset, 0.5)));
  CHECK(!rep.solution.X.empty());
  CHECK(rep.solution.X.size() <= rep.preimage_count);

  try {
    existence_construction(*inst, 0.5, 2);
    FAIL("expected NetTooCoarse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NetTooCoarse);
  }
  // delta >= 1 would make any single point a solution; it is outside the
  // precondition.
  CHECK_THROWS_AS(existence_construction(*inst, 1.0), Error);
}

TEST_CASE("point bound") {
  const auto inst = parabola2d();
  const DenseRays dense = dense_boundary_rays(*inst, v2(0, 0), 2000);

  const PointBoundReport in = point_bound_check(v2(0.5, 3), *inst, 0.1, dense);
  CHECK(in.excess == 0.0);
  CHECK(in.pass);

  const PointBoundReport below = point_bound_check(v2(0, -1.1), *inst, 0.1, dense);
  CHECK(below.bound == doctest::Approx(0.1 / std::sqrt(1.21 + 1.0)));
  CHECK(below.excess <= below.bound + below.slack);
  CHECK(below.pass);

  // relative behavior: the far point at ten times the distance
  const PointBoundReport far = point_bound_check(v2(0, -11), *inst, 10.0, dense);
  CHECK(far.pass);
  CHECK(far.excess / far.bound == doctest::Approx(below.excess / below.bound).epsilon(0.5));

  try {
    point_bound_check(v2(0, -1.5), *inst, 0.1, dense);
    FAIL("expected PreconditionViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionViolation);
  }

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double t = -5.0 + 10.0 * u(rng);
    const double eps = 0.01 + u(rng);
    const double phi = 6.283185307179586 * u(rng);
    const Vec x = v2(t, t * t - 1) + eps * u(rng) * v2(std::cos(phi), std::sin(phi));
    CHECK(point_bound_check(x, *inst, eps, dense).pass);
  }
}
