#include <doctest.h>

#include "homvcp/engine.hpp"
#include "homvcp/errors.hpp"
#include "homvcp/instances.hpp"
#include "homvcp/oracle.hpp"
#include "support.hpp"

using namespace homvcp;
using namespace homvcp::test;

namespace {

void check_same(const ApproxSolution& a, const ApproxSolution& b) {
  REQUIRE(a.X.size() == b.X.size());
  for (std::size_t i = 0; i < a.X.size(); ++i) {
    CHECK(a.X[i] == b.X[i]);
    CHECK(a.image_vertices[i] == b.image_vertices[i]);
  }
  CHECK(a.gap_estimate == b.gap_estimate);
  CHECK(a.iterations == b.iterations);
  CHECK(a.status == b.status);
  CHECK(a.gap_history == b.gap_history);
}

}  // namespace

TEST_CASE("engine runs are deterministic") {
  const auto& prob = parabola2d()->problem();
  EngineConfig cfg = run_config(0.5, v2(0, 0), 1.5, 42);
  const ApproxSolution a = approximate(prob, cfg);
  const ApproxSolution b = approximate(prob, cfg);
  check_same(a, b);
  cfg.execution = Execution::Serial;
  const ApproxSolution c = approximate(prob, cfg);
  check_same(a, c);
}

TEST_CASE("engine output is an inner approximation that meets its target") {
  const auto inst = parabola2d();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ApproxSolution sol = approximate(inst->problem(), run_config(0.5, v2(0, 0), 1.5, seed));
    REQUIRE(sol.status == EngineStatus::Success);
    CHECK(sol.gap_estimate <= 0.5 * 0.9);
    for (const auto& v : sol.original_vertices()) CHECK(inst->membership_violation(v) <= 1e-6);
    for (std::size_t i = 0; i < sol.X.size(); ++i)
      CHECK((inst->problem().objective(sol.X[i]) - sol.original_vertices()[i]).norm() < 1e-12);
    for (const auto& rec : sol.candidate_log)
      if (rec.accepted) CHECK(rec.after < rec.distance);
  }
}

TEST_CASE("shifted region of interest") {
  const auto inst = parabola2d();
  const ApproxSolution sol = approximate(inst->problem(), run_config(0.9, v2(0, -20), 0.4));
  CHECK(sol.status == EngineStatus::Success);
  CHECK(sol.image_vertices.size() == sol.X.size());
  for (const auto& v : sol.original_vertices()) CHECK(inst->membership_violation(v) <= 1e-6);
  const VerificationReport rep = brute_force_dtH(sol, *inst, 1000);
  CHECK(rep.pass);
}

TEST_CASE("second-order ordering cone") {
  const auto inst = soc2d();
  const ApproxSolution sol = approximate(inst->problem(), run_config(0.2, v2(0, 0), 1.0));
  CHECK(sol.status == EngineStatus::Success);
  const VerificationReport rep = brute_force_dtH(sol, *inst, 1000);
  CHECK(rep.pass);
}

TEST_CASE("gap probe") {
  const auto& prob = parabola2d()->problem();
  ApproxSolution sol = approximate(prob, run_config(0.5, v2(0, 0), 1.5));
  const double before = sol.gap_estimate;
  CHECK(gap_probe(sol, prob, 0) == before);
  const double after = gap_probe(sol, prob, 400);
  CHECK(after >= before);
  CHECK(sol.gap_estimate == after);
  CHECK(after <= 0.5);
}

TEST_CASE("budgets and validation") {
  const auto& prob = parabola2d()->problem();
  EngineConfig cfg = run_config(0.05, v2(0, 0), 1.0);
  cfg.max_iterations = 0;
  CHECK(approximate(prob, cfg).status == EngineStatus::BudgetExhausted);

  CHECK_THROWS_AS(approximate(prob, run_config(1.5, v2(0, 0), 1.0)), Error);
  CHECK_THROWS_AS(approximate(prob, run_config(0.5, v3(0, 0, 0), 1.0)), Error);
  CHECK_THROWS_AS(approximate(prob, run_config(0.5, v2(0, 0), -1.0)), Error);
  cfg = run_config(0.5, v2(0, 0), 1.0);
  cfg.safety = 1.0;
  CHECK_THROWS_AS(approximate(prob, cfg), Error);
}

TEST_CASE("progress callback sees every measurement") {
  const auto& prob = parabola2d()->problem();
  EngineConfig cfg = run_config(0.1, v2(0, 0), 5.0);
  int calls = 0;
  cfg.progress = [&](int, double gap) {
    ++calls;
    CHECK(gap >= 0.0);
  };
  const ApproxSolution sol = approximate(prob, cfg);
  CHECK(calls >= sol.iterations + 1);
}

TEST_CASE("distances never grow as vertices are added") {
  const auto& prob = parabola2d()->problem();
  const ApproxSolution sol = approximate(prob, run_config(0.1, v2(0, 0), 5.0));
  const auto rays = sphere_sample(3, 600, 13);
  std::vector<double> prev(rays.size(), 2.0);
  for (std::size_t k = 1; k <= sol.image_vertices.size(); ++k) {
    const std::vector<Vec> head(sol.image_vertices.begin(), sol.image_vertices.begin() + static_cast<long>(k));
    const GenCone g = GenCone::from_points_and_directions(head, sol.cone_generators);
    for (std::size_t i = 0; i < rays.size(); ++i) {
      const double d = dist_unit_to_truncated(rays[i], g);
      CHECK(d <= prev[i] + 1e-12);
      prev[i] = d;
    }
  }
}
