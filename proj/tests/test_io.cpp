#include <doctest.h>

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "homvcp/errors.hpp"
#include "homvcp/instances.hpp"
#include "homvcp/io.hpp"
#include "support.hpp"

using namespace homvcp;
using namespace homvcp::test;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("homvcp_io_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("human number format") {
  CHECK(format_human(5.252658562807043) == "5.25266");
  CHECK(format_human(-20.0) == "-20");
  CHECK(format_human(1e-12) == "1e-12");
  CHECK(csv_rows({v2(1, 2), v2(0.5, -0.25)}) == "1,2\n0.5,-0.25\n");
}

TEST_CASE("vectors from json") {
  CHECK(vec_from_json(json::parse("[1, 2.5]")) == v2(1, 2.5));
  CHECK_THROWS_AS(vec_from_json(json::parse("[1, \"a\"]")), Error);
  CHECK_THROWS_AS(vec_from_json(json::parse("{}")), Error);
  CHECK_THROWS_AS(vec_from_json(json::parse("[1]"), 2), Error);
}

TEST_CASE("solution json round trip keeps full precision") {
  const auto& prob = parabola2d()->problem();
  const ApproxSolution sol = approximate(prob, run_config(0.5, v2(0.1, -0.3), 1.5, 7));
  const ApproxSolution back = solution_from_json(json::parse(solution_to_json(sol).dump()));
  REQUIRE(back.X.size() == sol.X.size());
  for (std::size_t i = 0; i < sol.X.size(); ++i) {
    CHECK(back.X[i] == sol.X[i]);
    CHECK(back.image_vertices[i] == sol.image_vertices[i]);
  }
  CHECK(back.gap_estimate == sol.gap_estimate);
  CHECK(back.roi.center == sol.roi.center);
  CHECK(back.status == sol.status);
  CHECK(back.seed == sol.seed);
  CHECK(back.candidate_log.size() == sol.candidate_log.size());
  CHECK_THROWS_AS(solution_from_json(json{{"delta", 0.5}}), Error);
}

TEST_CASE("engine config documents") {
  const EngineConfig c = engine_config_from_json(json::parse(R"({
    "engine": {"candidate_batch": 300, "safety": 0.2, "execution": "serial", "seed": 9},
    "scalarize": {"tie_break": false},
    "solver": {"method": "subgradient", "tolerance": 1e-8}})"));
  CHECK(c.candidate_batch == 300);
  CHECK(c.safety == 0.2);
  CHECK(c.execution == Execution::Serial);
  CHECK(c.seed == 9);
  CHECK_FALSE(c.scalarize.tie_break);
  CHECK(c.scalarize.solver.method == SolverMethod::Subgradient);
  CHECK(c.scalarize.solver.tolerance == 1e-8);
  CHECK(c.max_iterations == EngineConfig{}.max_iterations);

  const EngineConfig again = engine_config_from_json(engine_config_to_json(c));
  CHECK(engine_config_to_json(again) == engine_config_to_json(c));

  CHECK_THROWS_AS(engine_config_from_json(json::parse(R"({"engine": {"safety": "high"}})")), Error);
  CHECK_THROWS_AS(engine_config_from_json(json::parse(R"({"solver": {"method": "newton"}})")), Error);
  CHECK_THROWS_AS(engine_config_from_json(json::parse("[]")), Error);
}

TEST_CASE("solution directories") {
  const auto inst = parabola2d();
  const ApproxSolution sol = approximate(inst->problem(), run_config(0.5, v2(0, 0), 1.5));
  const fs::path dir = scratch("sol");
  const SolutionFiles files = write_solution_dir(dir, sol, inst->problem().to_json());
  CHECK(fs::exists(files.solution));
  CHECK(fs::exists(files.x));

  const auto rows = lines_of(files.vertices);
  REQUIRE(rows.size() >= 4);
  CHECK(rows.front() == rows.back());
  for (const auto& row : rows) {
    std::stringstream ss(row);
    double x = 0, y = 0;
    char comma = 0;
    ss >> x >> comma >> y;
    CHECK(comma == ',');
    CHECK(inst->membership_violation(v2(x, y)) <= 1e-4);
  }
  CHECK(lines_of(files.x).size() == sol.X.size());

  const LoadedSolution back = read_solution_dir(dir);
  CHECK(back.problem_doc == json{{"builtin", "parabola2d"}});
  CHECK(back.solution.image_vertices.size() == sol.image_vertices.size());

  try {
    read_solution_dir(scratch("missing"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
  fs::remove_all(dir.parent_path());
}
