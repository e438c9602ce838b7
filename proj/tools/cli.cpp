#include "cli.hpp"

#include <chrono>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "homvcp/analytics.hpp"
#include "homvcp/engine.hpp"
#include "homvcp/instances.hpp"
#include "homvcp/io.hpp"
#include "homvcp/oracle.hpp"
#include "homvcp/problem.hpp"
#include "homvcp/service.hpp"

namespace homvcp {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoError: return 1;
    case ErrorKind::SolverFailure:
    case ErrorKind::BudgetExhausted:
    case ErrorKind::NumericalFailure:
    case ErrorKind::NetTooCoarse: return 3;
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::NonSolidCone: return 4;
    case ErrorKind::NeitherCase:
    case ErrorKind::PreconditionViolation: return 6;
    default: return 2;
  }
}

namespace {

constexpr int kVerifyFailed = 5;

struct Options {
  std::string problem;
  std::string builtin;
  std::string config;
  std::string out;
  std::string solution;
  std::vector<double> center;
  std::vector<double> point;
  double delta = 0.0;
  double radius = 1.0;
  double alpha_target = 0.0;
  double far = 0.0;
  int count = 200;
  int resolution = 1000;
  int net = 0;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::uint64_t seed = 1;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size())); }

json problem_document(const Options& o) {
  if (!o.problem.empty() && !o.builtin.empty())
    throw Error(ErrorKind::DomainError, "--problem and --builtin are mutually exclusive");
  if (!o.problem.empty()) return read_json_file(o.problem);
  if (!o.builtin.empty()) return {{"builtin", o.builtin}};
  throw Error(ErrorKind::DomainError, "one of --problem or --builtin is required");
}

std::string problem_reference(const Options& o) { return o.problem.empty() ? "builtin:" + o.builtin : o.problem; }

fs::path sidecar_manifest(const fs::path& file) {
  fs::path p = file;
  p.replace_extension(".manifest.json");
  return p;
}

json base_manifest(const std::string& command, const Clock& clock) {
  return {{"command", command}, {"timing_seconds", clock.seconds()}};
}

std::shared_ptr<const AnalyticInstance> require_analytic(const VcpProblem& problem) {
  auto inst = analytic_for(problem);
  if (!inst) throw Error(ErrorKind::UnsupportedDimension, "verification needs a built-in analytic problem");
  return inst;
}

int cmd_curve(const Options& o, std::ostream& out) {
  Clock clock;
  const ErrorCurve c = error_curve(o.delta, o.count);
  std::ostringstream csv;
  csv << "# region_of_validity=" << format_human(c.r_validity) << "\n";
  csv << "r,alpha\n";
  for (const auto& [r, a] : c.samples) csv << format_human(r) << ',' << format_human(a) << '\n';
  if (o.out.empty()) {
    out << csv.str();
    return 0;
  }
  write_text_file(o.out, csv.str());
  json m = base_manifest("curve", clock);
  m["config"] = {{"delta", o.delta}, {"count", o.count}};
  m["outputs"] = {{"curve", o.out}};
  m["status"] = "ok";
  write_text_file(sidecar_manifest(o.out), m.dump(2) + "\n");
  out << o.out << "\n";
  return 0;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  json rep = {{"delta", o.delta}, {"region_of_validity", region_of_validity(o.delta)}};
  if (o.radius > 0.0) {
    rep["radius"] = o.radius;
    try {
      rep["alpha"] = alpha(o.radius, o.delta);
      const WorstCase w = worst_case_construction(o.radius, o.delta);
      rep["worst_case"] = {{"y", w.y}, {"n", w.n}, {"achieved", w.achieved}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OutOfValidity) throw;
      rep["alpha_omitted"] = "OutOfValidity";
    }
    if (o.alpha_target > 0.0) rep["max_delta_for_alpha"] = max_delta_for(o.radius, o.alpha_target);
  }
  out << rep.dump(2) << "\n";
  return 0;
}

int cmd_solve(const Options& o, std::ostream& out) {
  Clock clock;
  if (o.out.empty()) throw Error(ErrorKind::DomainError, "--out is required");
  const json doc = problem_document(o);
  const VcpProblem problem = load_problem(doc);
  EngineConfig cfg = o.config.empty() ? EngineConfig{} : engine_config_from_json(read_json_file(o.config));
  cfg.delta = o.delta;
  cfg.roi.center = o.center.empty() ? Vec(Vec::Zero(problem.m())) : to_vec(o.center);
  cfg.roi.radius = o.radius;
  cfg.seed = o.seed;
  const ApproxSolution sol = approximate(problem, cfg);
  const SolutionFiles files = write_solution_dir(o.out, sol, problem.to_json());
  const bool partial = sol.status != EngineStatus::Success;
  json m = base_manifest("solve", clock);
  m["problem"] = problem_reference(o);
  m["config"] = engine_config_to_json(cfg);
  m["outputs"] = {{"solution", files.solution}, {"vertices", files.vertices}, {"X", files.x}};
  m["status"] = to_string(sol.status);
  m["partial"] = partial;
  m["gap_estimate"] = sol.gap_estimate;
  m["gap_is_estimate"] = true;
  write_manifest(o.out, m);
  out << json{{"status", to_string(sol.status)}, {"gap_estimate", sol.gap_estimate},
              {"vertex_count", sol.X.size()}, {"out", o.out}}.dump()
      << "\n";
  return partial ? 3 : 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  Clock clock;
  const LoadedSolution loaded = read_solution_dir(o.solution);
  const VcpProblem problem = load_problem(loaded.problem_doc);
  const auto inst = require_analytic(problem);
  const VerificationReport rep = brute_force_dtH(loaded.solution, *inst, o.resolution);
  const fs::path path = o.out.empty() ? fs::path(o.solution) / "report.json" : fs::path(o.out);
  write_text_file(path, rep.to_json().dump(2) + "\n");
  json m = base_manifest("verify", clock);
  m["problem"] = loaded.problem_doc;
  m["config"] = {{"resolution", o.resolution}, {"solution", o.solution}};
  m["outputs"] = {{"report", path}};
  m["status"] = rep.pass ? "pass" : "fail";
  write_text_file(sidecar_manifest(path), m.dump(2) + "\n");
  out << json{{"pass", rep.pass}, {"measured_gap", rep.measured_gap}, {"delta", rep.delta}, {"report", path}}.dump()
      << "\n";
  return rep.pass ? 0 : kVerifyFailed;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const LoadedSolution loaded = read_solution_dir(o.solution);
  const VcpProblem problem = load_problem(loaded.problem_doc);
  const auto inst = require_analytic(problem);
  const ApproxSolution& sol = loaded.solution;
  const Vec point = to_vec(o.point);
  if (point.size() != sol.m()) throw Error(ErrorKind::DimensionMismatch, "--point must have m coordinates");
  const BoundaryClassification c = classify_boundary_point(point - sol.roi.center, sol, *inst);
  json rep = {{"point", vec_to_json(point)},
              {"kind", to_string(c.kind)},
              {"bound", c.bound},
              {"measured", c.measured},
              {"q", c.q},
              {"witness", vec_to_json(c.kind == BoundaryKind::NearBoundary ? Vec(c.witness + sol.roi.center) : c.witness)}};
  out << rep.dump(2) << "\n";
  if (!o.out.empty()) write_text_file(o.out, rep.dump(2) + "\n");
  return 0;
}

int cmd_export(const Options& o, std::ostream& out) {
  Clock clock;
  const LoadedSolution loaded = read_solution_dir(o.solution);
  const double far = o.far > 0.0 ? o.far : 10.0 / loaded.solution.delta_target;
  const fs::path path = o.out.empty() ? fs::path(o.solution) / "vertices.csv" : fs::path(o.out);
  write_text_file(path, csv_rows(export_vertices(loaded.solution, far)));
  json m = base_manifest("export", clock);
  m["problem"] = loaded.problem_doc;
  m["config"] = {{"far", far}, {"solution", o.solution}};
  m["outputs"] = {{"vertices", path}};
  m["status"] = "ok";
  write_text_file(sidecar_manifest(path), m.dump(2) + "\n");
  out << path.string() << "\n";
  return 0;
}

int cmd_existence(const Options& o, std::ostream& out) {
  Clock clock;
  if (o.out.empty()) throw Error(ErrorKind::DomainError, "--out is required");
  const json doc = problem_document(o);
  const VcpProblem problem = load_problem(doc);
  const auto inst = require_analytic(problem);
  const ExistenceReport rep = existence_construction(*inst, o.delta, o.net, o.resolution);
  const SolutionFiles files = write_solution_dir(o.out, rep.solution, problem.to_json());
  json report = rep.verification.to_json();
  report["net_size"] = rep.net_size;
  report["net_gap"] = rep.net_gap;
  report["t_bar"] = rep.t_bar;
  report["max_offset"] = rep.max_offset;
  report["preimage_count"] = rep.preimage_count;
  report["shrunk_violation"] = rep.shrunk_violation;
  const fs::path report_path = fs::path(o.out) / "report.json";
  write_text_file(report_path, report.dump(2) + "\n");
  json m = base_manifest("existence", clock);
  m["problem"] = problem_reference(o);
  m["config"] = {{"delta", o.delta}, {"net", o.net}, {"resolution", o.resolution}};
  m["outputs"] = {{"solution", files.solution}, {"vertices", files.vertices}, {"X", files.x}, {"report", report_path}};
  m["status"] = rep.verification.pass ? "pass" : "fail";
  m["partial"] = false;
  write_manifest(o.out, m);
  out << json{{"pass", rep.verification.pass}, {"measured_gap", rep.verification.measured_gap},
              {"vertex_count", rep.solution.X.size()}, {"out", o.out}}.dump()
      << "\n";
  return rep.verification.pass ? 0 : kVerifyFailed;
}

int cmd_serve(const Options& o, std::ostream& out) {
  EngineConfig cfg = o.config.empty() ? EngineConfig{} : engine_config_from_json(read_json_file(o.config));
  Service service(cfg);
  out << "listening on " << o.host << ":" << o.port << std::endl;
  serve_http(service, o.host, o.port);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneous delta-approximations of convex vector optimization problems"};
  app.require_subcommand(1);
  Options o;

  auto add_problem = [&](CLI::App* c) {
    c->add_option("--problem", o.problem, "problem document (json)");
    c->add_option("--builtin", o.builtin, "built-in problem name");
  };
  auto add_delta = [&](CLI::App* c) { c->add_option("--delta", o.delta, "precision delta in (0, 1)")->required(); };

  auto* curve = app.add_subcommand("curve", "sample the error curve alpha(r, delta)");
  add_delta(curve);
  curve->add_option("--count", o.count, "number of samples");
  curve->add_option("--out", o.out, "output csv (stdout if omitted)");

  auto* analyze = app.add_subcommand("analyze", "region of validity and error bound");
  add_delta(analyze);
  analyze->add_option("--radius", o.radius, "RoI radius");
  analyze->add_option("--alpha", o.alpha_target, "target error for the largest admissible delta");

  auto* solve = app.add_subcommand("solve", "compute a homogeneous delta-approximation");
  add_problem(solve);
  add_delta(solve);
  solve->add_option("--center", o.center, "RoI center, comma separated")->delimiter(',');
  solve->add_option("--radius", o.radius, "RoI radius");
  solve->add_option("--out", o.out, "output directory")->required();
  solve->add_option("--seed", o.seed, "random seed");
  solve->add_option("--config", o.config, "engine config document (json)");

  auto* verify = app.add_subcommand("verify", "brute-force truncated Hausdorff check of a solution");
  verify->add_option("--solution", o.solution, "solution directory")->required();
  verify->add_option("--resolution", o.resolution, "oracle resolution (chord 1/resolution)");
  verify->add_option("--out", o.out, "report path (default <solution>/report.json)");

  auto* classify = app.add_subcommand("classify", "classify a boundary point of the approximation");
  classify->add_option("--solution", o.solution, "solution directory")->required();
  classify->add_option("--point", o.point, "point on the approximate boundary, comma separated")
      ->delimiter(',')
      ->required();
  classify->add_option("--out", o.out, "also write the report here");

  auto* exp = app.add_subcommand("export", "write the closed vertex chain of a solution");
  exp->add_option("--solution", o.solution, "solution directory")->required();
  exp->add_option("--out", o.out, "vertex csv (default <solution>/vertices.csv)");
  exp->add_option("--far", o.far, "distance of the far points on the extreme rays");

  auto* existence = app.add_subcommand("existence", "net-and-shrink construction on a built-in problem");
  add_problem(existence);
  add_delta(existence);
  existence->add_option("--net", o.net, "latitude rings of the net (0 picks from delta)");
  existence->add_option("--resolution", o.resolution, "verification resolution");
  existence->add_option("--out", o.out, "output directory")->required();

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--host", o.host, "listen address");
  serve->add_option("--port", o.port, "listen port");
  serve->add_option("--config", o.config, "engine config document (json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (curve->parsed()) return cmd_curve(o, out);
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (classify->parsed()) return cmd_classify(o, out);
    if (exp->parsed()) return cmd_export(o, out);
    if (existence->parsed()) return cmd_existence(o, out);
    if (serve->parsed()) return cmd_serve(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace homvcp
