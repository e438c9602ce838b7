#include "homvcp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "homvcp/errors.hpp"
#include "homvcp/polygon2d.hpp"

namespace homvcp {

using nlohmann::json;

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out || !(out << text)) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

std::string format_human(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string csv_rows(const std::vector<Vec>& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (Index i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_human(r[i]);
    }
    out += '\n';
  }
  return out;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const json& doc, int expected) {
  if (!doc.is_array()) throw Error(ErrorKind::SchemaError, "expected a numeric array");
  Vec v(static_cast<Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) throw Error(ErrorKind::SchemaError, "expected a numeric array");
    v[static_cast<Index>(i)] = doc[i].get<double>();
  }
  if (expected >= 0 && v.size() != expected)
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(expected) + " entries");
  return v;
}

namespace {

template <class T>
void take(const json& doc, const char* key, T& field) {
  if (!doc.contains(key)) return;
  try {
    field = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::SchemaError, std::string("config field '") + key + "' has the wrong type");
  }
}

std::vector<Vec> vecs_from_json(const json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::SchemaError, "expected an array of vectors");
  std::vector<Vec> out;
  for (const auto& v : doc) out.push_back(vec_from_json(v));
  return out;
}

json vecs_to_json(const std::vector<Vec>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vec_to_json(v));
  return out;
}

}  // namespace

EngineConfig engine_config_from_json(const json& doc, EngineConfig c) {
  if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "config document must be an object");
  if (doc.contains("engine")) {
    const json& e = doc["engine"];
    take(e, "seed_direction_count", c.seed_direction_count);
    take(e, "candidate_batch", c.candidate_batch);
    take(e, "perturbations_per_generator", c.perturbations_per_generator);
    take(e, "refine_top", c.refine_top);
    take(e, "refine_steps", c.refine_steps);
    take(e, "safety", c.safety);
    take(e, "far_point_radius", c.far_point_radius);
    take(e, "max_iterations", c.max_iterations);
    take(e, "max_vertices", c.max_vertices);
    take(e, "confirmation_batches", c.confirmation_batches);
    take(e, "seed", c.seed);
    if (e.contains("execution")) {
      const std::string ex = e["execution"].get<std::string>();
      if (ex != "serial" && ex != "parallel") throw Error(ErrorKind::SchemaError, "execution must be serial or parallel");
      c.execution = ex == "serial" ? Execution::Serial : Execution::Parallel;
    }
  }
  if (doc.contains("scalarize")) {
    const json& s = doc["scalarize"];
    take(s, "tie_break", c.scalarize.tie_break);
    take(s, "mu_min", c.scalarize.mu_min);
    take(s, "mu_max", c.scalarize.mu_max);
    take(s, "projection_tolerance", c.scalarize.projection_tolerance);
    take(s, "ps_feasibility", c.scalarize.ps_feasibility);
  }
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    SolverConfig& v = c.scalarize.solver;
    if (s.contains("method")) {
      const std::string m = s["method"].get<std::string>();
      if (m != "ellipsoid" && m != "subgradient") throw Error(ErrorKind::SchemaError, "unknown solver method " + m);
      v.method = m == "ellipsoid" ? SolverMethod::Ellipsoid : SolverMethod::Subgradient;
    }
    take(s, "tolerance", v.tolerance);
    take(s, "max_iterations", v.max_iterations);
    take(s, "step_a", v.step_a);
    take(s, "step_b", v.step_b);
    take(s, "subgradient_cap", v.subgradient_cap);
  }
  return c;
}

json engine_config_to_json(const EngineConfig& c) {
  const SolverConfig& v = c.scalarize.solver;
  return {{"delta", c.delta},
          {"center", vec_to_json(c.roi.center)},
          {"radius", c.roi.radius},
          {"engine",
           {{"seed_direction_count", c.seed_direction_count},
            {"candidate_batch", c.candidate_batch},
            {"perturbations_per_generator", c.perturbations_per_generator},
            {"refine_top", c.refine_top},
            {"refine_steps", c.refine_steps},
            {"safety", c.safety},
            {"far_point_radius", c.far_point_radius},
            {"max_iterations", c.max_iterations},
            {"max_vertices", c.max_vertices},
            {"confirmation_batches", c.confirmation_batches},
            {"seed", c.seed},
            {"execution", c.execution == Execution::Serial ? "serial" : "parallel"}}},
          {"scalarize",
           {{"tie_break", c.scalarize.tie_break},
            {"mu_min", c.scalarize.mu_min},
            {"mu_max", c.scalarize.mu_max},
            {"projection_tolerance", c.scalarize.projection_tolerance},
            {"ps_feasibility", c.scalarize.ps_feasibility}}},
          {"solver",
           {{"method", v.method == SolverMethod::Ellipsoid ? "ellipsoid" : "subgradient"},
            {"tolerance", v.tolerance},
            {"max_iterations", v.max_iterations},
            {"step_a", v.step_a},
            {"step_b", v.step_b},
            {"subgradient_cap", v.subgradient_cap}}}};
}

json solution_to_json(const ApproxSolution& s) {
  json log = json::array();
  for (const auto& c : s.candidate_log)
    log.push_back({{"ray", vec_to_json(c.ray)}, {"distance", c.distance}, {"after", c.after}, {"accepted", c.accepted}});
  return {{"delta", s.delta_target},
          {"center", vec_to_json(s.roi.center)},
          {"radius", s.roi.radius},
          {"gap_estimate", s.gap_estimate},
          {"status", to_string(s.status)},
          {"iterations", s.iterations},
          {"seed", s.seed},
          {"probes", s.probes},
          {"X", vecs_to_json(s.X)},
          {"image_vertices", vecs_to_json(s.image_vertices)},
          {"cone_generators", vecs_to_json(s.cone_generators)},
          {"gap_history", s.gap_history},
          {"notes", s.notes},
          {"candidate_log", log}};
}

ApproxSolution solution_from_json(const json& doc) {
  ApproxSolution s;
  try {
    s.delta_target = doc.at("delta").get<double>();
    s.roi.center = vec_from_json(doc.at("center"));
    s.roi.radius = doc.at("radius").get<double>();
    s.gap_estimate = doc.at("gap_estimate").get<double>();
    const std::string status = doc.at("status").get<std::string>();
    if (status == "Success") s.status = EngineStatus::Success;
    else if (status == "Stalled") s.status = EngineStatus::Stalled;
    else if (status == "BudgetExhausted") s.status = EngineStatus::BudgetExhausted;
    else throw Error(ErrorKind::SchemaError, "unknown status " + status);
    s.iterations = doc.value("iterations", 0);
    s.seed = doc.value("seed", std::uint64_t{1});
    s.probes = doc.value("probes", 0);
    s.X = vecs_from_json(doc.at("X"));
    s.image_vertices = vecs_from_json(doc.at("image_vertices"));
    s.cone_generators = vecs_from_json(doc.at("cone_generators"));
    s.gap_history = doc.value("gap_history", std::vector<double>{});
    s.notes = doc.value("notes", std::vector<std::string>{});
    if (doc.contains("candidate_log")) {
      for (const auto& c : doc["candidate_log"])
        s.candidate_log.push_back({vec_from_json(c.at("ray")), c.at("distance").get<double>(),
                                   c.at("after").get<double>(), c.at("accepted").get<bool>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed solution: ") + e.what());
  }
  const auto m = s.roi.center.size();
  if (s.X.size() != s.image_vertices.size())
    throw Error(ErrorKind::SchemaError, "X and image_vertices differ in length");
  for (const auto& v : s.image_vertices)
    if (v.size() != m) throw Error(ErrorKind::DimensionMismatch, "image vertex dimension differs from the center");
  for (const auto& v : s.cone_generators)
    if (v.size() != m) throw Error(ErrorKind::DimensionMismatch, "cone generator dimension differs from the center");
  return s;
}

std::vector<Vec> export_vertices(const ApproxSolution& s, double far) {
  if (s.m() != 2 || s.image_vertices.empty()) return s.original_vertices();
  std::vector<Vec> out;
  for (const auto& v : closed_export_chain(boundary_polygon(s.image_vertices, s.cone_generators), far)) {
    const Vec p = v + s.roi.center;
    // images of distinct X may coincide up to rounding
    if (!out.empty() && (p - out.back()).norm() <= 1e-9 * (1.0 + p.norm())) continue;
    out.push_back(p);
  }
  return out;
}

SolutionFiles write_solution_dir(const fs::path& dir, const ApproxSolution& solution, const json& problem_doc) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  SolutionFiles files{dir / "solution.json", dir / "vertices.csv", dir / "X.csv"};
  json doc = solution_to_json(solution);
  doc["problem"] = problem_doc;
  write_text_file(files.solution, doc.dump(2) + "\n");
  write_text_file(files.vertices, csv_rows(export_vertices(solution, 10.0 / solution.delta_target)));
  write_text_file(files.x, csv_rows(solution.X));
  return files;
}

LoadedSolution read_solution_dir(const fs::path& dir) {
  const json doc = read_json_file(dir / "solution.json");
  if (!doc.is_object() || !doc.contains("problem"))
    throw Error(ErrorKind::SchemaError, "solution.json carries no problem document");
  return {solution_from_json(doc), doc["problem"]};
}

fs::path write_manifest(const fs::path& dir, const json& manifest) {
  const fs::path path = dir / "manifest.json";
  write_text_file(path, manifest.dump(2) + "\n");
  return path;
}

}  // namespace homvcp
