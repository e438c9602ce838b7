#include "homvcp/service.hpp"

#include <chrono>
#include <ctime>
#include <thread>
#include <vector>

#include "homvcp/analytics.hpp"
#include "homvcp/errors.hpp"
#include "homvcp/io.hpp"
#include "homvcp/polygon2d.hpp"
#include "homvcp/scalarize.hpp"

namespace homvcp {

using nlohmann::json;

struct Session {
  std::string id;
  json problem_doc;
  std::unique_ptr<VcpProblem> problem;
  std::string created;
  std::string updated;

  mutable std::mutex mutex;
  /// Completed runs in order; entry k-1 belongs to run k.
  std::vector<json> history;
  std::string state = "idle";
  int run = 0;
  int iteration = 0;
  double gap = 1.0;
  json error;
  int error_status = 500;
  std::chrono::steady_clock::time_point started;
  std::thread worker;
};

namespace {

std::string now_iso() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ServiceResponse failure(int status, const std::string& kind, const std::string& message) {
  return {status, {{"error", kind}, {"message", message}}};
}

ServiceResponse failure(const Error& e) { return failure(http_status(e.kind()), to_string(e.kind()), e.what()); }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    const std::size_t j = path.find('/', i);
    const std::size_t end = j == std::string::npos ? path.size() : j;
    if (end > i) out.push_back(path.substr(i, end - i));
    i = end + 1;
  }
  return out;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("body is not valid json: ") + e.what());
  }
}

double number_field(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number())
    throw Error(ErrorKind::SchemaError, std::string("field '") + key + "' must be a number");
  return doc[key].get<double>();
}

double query_number(const std::map<std::string, std::string>& query, const std::string& key) {
  const auto it = query.find(key);
  if (it == query.end()) throw Error(ErrorKind::SchemaError, "missing query parameter '" + key + "'");
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::SchemaError, "query parameter '" + key + "' must be a number");
  }
}

}  // namespace

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSolidCone:
    case ErrorKind::UnsupportedDimension: return 422;
    case ErrorKind::SolverFailure:
    case ErrorKind::BudgetExhausted:
    case ErrorKind::NumericalFailure:
    case ErrorKind::NetTooCoarse:
    case ErrorKind::IoError: return 500;
    default: return 400;
  }
}

json solution_summary(const ApproxSolution& s, const VcpProblem& problem, int run) {
  const double far = 10.0 / s.delta_target;
  json far_points = json::array();
  if (s.m() == 2 && !s.image_vertices.empty()) {
    const Polygon2d poly = boundary_polygon(s.image_vertices, s.cone_generators);
    far_points.push_back(vec_to_json(poly.chain.front() + far * poly.ray_b + s.roi.center));
    far_points.push_back(vec_to_json(poly.chain.back() + far * poly.ray_a + s.roi.center));
  } else if (!s.image_vertices.empty()) {
    for (const auto& d : s.cone_generators) far_points.push_back(vec_to_json(s.image_vertices.front() + far * d + s.roi.center));
  }
  json vertices = json::array();
  for (const auto& v : export_vertices(s, far)) vertices.push_back(vec_to_json(v));
  json image_points = json::array();
  for (const auto& v : s.original_vertices()) image_points.push_back(vec_to_json(v));
  json xs = json::array();
  for (const auto& x : s.X) xs.push_back(vec_to_json(x));
  json directions = json::array();
  for (const auto& d : s.cone_generators) directions.push_back(vec_to_json(d));

  json out = {{"run", run},
              {"problem", problem.name()},
              {"delta", s.delta_target},
              {"center", vec_to_json(s.roi.center)},
              {"radius", s.roi.radius},
              {"status", to_string(s.status)},
              {"gap_estimate", s.gap_estimate},
              {"iterations", s.iterations},
              {"vertices", vertices},
              {"image_points", image_points},
              {"directions", directions},
              {"far_points", far_points},
              {"X", xs},
              {"region_of_validity", region_of_validity(s.delta_target)}};
  try {
    out["bound"] = alpha(s.roi.radius, s.delta_target);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OutOfValidity) throw;
    out["bound_omitted"] = "OutOfValidity";
  }
  return out;
}

Service::Service(EngineConfig base) : base_(std::move(base)) {}

Service::~Service() { wait_idle(); }

void Service::wait_idle() {
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  for (const auto& s : all) {
    std::thread t;
    {
      std::lock_guard<std::mutex> lock(s->mutex);
      t = std::move(s->worker);
    }
    if (t.joinable()) t.join();
  }
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

ServiceResponse Service::handle(const std::string& method, const std::string& path,
                                const std::map<std::string, std::string>& query, const std::string& body) {
  try {
    const auto seg = split_path(path);
    if (seg.size() == 1 && seg[0] == "curve") {
      if (method != "GET") return failure(405, "MethodNotAllowed", "use GET");
      return curve(query);
    }
    if (seg.empty() || seg[0] != "sessions") return failure(404, "NotFound", "no route for " + path);
    if (seg.size() == 1) {
      if (method != "POST") return failure(405, "MethodNotAllowed", "use POST");
      return create_session(parse_body(body));
    }
    const auto s = find(seg[1]);
    if (!s) return failure(404, "NotFound", "unknown session " + seg[1]);
    const std::string op = seg.size() > 2 ? seg[2] : "";
    const bool get = method == "GET";
    if (seg.size() == 2 && get)
      return {200, {{"id", s->id}, {"problem", s->problem_doc}, {"created", s->created}, {"updated", s->updated}}};
    if (seg.size() == 3 && op == "approximate" && method == "POST") return approximate(s, parse_body(body));
    if (seg.size() == 3 && op == "status" && get) return status(s);
    if (seg.size() == 4 && op == "result" && get) return result(s, seg[3]);
    if (seg.size() == 3 && op == "refine" && method == "POST") return refine(s, parse_body(body));
    if (seg.size() == 3 && op == "history" && get) return history(s);
    return failure(404, "NotFound", "no route for " + method + " " + path);
  } catch (const Error& e) {
    return failure(e);
  } catch (const std::exception& e) {
    return failure(500, "InternalError", e.what());
  }
}

ServiceResponse Service::create_session(const json& body) {
  const json doc = body.is_object() && body.contains("problem") ? body["problem"] : body;
  auto s = std::make_shared<Session>();
  s->problem = std::make_unique<VcpProblem>(load_problem(doc));
  s->problem_doc = s->problem->to_json();
  s->created = s->updated = now_iso();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    s->id = "s" + std::to_string(next_id_++);
    sessions_[s->id] = s;
  }
  return {201, {{"id", s->id}, {"problem", s->problem->name()}, {"m", s->problem->m()}, {"n", s->problem->n()},
                {"solid_cone", s->problem->cone().solid()}, {"created", s->created}}};
}

ServiceResponse Service::curve(const std::map<std::string, std::string>& query) const {
  const double delta = query_number(query, "delta");
  const int count = query.count("count") ? static_cast<int>(query_number(query, "count")) : 200;
  const ErrorCurve c = error_curve(delta, count);
  json samples = json::array();
  for (const auto& [r, a] : c.samples) samples.push_back({{"r", r}, {"alpha", a}});
  return {200, {{"delta", c.delta}, {"count", count}, {"region_of_validity", c.r_validity}, {"samples", samples}}};
}

ServiceResponse Service::approximate(const std::shared_ptr<Session>& s, const json& doc) {
  EngineConfig cfg = base_;
  cfg.progress = nullptr;
  cfg.delta = number_field(doc, "delta");
  if (!doc.contains("center")) throw Error(ErrorKind::SchemaError, "field 'center' is required");
  cfg.roi.center = vec_from_json(doc["center"], s->problem->m());
  cfg.roi.radius = number_field(doc, "radius");
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  cfg.validate(s->problem->m());
  const bool wait = doc.value("wait", false);

  std::thread previous;
  int run = 0;
  {
    std::lock_guard<std::mutex> lock(s->mutex);
    if (s->state == "running") return failure(409, "Conflict", "a run is already active on session " + s->id);
    previous = std::move(s->worker);
    run = static_cast<int>(s->history.size()) + 1;
    s->state = "running";
    s->run = run;
    s->iteration = 0;
    s->gap = 1.0;
    s->error = nullptr;
    s->started = std::chrono::steady_clock::now();
    s->updated = now_iso();
  }
  if (previous.joinable()) previous.join();

  auto job = [s, cfg, run, doc]() mutable {
    Session* raw = s.get();
    cfg.progress = [raw](int iteration, double gap) {
      std::lock_guard<std::mutex> lock(raw->mutex);
      raw->iteration = iteration;
      raw->gap = gap;
    };
    try {
      const ApproxSolution sol = homvcp::approximate(*s->problem, cfg);
      json summary = solution_summary(sol, *s->problem, run);
      std::lock_guard<std::mutex> lock(s->mutex);
      s->history.push_back({{"run", run},
                            {"request", {{"delta", cfg.delta}, {"center", vec_to_json(cfg.roi.center)},
                                         {"radius", cfg.roi.radius}, {"seed", cfg.seed}}},
                            {"summary", std::move(summary)}});
      s->state = "done";
      s->gap = sol.gap_estimate;
      s->updated = now_iso();
    } catch (const Error& e) {
      std::lock_guard<std::mutex> lock(s->mutex);
      s->state = "failed";
      s->error = {{"error", to_string(e.kind())}, {"message", e.what()}};
      s->error_status = http_status(e.kind());
      s->updated = now_iso();
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(s->mutex);
      s->state = "failed";
      s->error = {{"error", "InternalError"}, {"message", e.what()}};
      s->error_status = 500;
      s->updated = now_iso();
    }
  };

  if (wait) {
    job();
    std::lock_guard<std::mutex> lock(s->mutex);
    if (s->state == "failed") return {s->error_status, s->error};
    return {200, s->history.back()["summary"]};
  }
  std::lock_guard<std::mutex> lock(s->mutex);
  s->worker = std::thread(std::move(job));
  return {202, {{"session", s->id}, {"run", run}, {"state", "running"}}};
}

ServiceResponse Service::status(const std::shared_ptr<Session>& s) const {
  std::lock_guard<std::mutex> lock(s->mutex);
  json out = {{"session", s->id},
              {"state", s->state},
              {"run", s->run},
              {"iteration", s->iteration},
              {"gap_estimate", s->gap},
              {"completed_runs", s->history.size()},
              {"updated", s->updated}};
  if (s->state == "running")
    out["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - s->started).count();
  if (!s->error.is_null()) out["failure"] = s->error;
  return {200, out};
}

ServiceResponse Service::result(const std::shared_ptr<Session>& s, const std::string& k) const {
  int run = 0;
  try {
    std::size_t used = 0;
    run = std::stoi(k, &used);
    if (used != k.size()) throw std::invalid_argument(k);
  } catch (const std::exception&) {
    return failure(400, "SchemaError", "run number must be an integer");
  }
  std::lock_guard<std::mutex> lock(s->mutex);
  if (run >= 1 && run <= static_cast<int>(s->history.size())) return {200, s->history[run - 1]["summary"]};
  if (s->state == "running" && run == s->run)
    return {202, {{"session", s->id}, {"run", run}, {"state", "running"}, {"iteration", s->iteration}}};
  return failure(404, "NotFound", "no result " + k + " on session " + s->id);
}

ServiceResponse Service::refine(const std::shared_ptr<Session>& s, const json& doc) const {
  const VcpProblem& problem = *s->problem;
  if (!problem.cone().solid()) throw Error(ErrorKind::NonSolidCone, "refinement needs a solid ordering cone");
  if (!doc.contains("point")) throw Error(ErrorKind::SchemaError, "field 'point' is required");
  const Vec point = vec_from_json(doc["point"], problem.m());
  const Vec dir = doc.contains("direction") && !doc["direction"].is_null() ? vec_from_json(doc["direction"], problem.m())
                                                                           : problem.cone().interior_direction();
  const PsResult ps = pascoletti_serafini(problem, point, dir, base_.scalarize);
  if (ps.report.status == SolveStatus::Unbounded)
    throw Error(ErrorKind::DomainError, "the reference line does not meet the upper image");
  json out = {{"point", vec_to_json(point)},   {"direction", vec_to_json(dir)}, {"image", vec_to_json(ps.image)},
              {"x", vec_to_json(ps.report.x)}, {"t", ps.t},                    {"solver_status", to_string(ps.report.status)}};
  if (ps.t < 0.0) out["note"] = "reference point lies inside the upper image (t < 0)";
  return {200, out};
}

ServiceResponse Service::history(const std::shared_ptr<Session>& s) const {
  std::lock_guard<std::mutex> lock(s->mutex);
  json runs = json::array();
  for (const auto& h : s->history) {
    const json& sum = h["summary"];
    runs.push_back({{"run", h["run"]},
                    {"request", h["request"]},
                    {"status", sum["status"]},
                    {"gap_estimate", sum["gap_estimate"]},
                    {"vertex_count", sum["image_points"].size()},
                    {"bound", sum.contains("bound") ? sum["bound"] : json(nullptr)}});
  }
  return {200, {{"session", s->id}, {"created", s->created}, {"updated", s->updated}, {"runs", runs}}};
}

}  // namespace homvcp
