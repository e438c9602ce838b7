#include "homvcp/problem.hpp"

#include <random>

#include "homvcp/errors.hpp"
#include "homvcp/instances.hpp"

namespace homvcp {

using nlohmann::json;

VcpProblem::VcpProblem(std::string name, int n, std::vector<Expr> objectives,
                       std::vector<Expr> constraints, OrderingCone cone)
    : name_(std::move(name)),
      n_(n),
      objectives_(std::move(objectives)),
      constraints_(std::move(constraints)),
      cone_(std::move(cone)) {
  if (n_ < 1) throw Error(ErrorKind::SchemaError, "need at least one decision variable");
  if (objectives_.empty()) throw Error(ErrorKind::SchemaError, "need at least one objective");
  if (cone_.dim() != m()) throw Error(ErrorKind::DimensionMismatch, "cone dimension differs from objective count");
  for (const auto& e : objectives_) {
    if (e.dim() != n_) throw Error(ErrorKind::DimensionMismatch, "objective uses wrong variable count");
    if (e.curvature() == Curvature::Nonconvex) throw Error(ErrorKind::NonConvex, "objective is not convex");
  }
  for (const auto& e : constraints_) {
    if (e.dim() != n_) throw Error(ErrorKind::DimensionMismatch, "constraint uses wrong variable count");
    if (e.curvature() == Curvature::Nonconvex) throw Error(ErrorKind::NonConvex, "constraint is not convex");
  }
  shift_ = Vec::Zero(m());
}

Vec VcpProblem::objective(const Vec& x) const {
  Vec out(m());
  for (int i = 0; i < m(); ++i) out[i] = objectives_[static_cast<std::size_t>(i)].eval(x);
  return out - shift_;
}

Vec VcpProblem::objective(const Vec& x, Mat& jacobian) const {
  Vec out(m());
  jacobian.resize(m(), n_);
  Vec g;
  for (int i = 0; i < m(); ++i) {
    out[i] = objectives_[static_cast<std::size_t>(i)].eval(x, &g);
    jacobian.row(i) = g.transpose();
  }
  return out - shift_;
}

double VcpProblem::max_constraint(const Vec& x, Vec* grad) const {
  double best = -std::numeric_limits<double>::infinity();
  Vec g;
  for (const auto& c : constraints_) {
    const double v = c.eval(x, grad ? &g : nullptr);
    if (v > best) {
      best = v;
      if (grad) *grad = g;
    }
  }
  return best;
}

VcpProblem VcpProblem::shifted(const Vec& p) const {
  if (p.size() != m()) throw Error(ErrorKind::DimensionMismatch, "shift has wrong dimension");
  VcpProblem out = *this;
  out.shift_ += p;
  return out;
}

json VcpProblem::to_json() const {
  if (builtin_) {
    json doc = {{"builtin", *builtin_}};
    const auto inst = builtin_instance(*builtin_);
    if (!(inst->problem().cone() == cone_)) doc["cone"] = cone_.to_json();
    return doc;
  }
  json objective = json::array();
  for (const auto& e : objectives_) objective.push_back(e.to_json());
  json constraints = json::array();
  for (const auto& e : constraints_) constraints.push_back(e.to_json());
  return {{"name", name_}, {"m", m()}, {"n", n_}, {"objective", objective},
          {"constraints", constraints}, {"cone", cone_.to_json()}};
}

VcpProblem load_problem(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "problem document must be an object");
  if (doc.contains("builtin")) {
    if (!doc["builtin"].is_string()) throw Error(ErrorKind::SchemaError, "'builtin' must be a string");
    const auto inst = builtin_instance(doc["builtin"].get<std::string>());
    if (!doc.contains("cone")) return inst->problem();
    const auto& base = inst->problem();
    VcpProblem out(base.name(), base.n(), base.objectives(), base.constraints(),
                   OrderingCone::from_json(doc["cone"], base.m()));
    out.set_builtin(doc["builtin"].get<std::string>());
    check_sampled_convexity(out, 64, 7);
    return out;
  }
  for (const char* key : {"m", "n", "objective", "cone"})
    if (!doc.contains(key)) throw Error(ErrorKind::SchemaError, std::string("missing field '") + key + "'");
  try {
    const int m = doc.at("m").get<int>();
    const int n = doc.at("n").get<int>();
    if (m < 1 || n < 1) throw Error(ErrorKind::SchemaError, "m and n must be positive");
    if (!doc.at("objective").is_array() || static_cast<int>(doc.at("objective").size()) != m)
      throw Error(ErrorKind::SchemaError, "objective must list m expressions");
    std::vector<Expr> objectives;
    for (const auto& e : doc.at("objective")) objectives.push_back(Expr::from_json(e, n));
    std::vector<Expr> constraints;
    if (doc.contains("constraints")) {
      if (!doc.at("constraints").is_array()) throw Error(ErrorKind::SchemaError, "constraints must be an array");
      for (const auto& e : doc.at("constraints")) constraints.push_back(Expr::from_json(e, n));
    }
    VcpProblem out(doc.value("name", std::string("user")), n, std::move(objectives), std::move(constraints),
                   OrderingCone::from_json(doc.at("cone"), m));
    check_sampled_convexity(out, 64, 7);
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
}

void check_sampled_convexity(const VcpProblem& problem, int segments, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 3.0);
  auto draw = [&] {
    Vec x(problem.n());
    for (int i = 0; i < problem.n(); ++i) x[i] = normal(rng);
    return x;
  };
  for (int s = 0; s < segments; ++s) {
    const Vec a = draw();
    const Vec b = draw();
    const Vec mid = 0.5 * (a + b);
    const Vec fa = problem.objective(a);
    const Vec fb = problem.objective(b);
    const Vec fm = problem.objective(mid);
    // C-convexity: 0.5(F(a)+F(b)) - F(mid) lies in C
    const Vec gap = 0.5 * (fa + fb) - fm;
    if (problem.cone().distance(gap) > 1e-8 * std::max(1.0, fm.norm()))
      throw Error(ErrorKind::NonConvex, "objective fails the midpoint test");
    const double ga = problem.max_constraint(a);
    const double gb = problem.max_constraint(b);
    const double gm = problem.max_constraint(mid);
    if (!problem.constraints().empty() && gm > 0.5 * (ga + gb) + 1e-8 * std::max(1.0, std::abs(gm)))
      throw Error(ErrorKind::NonConvex, "constraints fail the midpoint test");
  }
}

}  // namespace homvcp
