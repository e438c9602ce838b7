#include "homvcp/expr.hpp"

#include <limits>
#include <string>

#include "homvcp/errors.hpp"

namespace homvcp {

using nlohmann::json;

Expr Expr::affine(Vec coef, double constant) {
  Expr e(Kind::Affine, static_cast<int>(coef.size()));
  e.coef_ = std::move(coef);
  e.constant_ = constant;
  return e;
}

Expr Expr::constant(int n, double c) { return affine(Vec::Zero(n), c); }

Expr Expr::variable(int n, int index) {
  if (index < 0 || index >= n) throw Error(ErrorKind::SchemaError, "variable index out of range");
  Vec coef = Vec::Zero(n);
  coef[index] = 1.0;
  return affine(std::move(coef), 0.0);
}

Expr Expr::square(Expr arg) {
  if (arg.kind_ != Kind::Affine) throw Error(ErrorKind::NonConvex, "square takes an affine argument");
  Expr e(Kind::Square, arg.n_);
  e.args_.push_back(std::move(arg));
  return e;
}

Expr Expr::abs(Expr arg) {
  if (arg.kind_ != Kind::Affine) throw Error(ErrorKind::NonConvex, "abs takes an affine argument");
  Expr e(Kind::Abs, arg.n_);
  e.args_.push_back(std::move(arg));
  return e;
}

namespace {
int common_dim(const std::vector<Expr>& args) {
  if (args.empty()) throw Error(ErrorKind::SchemaError, "empty argument list");
  for (const auto& a : args)
    if (a.dim() != args.front().dim()) throw Error(ErrorKind::DimensionMismatch, "mixed variable counts");
  return args.front().dim();
}
}  // namespace

Expr Expr::max(std::vector<Expr> args) {
  Expr e(Kind::Max, common_dim(args));
  e.args_ = std::move(args);
  return e;
}

Expr Expr::sum(std::vector<Expr> args) {
  Expr e(Kind::Sum, common_dim(args));
  e.args_ = std::move(args);
  return e;
}

Expr Expr::scale(double factor, Expr arg) {
  if (!std::isfinite(factor)) throw Error(ErrorKind::SchemaError, "scale factor must be finite");
  Expr e(Kind::Scale, arg.n_);
  e.factor_ = factor;
  e.args_.push_back(std::move(arg));
  return e;
}

Curvature Expr::curvature() const {
  switch (kind_) {
    case Kind::Affine: return Curvature::Affine;
    case Kind::Square:
    case Kind::Abs: return Curvature::Convex;
    case Kind::Max:
    case Kind::Sum: {
      Curvature c = Curvature::Affine;
      for (const auto& a : args_) {
        const Curvature ac = a.curvature();
        if (ac == Curvature::Nonconvex) return ac;
        if (ac == Curvature::Convex) c = Curvature::Convex;
      }
      // max of affine pieces is convex, not affine
      if (kind_ == Kind::Max && args_.size() > 1) return Curvature::Convex;
      return c;
    }
    case Kind::Scale: {
      const Curvature ac = args_.front().curvature();
      if (ac == Curvature::Affine || factor_ == 0.0) return Curvature::Affine;
      if (ac == Curvature::Convex && factor_ > 0.0) return Curvature::Convex;
      return Curvature::Nonconvex;
    }
  }
  return Curvature::Nonconvex;
}

double Expr::eval(const Vec& x, Vec* grad) const {
  if (x.size() != n_) throw Error(ErrorKind::DimensionMismatch, "expression evaluated at wrong dimension");
  switch (kind_) {
    case Kind::Affine:
      if (grad) *grad = coef_;
      return coef_.dot(x) + constant_;
    case Kind::Square: {
      const double v = args_.front().eval(x, grad);
      if (grad) *grad *= 2.0 * v;
      return v * v;
    }
    case Kind::Abs: {
      const double v = args_.front().eval(x, grad);
      if (grad && v < 0.0) *grad = -*grad;
      return std::abs(v);
    }
    case Kind::Max: {
      double best = -std::numeric_limits<double>::infinity();
      Vec g;
      for (const auto& a : args_) {
        const double v = a.eval(x, grad ? &g : nullptr);
        if (v > best) {
          best = v;
          if (grad) *grad = g;
        }
      }
      return best;
    }
    case Kind::Sum: {
      double total = 0.0;
      if (grad) *grad = Vec::Zero(n_);
      Vec g;
      for (const auto& a : args_) {
        total += a.eval(x, grad ? &g : nullptr);
        if (grad) *grad += g;
      }
      return total;
    }
    case Kind::Scale: {
      const double v = args_.front().eval(x, grad);
      if (grad) *grad *= factor_;
      return factor_ * v;
    }
  }
  return 0.0;
}

Expr Expr::from_json(const json& doc, int n) {
  if (doc.is_number()) return constant(n, doc.get<double>());
  if (!doc.is_object() || doc.size() != 1)
    throw Error(ErrorKind::SchemaError, "expression node must be a number or a single-key object");
  const std::string key = doc.begin().key();
  const json& body = doc.begin().value();
  auto list = [&](const json& arr) {
    if (!arr.is_array()) throw Error(ErrorKind::SchemaError, "'" + key + "' expects an array");
    std::vector<Expr> out;
    for (const auto& item : arr) out.push_back(from_json(item, n));
    return out;
  };
  try {
    if (key == "var") return variable(n, body.get<int>());
    if (key == "affine") {
      const auto coef = body.at("coef").get<std::vector<double>>();
      if (static_cast<int>(coef.size()) != n)
        throw Error(ErrorKind::SchemaError, "affine coefficient count must equal n");
      return affine(Eigen::Map<const Vec>(coef.data(), n), body.value("const", 0.0));
    }
    if (key == "square") return square(from_json(body, n));
    if (key == "abs") return abs(from_json(body, n));
    if (key == "max") return max(list(body));
    if (key == "sum") return sum(list(body));
    if (key == "scale") return scale(body.at("factor").get<double>(), from_json(body.at("expr"), n));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed '") + key + "' node: " + e.what());
  }
  throw Error(ErrorKind::SchemaError, "unknown expression node '" + key + "'");
}

json Expr::to_json() const {
  switch (kind_) {
    case Kind::Affine:
      return {{"affine", {{"coef", std::vector<double>(coef_.data(), coef_.data() + n_)}, {"const", constant_}}}};
    case Kind::Square: return {{"square", args_.front().to_json()}};
    case Kind::Abs: return {{"abs", args_.front().to_json()}};
    case Kind::Max:
    case Kind::Sum: {
      json arr = json::array();
      for (const auto& a : args_) arr.push_back(a.to_json());
      return {{kind_ == Kind::Max ? "max" : "sum", arr}};
    }
    case Kind::Scale: return {{"scale", {{"factor", factor_}, {"expr", args_.front().to_json()}}}};
  }
  return nullptr;
}

}  // namespace homvcp
