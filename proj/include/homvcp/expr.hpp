#pragma once

// Small expression language for user objectives and constraints.
//
// Grammar (JSON):
//   number                                  constant
//   {"var": i}                              x_i
//   {"affine": {"coef": [..], "const": c}}  a^T x + c
//   {"square": e} / {"abs": e}              e must be affine
//   {"max": [e, ...]} / {"sum": [e, ...]}
//   {"scale": {"factor": f, "expr": e}}     f < 0 only for affine e

#include <memory>
#include <vector>

#include <json.hpp>

#include "homvcp/geometry.hpp"

namespace homvcp {

enum class Curvature { Affine, Convex, Nonconvex };

class Expr {
 public:
  enum class Kind { Affine, Square, Abs, Max, Sum, Scale };

  static Expr affine(Vec coef, double constant);
  static Expr constant(int n, double c);
  static Expr variable(int n, int index);
  static Expr square(Expr arg);
  static Expr abs(Expr arg);
  static Expr max(std::vector<Expr> args);
  static Expr sum(std::vector<Expr> args);
  static Expr scale(double factor, Expr arg);

  /// Parses a node for a decision vector of dimension n; throws SchemaError.
  static Expr from_json(const nlohmann::json& doc, int n);
  nlohmann::json to_json() const;

  /// Value at x; writes one subgradient into *grad when given.
  double eval(const Vec& x, Vec* grad = nullptr) const;

  Curvature curvature() const;
  int dim() const { return n_; }
  Kind kind() const { return kind_; }

 private:
  Expr(Kind kind, int n) : kind_(kind), n_(n) {}

  Kind kind_;
  int n_;
  Vec coef_;
  double constant_ = 0.0;
  double factor_ = 1.0;
  std::vector<Expr> args_;
};

}  // namespace homvcp
