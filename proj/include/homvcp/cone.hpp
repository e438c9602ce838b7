#pragma once

// Ordering cone C in objective space: a generator list (polyhedral) or a
// second-order cone {y : ||y - <y,a>a|| <= k <y,a>} given by unit axis a and
// aperture k.

#include <vector>

#include <json.hpp>

#include "homvcp/geometry.hpp"

namespace homvcp {

class OrderingCone {
 public:
  /// Throws InvalidCone for empty lists, zero generators or a cone that is
  /// not pointed.
  static OrderingCone polyhedral(std::vector<Vec> generators);
  static OrderingCone second_order(Vec axis, double aperture);

  static OrderingCone from_json(const nlohmann::json& doc, int m);
  nlohmann::json to_json() const;

  bool is_polyhedral() const { return soc_aperture_ < 0.0; }
  Index dim() const { return dim_; }
  bool solid() const { return solid_; }

  Vec project(const Vec& v) const;
  double distance(const Vec& v) const { return (v - project(v)).norm(); }
  bool contains(const Vec& v, double tol = 1e-9) const { return distance(v) <= tol; }
  /// Whether v lies in the interior of C (relative margin 1e-9).
  bool interior(const Vec& v) const;
  /// Projection onto the dual cone C* via the Moreau decomposition.
  Vec project_dual(const Vec& v) const { return v + project(-v); }

  /// Unit generators: the given ones for polyhedral cones; for a second-order
  /// cone the two extreme rays when m = 2, otherwise a ring of boundary rays
  /// (an inner polyhedral approximation).
  const std::vector<Vec>& generators() const { return generators_; }
  Mat generator_matrix() const;
  /// Unit generators of C* (spanning set of supporting directions).
  std::vector<Vec> dual_generators() const;
  /// Normalized sum of generators; lies in int C for solid cones.
  Vec interior_direction() const;

  bool operator==(const OrderingCone& other) const;

 private:
  OrderingCone() = default;

  Index dim_ = 0;
  std::vector<Vec> generators_;
  Mat matrix_;
  Vec axis_;
  double soc_aperture_ = -1.0;
  bool solid_ = false;
};

}  // namespace homvcp
