#include "homvcp/cone.hpp"

#include <algorithm>
#include <numbers>

#include "homvcp/errors.hpp"

namespace homvcp {

using nlohmann::json;

namespace {

Vec rotate90(const Vec& v, double sign) {
  Vec r(2);
  r << -sign * v[1], sign * v[0];
  return r;
}

// Orthonormal basis of the complement of unit `a`.
Mat complement_basis(const Vec& a) {
  const Index m = a.size();
  Mat full = Mat::Identity(m, m);
  full.col(0) = a;
  Eigen::HouseholderQR<Mat> qr(full);
  const Mat q = qr.householderQ();
  return q.rightCols(m - 1);
}

}  // namespace

OrderingCone OrderingCone::polyhedral(std::vector<Vec> generators) {
  if (generators.empty()) throw Error(ErrorKind::InvalidCone, "ordering cone needs at least one generator");
  OrderingCone c;
  c.dim_ = generators.front().size();
  if (c.dim_ < 1) throw Error(ErrorKind::InvalidCone, "zero-dimensional cone");
  for (auto& g : generators) {
    if (g.size() != c.dim_) throw Error(ErrorKind::DimensionMismatch, "generators of different dimension");
    if (!g.allFinite() || g.norm() < kUnitTolerance) throw Error(ErrorKind::InvalidCone, "zero or non-finite generator");
    g.normalize();
  }
  c.generators_ = std::move(generators);
  c.matrix_.resize(c.dim_, static_cast<Index>(c.generators_.size()));
  for (std::size_t j = 0; j < c.generators_.size(); ++j) c.matrix_.col(static_cast<Index>(j)) = c.generators_[j];
  for (const auto& g : c.generators_)
    if (project_onto_cone(-g, c.matrix_).distance < 1e-9)
      throw Error(ErrorKind::InvalidCone, "ordering cone is not pointed");
  Eigen::FullPivLU<Mat> lu(c.matrix_);
  lu.setThreshold(1e-9);
  c.solid_ = lu.rank() == c.dim_;
  return c;
}

OrderingCone OrderingCone::second_order(Vec axis, double aperture) {
  if (axis.size() < 2) throw Error(ErrorKind::InvalidCone, "second-order cone needs m >= 2");
  if (!axis.allFinite() || axis.norm() < kUnitTolerance) throw Error(ErrorKind::InvalidCone, "zero cone axis");
  if (!(aperture >= 0.0) || !std::isfinite(aperture)) throw Error(ErrorKind::InvalidCone, "aperture must be finite and >= 0");
  OrderingCone c;
  c.dim_ = axis.size();
  c.axis_ = axis.normalized();
  c.soc_aperture_ = aperture;
  c.solid_ = aperture > 0.0;
  const double scale = std::sqrt(1.0 + aperture * aperture);
  if (aperture == 0.0) {
    c.generators_.push_back(c.axis_);
  } else if (c.dim_ == 2) {
    const Vec perp = rotate90(c.axis_, 1.0);
    c.generators_.push_back((c.axis_ - aperture * perp) / scale);
    c.generators_.push_back((c.axis_ + aperture * perp) / scale);
  } else {
    const Mat basis = complement_basis(c.axis_);
    const int ring = 32;
    if (c.dim_ == 3) {
      for (int i = 0; i < ring; ++i) {
        const double t = 2.0 * std::numbers::pi * i / ring;
        const Vec w = std::cos(t) * basis.col(0) + std::sin(t) * basis.col(1);
        c.generators_.push_back((c.axis_ + aperture * w) / scale);
      }
    } else {
      for (Index j = 0; j < basis.cols(); ++j)
        for (double s : {-1.0, 1.0}) c.generators_.push_back((c.axis_ + s * aperture * basis.col(j)) / scale);
    }
  }
  c.matrix_.resize(c.dim_, static_cast<Index>(c.generators_.size()));
  for (std::size_t j = 0; j < c.generators_.size(); ++j) c.matrix_.col(static_cast<Index>(j)) = c.generators_[j];
  return c;
}

OrderingCone OrderingCone::from_json(const json& doc, int m) {
  if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "cone must be an object");
  try {
    if (doc.contains("generators")) {
      std::vector<Vec> gens;
      for (const auto& g : doc.at("generators")) {
        const auto v = g.get<std::vector<double>>();
        if (static_cast<int>(v.size()) != m) throw Error(ErrorKind::InvalidCone, "generator length must equal m");
        gens.emplace_back(Eigen::Map<const Vec>(v.data(), m));
      }
      return polyhedral(std::move(gens));
    }
    if (doc.contains("soc")) {
      const auto axis = doc.at("soc").at("axis").get<std::vector<double>>();
      if (static_cast<int>(axis.size()) != m) throw Error(ErrorKind::InvalidCone, "axis length must equal m");
      return second_order(Eigen::Map<const Vec>(axis.data(), m), doc.at("soc").at("aperture").get<double>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed cone: ") + e.what());
  }
  throw Error(ErrorKind::SchemaError, "cone needs 'generators' or 'soc'");
}

json OrderingCone::to_json() const {
  auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  if (!is_polyhedral()) return {{"soc", {{"axis", vec(axis_)}, {"aperture", soc_aperture_}}}};
  json gens = json::array();
  for (const auto& g : generators_) gens.push_back(vec(g));
  return {{"generators", gens}};
}

Vec OrderingCone::project(const Vec& v) const {
  if (v.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "vector and cone dimensions differ");
  if (is_polyhedral()) return project_onto_cone(v, matrix_).projection;
  const double s = v.dot(axis_);
  const Vec w = v - s * axis_;
  const double wn = w.norm();
  const double k = soc_aperture_;
  if (wn <= k * s) return v;
  if (k * wn <= -s) return Vec::Zero(dim_);
  if (wn < kUnitTolerance) return std::max(0.0, s) * axis_;
  const Vec e = (axis_ + k * w / wn) / std::sqrt(1.0 + k * k);
  return std::max(0.0, v.dot(e)) * e;
}

bool OrderingCone::interior(const Vec& v) const {
  if (v.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "vector and cone dimensions differ");
  const double vn = v.norm();
  if (!solid_ || vn < kUnitTolerance) return false;
  const double eps = 1e-9 * vn;
  if (!is_polyhedral()) {
    const double s = v.dot(axis_);
    return (v - s * axis_).norm() + eps < soc_aperture_ * s;
  }
  for (Index i = 0; i < dim_; ++i)
    for (double sign : {-1.0, 1.0}) {
      Vec probe = v;
      probe[i] += sign * eps;
      if (distance(probe) > 1e-3 * eps) return false;
    }
  return true;
}

Mat OrderingCone::generator_matrix() const { return matrix_; }

Vec OrderingCone::interior_direction() const {
  if (!is_polyhedral()) return axis_;
  Vec sum = Vec::Zero(dim_);
  for (const auto& g : generators_) sum += g;
  return sum.normalized();
}

std::vector<Vec> OrderingCone::dual_generators() const {
  std::vector<Vec> out;
  if (dim_ == 2) {
    const Vec c = interior_direction();
    Vec lo = generators_.front();
    Vec hi = lo;
    double amin = 10.0;
    double amax = -10.0;
    for (const auto& g : generators_) {
      const double a = std::atan2(c[0] * g[1] - c[1] * g[0], c.dot(g));
      if (a < amin) { amin = a; lo = g; }
      if (a > amax) { amax = a; hi = g; }
    }
    out.push_back(rotate90(lo, 1.0));
    out.push_back(rotate90(hi, -1.0));
    if (amax - amin < 1e-12) out.push_back(lo);
    return out;
  }
  if (is_polyhedral() && matrix_.cols() == dim_ && solid_) {
    const Mat inv = matrix_.inverse();
    for (Index i = 0; i < dim_; ++i) out.push_back(inv.row(i).transpose().normalized());
    return out;
  }
  if (!is_polyhedral()) {
    out.push_back(axis_);
    const double k = soc_aperture_ > 0.0 ? 1.0 / soc_aperture_ : 0.0;
    const Mat basis = complement_basis(axis_);
    if (soc_aperture_ > 0.0)
      for (Index j = 0; j < basis.cols(); ++j)
        for (double s : {-1.0, 1.0}) out.push_back((axis_ + s * k * basis.col(j)).normalized());
    return out;
  }
  for (const auto& s : sphere_sample(static_cast<int>(dim_), 64 * static_cast<int>(dim_), 17)) {
    const Vec d = project_dual(s);
    if (d.norm() > 1e-6) out.push_back(d.normalized());
    if (static_cast<Index>(out.size()) >= 2 * dim_) break;
  }
  return out;
}

bool OrderingCone::operator==(const OrderingCone& other) const {
  if (dim_ != other.dim_ || is_polyhedral() != other.is_polyhedral()) return false;
  if (!is_polyhedral())
    return (axis_ - other.axis_).norm() < 1e-12 && std::abs(soc_aperture_ - other.soc_aperture_) < 1e-12;
  if (generators_.size() != other.generators_.size()) return false;
  for (const auto& g : generators_) {
    const bool found = std::any_of(other.generators_.begin(), other.generators_.end(),
                                   [&](const Vec& h) { return (g - h).norm() < 1e-12; });
    if (!found) return false;
  }
  return true;
}

}  // namespace homvcp
