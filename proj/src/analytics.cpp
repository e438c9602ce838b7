#include "homvcp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homvcp/errors.hpp"
#include "homvcp/polygon2d.hpp"

namespace homvcp {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::DomainError, "delta must lie in (0, 1)");
}

template <class Fn>
double golden_min(Fn&& f, double lo, double hi, int iterations = 100) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// min over n in bd P of d(ray(n - center, 1), ray(y, 1)), scanning each
// piece on a compactified parameter and polishing with golden section.
double min_ray_gap(const AnalyticInstance& inst, const Vec& center, const Vec& y) {
  const Vec uy = homogenize_point(y).dir();
  double best = 1.0;
  for (const auto& piece : inst.boundary()) {
    auto param = [&](double s) {
      if (!piece.unbounded()) return piece.t0 + s * (piece.t1 - piece.t0);
      return piece.t0 + s / (1.0 - s);
    };
    auto gap = [&](double s) { return dist_unit_to_ray(homogenize_point(piece.point(param(s)) - center).dir(), uy); };
    const int grid = 2000;
    const double top = piece.unbounded() ? 1.0 - 1e-9 : 1.0;
    int arg = 0;
    double val = 2.0;
    for (int i = 0; i <= grid; ++i) {
      const double v = gap(top * i / grid);
      if (v < val) {
        val = v;
        arg = i;
      }
    }
    const double lo = top * std::max(0, arg - 1) / grid;
    const double hi = top * std::min(grid, arg + 1) / grid;
    best = std::min({best, val, gap(golden_min(gap, lo, hi))});
  }
  return best;
}

}  // namespace

double region_of_validity(double delta) {
  check_delta(delta);
  return std::sqrt(1.0 / (delta * delta) - 1.0);
}

double alpha(double r, double delta) {
  check_delta(delta);
  if (!(r >= 0.0)) throw Error(ErrorKind::DomainError, "radius must be nonnegative");
  const double den = std::sqrt(1.0 - delta * delta) - delta * r;
  if (!(r < region_of_validity(delta)) || !(den > 0.0))
    throw Error(ErrorKind::OutOfValidity, "radius outside the region of validity");
  return delta * (r * r + 1.0) / den;
}

double max_delta_for(double r, double alpha_target) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "radius must be positive");
  if (!(alpha_target > 0.0)) throw Error(ErrorKind::NoFeasibleDelta, "target error must be positive");
  // admissible deltas: 0 < delta < 1 / sqrt(1 + r^2); alpha increases in
  // delta from 0 to infinity on that interval
  double lo = 0.0;
  double hi = 1.0 / std::sqrt(1.0 + r * r);
  auto value = [&](double d) {
    const double den = std::sqrt(1.0 - d * d) - d * r;
    return den > 0.0 ? d * (r * r + 1.0) / den : std::numeric_limits<double>::infinity();
  };
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) <= alpha_target) lo = mid;
    else hi = mid;
  }
  if (!(lo > 0.0)) throw Error(ErrorKind::NoFeasibleDelta, "no admissible delta meets the target");
  return lo;
}

ErrorCurve error_curve(double delta, int r_count) {
  ErrorCurve curve;
  curve.delta = delta;
  curve.r_validity = region_of_validity(delta);
  if (r_count < 2) throw Error(ErrorKind::DomainError, "r_count must be at least 2");
  curve.samples.reserve(static_cast<std::size_t>(r_count));
  for (int i = 0; i < r_count; ++i) {
    const double s = static_cast<double>(i + 1) / r_count;
    const double r = curve.r_validity * (1.0 - std::pow(1e-3, s));
    curve.samples.emplace_back(r, alpha(r, delta));
  }
  return curve;
}

WorstCase worst_case_construction(double r, double delta) {
  alpha(r, delta);  // range checks
  const double c = std::sqrt(1.0 - delta * delta);
  WorstCase w;
  w.y = r;
  w.n = (c * r + delta) / (c - delta * r);
  w.achieved = std::abs(w.n - w.y);
  return w;
}

const char* to_string(BoundaryKind kind) {
  return kind == BoundaryKind::NearBoundary ? "NearBoundary" : "NearDirection";
}

BoundaryClassification classify_boundary_point(const Vec& y, const ApproxSolution& solution,
                                               const AnalyticInstance& instance, const ClassifyOptions& options) {
  if (instance.problem().m() != 2 || y.size() != 2)
    throw Error(ErrorKind::UnsupportedDimension, "classification supports m = 2 only");
  const double delta = solution.delta_target;
  const Polygon2d poly = boundary_polygon(solution.image_vertices, solution.cone_generators);
  if (distance_to_polygon_boundary(poly, y) > options.on_boundary_tolerance * std::max(1.0, y.norm()))
    throw Error(ErrorKind::DomainError, "point is not on the boundary of the approximate upper image");
  const Vec& center = solution.roi.center;
  const double ny = y.norm();

  auto near_boundary = [&](BoundaryClassification& out) {
    const BoundaryDistance bd = instance.distance_to_boundary(y + center);
    out.kind = BoundaryKind::NearBoundary;
    out.measured = bd.distance;
    out.witness = bd.nearest - center;
    out.q = min_ray_gap(instance, center, y);
    if (bd.distance <= options.tolerance) {
      out.bound = out.q > 0.0 && out.q < 1.0 / std::sqrt(1.0 + ny * ny) ? alpha(ny, out.q) : 0.0;
      out.bound = std::max(out.bound, bd.distance);
      return true;
    }
    if (!(out.q > 0.0) || !(out.q < 1.0 / std::sqrt(1.0 + ny * ny))) return false;
    out.bound = alpha(ny, out.q);
    return bd.distance <= out.bound + options.tolerance;
  };
  auto near_direction = [&](BoundaryClassification& out) {
    if (!(ny > 0.0)) return false;
    Mat rec(2, static_cast<Index>(instance.recession_generators().size()));
    for (std::size_t j = 0; j < instance.recession_generators().size(); ++j)
      rec.col(static_cast<Index>(j)) = instance.recession_generators()[j];
    const ConeProjection p = project_onto_cone(y / ny, rec);
    out.kind = BoundaryKind::NearDirection;
    out.measured = p.distance;
    out.witness = p.projection.norm() > 0.0 ? Vec(p.projection.normalized()) : Vec(p.projection);
    out.q = 0.0;
    out.bound = std::sqrt(ny * ny + 1.0) / ny * delta;
    return p.distance <= out.bound + options.tolerance;
  };

  BoundaryClassification out;
  const bool inside = ny < region_of_validity(delta);
  if (inside ? near_boundary(out) : near_direction(out)) return out;
  if (inside ? near_direction(out) : near_boundary(out)) return out;
  throw Error(ErrorKind::NeitherCase, "neither case verified; the solution or tolerance is invalid");
}

}  // namespace homvcp
