#include "homvcp/polygon2d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homvcp/errors.hpp"

namespace homvcp {

namespace {

double cross(const Vec& u, const Vec& v) { return u[0] * v[1] - u[1] * v[0]; }

double dist_to_segment(const Vec& y, const Vec& p, const Vec& q) {
  const Vec d = q - p;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((y - p).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (y - p - t * d).norm();
}

double dist_to_halfline(const Vec& y, const Vec& p, const Vec& dir) {
  const double t = std::max(0.0, (y - p).dot(dir));
  return (y - p - t * dir).norm();
}

}  // namespace

Polygon2d boundary_polygon(const std::vector<Vec>& points, const std::vector<Vec>& cone_generators) {
  if (points.empty()) throw Error(ErrorKind::DomainError, "polygon needs at least one point");
  if (points.front().size() != 2) throw Error(ErrorKind::UnsupportedDimension, "polygon export needs m = 2");
  Vec mid = Vec::Zero(2);
  for (const auto& g : cone_generators) mid += g.normalized();
  if (mid.norm() < 1e-12) throw Error(ErrorKind::DomainError, "cone has no interior direction");
  mid.normalize();
  // extreme rays by signed angle from the interior direction
  Vec a, b;
  double lo = 0.0, hi = 0.0;
  for (const auto& g0 : cone_generators) {
    const Vec g = g0.normalized();
    const double ang = std::atan2(cross(mid, g), mid.dot(g));
    if (a.size() == 0 || ang < lo) {
      lo = ang;
      a = g;
    }
    if (b.size() == 0 || ang > hi) {
      hi = ang;
      b = g;
    }
  }
  if (cross(a, b) <= 1e-12) throw Error(ErrorKind::DomainError, "polygon export needs a solid cone");

  // coordinates in the basis (a, b): C becomes the nonnegative quadrant
  Mat basis(2, 2);
  basis << a, b;
  const Mat inv = basis.inverse();
  std::vector<Vec> s;
  s.reserve(points.size());
  for (const auto& p : points) s.push_back(inv * p);
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (s[i][0] != s[j][0]) return s[i][0] < s[j][0];
    if (s[i][1] != s[j][1]) return s[i][1] < s[j][1];
    return i < j;
  });
  // lower hull, then cut at the lowest point
  std::vector<std::size_t> hull;
  for (std::size_t i : order) {
    if (!hull.empty() && (s[hull.back()] - s[i]).norm() <= 1e-14 * std::max(1.0, s[i].norm())) continue;
    while (hull.size() >= 2) {
      const Vec& p = s[hull[hull.size() - 2]];
      const Vec& q = s[hull.back()];
      if (cross(q - p, s[i] - p) <= 1e-14 * std::max(1.0, (q - p).norm() * (s[i] - p).norm())) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  std::size_t cut = 0;
  for (std::size_t k = 1; k < hull.size(); ++k)
    if (s[hull[k]][1] < s[hull[cut]][1]) cut = k;
  hull.resize(cut + 1);

  Polygon2d poly;
  poly.ray_a = a;
  poly.ray_b = b;
  for (std::size_t i : hull) {
    poly.chain.push_back(points[i]);
    poly.chain_index.push_back(i);
  }
  return poly;
}

double distance_to_polygon_boundary(const Polygon2d& poly, const Vec& y) {
  double best = std::min(dist_to_halfline(y, poly.chain.front(), poly.ray_b),
                         dist_to_halfline(y, poly.chain.back(), poly.ray_a));
  for (std::size_t k = 0; k + 1 < poly.chain.size(); ++k)
    best = std::min(best, dist_to_segment(y, poly.chain[k], poly.chain[k + 1]));
  return best;
}

bool polygon_contains(const Polygon2d& poly, const Vec& y, double tol) {
  // intersection of the half-planes left of each directed boundary piece
  auto left_of = [&](const Vec& p, const Vec& dir) { return cross(dir, y - p) >= -tol * dir.norm(); };
  if (!left_of(poly.chain.front(), -poly.ray_b)) return false;
  if (!left_of(poly.chain.back(), poly.ray_a)) return false;
  for (std::size_t k = 0; k + 1 < poly.chain.size(); ++k)
    if (!left_of(poly.chain[k], poly.chain[k + 1] - poly.chain[k])) return false;
  return true;
}

std::vector<Vec> sample_polygon_boundary(const Polygon2d& poly, double step, double ray_length) {
  std::vector<Vec> out;
  const int nr = std::max(1, static_cast<int>(std::ceil(ray_length / step)));
  for (int i = nr; i >= 1; --i) out.push_back(poly.chain.front() + ray_length * i / nr * poly.ray_b);
  for (std::size_t k = 0; k < poly.chain.size(); ++k) {
    out.push_back(poly.chain[k]);
    if (k + 1 == poly.chain.size()) break;
    const Vec d = poly.chain[k + 1] - poly.chain[k];
    const int ns = static_cast<int>(std::ceil(d.norm() / step));
    for (int i = 1; i < ns; ++i) out.push_back(poly.chain[k] + d * (static_cast<double>(i) / ns));
  }
  for (int i = 1; i <= nr; ++i) out.push_back(poly.chain.back() + ray_length * i / nr * poly.ray_a);
  return out;
}

std::vector<Vec> closed_export_chain(const Polygon2d& poly, double far) {
  std::vector<Vec> out;
  out.push_back(poly.chain.front() + far * poly.ray_b);
  for (const auto& v : poly.chain) out.push_back(v);
  out.push_back(poly.chain.back() + far * poly.ray_a);
  out.push_back(out.front());
  return out;
}

}  // namespace homvcp
