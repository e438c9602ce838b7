#include "homvcp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "homvcp/errors.hpp"
#include "homvcp/polygon2d.hpp"

namespace homvcp {

namespace {

void require_plane(int m) {
  if (m != 2) throw Error(ErrorKind::UnsupportedDimension, "the oracle supports m = 2 only");
}

// Appends rays along one boundary piece, adapting the parameter step so
// that consecutive rays are at most h apart.
void walk_piece(const BoundaryPiece& piece, const Vec& center, double h, std::vector<Vec>& out) {
  auto ray = [&](double t) { return homogenize_point(piece.point(t) - center).dir(); };
  Vec limit;
  if (piece.unbounded()) {
    limit = Vec::Zero(3);
    limit.head(2) = piece.limit_direction.normalized();
  }
  double t = piece.t0;
  Vec u = ray(t);
  out.push_back(u);
  if (!piece.unbounded() && !(piece.t1 > piece.t0)) return;
  double dt = piece.unbounded() ? 1.0 : (piece.t1 - piece.t0) / 16.0;
  for (long guard = 0; guard < 20000000; ++guard) {
    if (!piece.unbounded() && t >= piece.t1) return;
    const double tn = piece.unbounded() ? t + dt : std::min(t + dt, piece.t1);
    const Vec un = ray(tn);
    const double chord = (un - u).norm();
    if (chord > h && dt > 1e-13 * std::max(1.0, std::abs(t))) {
      dt *= 0.5;
      continue;
    }
    out.push_back(un);
    t = tn;
    u = un;
    if (chord < 0.5 * h) dt *= 2.0;
    if (piece.unbounded() && (u - limit).norm() <= h) {
      out.push_back(limit);
      return;
    }
  }
  throw Error(ErrorKind::NumericalFailure, "boundary walk did not reach its limit ray");
}

}  // namespace

DenseRays dense_boundary_rays(const AnalyticInstance& instance, const Vec& center, int resolution) {
  require_plane(instance.problem().m());
  if (center.size() != 2) throw Error(ErrorKind::DimensionMismatch, "center must live in R^2");
  if (resolution < 1) throw Error(ErrorKind::DomainError, "resolution must be positive");
  DenseRays out;
  out.chord = 1.0 / resolution;
  out.center = center;
  for (const auto& piece : instance.boundary()) walk_piece(piece, center, out.chord, out.rays);

  const auto& rec = instance.recession_generators();
  out.recession.resize(2, static_cast<Index>(rec.size()));
  for (std::size_t j = 0; j < rec.size(); ++j) out.recession.col(static_cast<Index>(j)) = rec[j].normalized();
  // arc of the recession face between its extreme generators
  Vec a = rec.front().normalized(), b = a;
  if (rec.size() > 1) {
    const Polygon2d probe = boundary_polygon({Vec::Zero(2)}, rec);
    a = probe.ray_a;
    b = probe.ray_b;
  }
  const double angle = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  const int steps = std::max(1, static_cast<int>(std::ceil(angle / out.chord)));
  for (int i = 0; i <= steps; ++i) {
    const double s = angle * i / steps;
    // rotate a toward b
    const Vec perp = (b - a.dot(b) * a).norm() > 1e-15 ? (b - a.dot(b) * a).normalized() : Vec(a);
    const Vec d = std::cos(s) * a + std::sin(s) * perp;
    Vec r = Vec::Zero(3);
    r.head(2) = d;
    out.rays.push_back(r);
  }
  return out;
}

double hom_distance(const Vec& u, const AnalyticInstance& instance, const DenseRays& dense) {
  const double mu = u[2];
  const Vec q = u.head(2);
  if (mu > kLevelTolerance) {
    if (instance.contains(q / mu + dense.center, 1e-9)) return 0.0;
  } else if (project_onto_cone(q, dense.recession).distance <= 1e-9) {
    return 0.0;
  }
  double best = u.norm();
  for (const auto& r : dense.rays) best = std::min(best, dist_unit_to_ray(u, r));
  return best;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json ray = nlohmann::json::array();
  for (Index i = 0; i < worst_ray.size(); ++i) ray.push_back(worst_ray[i]);
  return {{"measured_gap", measured_gap}, {"inner_excess", inner_excess}, {"outer_excess", outer_excess},
          {"resolution", resolution},     {"sample_count", sample_count}, {"worst_ray", ray},
          {"slack", slack},               {"delta", delta},               {"vertex_violation", vertex_violation},
          {"inner", inner},               {"pass", pass}};
}

VerificationReport brute_force_dtH(const ApproxSolution& solution, const AnalyticInstance& instance,
                                   int resolution, Execution exec) {
  require_plane(instance.problem().m());
  if (solution.m() != 2) throw Error(ErrorKind::UnsupportedDimension, "solution must live in R^2");
  VerificationReport rep;
  rep.resolution = resolution;
  rep.delta = solution.delta_target;
  const DenseRays dense = dense_boundary_rays(instance, solution.roi.center, resolution);
  rep.sample_count = static_cast<long>(dense.rays.size());
  rep.slack = dense.chord;
  const GenCone g = solution.hom_cone();

  const WorstRay worst = worst_ray(dense.rays, g, exec);
  rep.inner_excess = worst.distance;
  rep.worst_ray = dense.rays[worst.index];

  for (const auto& v : solution.image_vertices)
    rep.vertex_violation = std::max(rep.vertex_violation, instance.membership_violation(v + solution.roi.center));
  rep.inner = rep.vertex_violation <= 1e-6;
  // All generators inside hom P put the whole cone inside it. Otherwise the
  // generator distances give a lower bound on the outer excess.
  if (!rep.inner) {
    for (const auto& r : g.generators()) rep.outer_excess = std::max(rep.outer_excess, hom_distance(r.dir(), instance, dense));
  }
  rep.measured_gap = std::max(rep.inner_excess, rep.outer_excess);
  rep.pass = rep.inner && rep.measured_gap <= rep.delta + rep.slack;
  return rep;
}

double shrink_factor(double max_offset, double delta) {
  if (!(max_offset > 0.0)) return 1.0;
  return std::min(delta / (2.0 * max_offset), 1.0);
}

ExistenceReport existence_construction(const AnalyticInstance& instance, double delta, int net_resolution,
                                       int verify_resolution, Execution exec) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::DomainError, "delta must lie in (0, 1)");
  const VcpProblem& problem = instance.problem();
  require_plane(problem.m());
  const Vec origin = Vec::Zero(2);
  const int rings = net_resolution > 0 ? net_resolution : static_cast<int>(std::ceil(std::numbers::pi / (0.4 * delta)));
  const double spacing = std::numbers::pi / rings;

  // Net: the origin, boundary rays at chord delta/8 and a latitude grid of
  // geodesic covering radius `spacing` restricted to hom P.
  const DenseRays boundary = dense_boundary_rays(instance, origin, static_cast<int>(std::ceil(8.0 / delta)));
  ExistenceReport rep;
  rep.net_gap = spacing + 0.5 * boundary.chord;
  if (rep.net_gap > 0.5 * delta)
    throw Error(ErrorKind::NetTooCoarse, "net covering bound " + std::to_string(rep.net_gap) + " exceeds delta/2");
  std::vector<Vec> net{Vec::Zero(3)};
  net.insert(net.end(), boundary.rays.begin(), boundary.rays.end());
  for (int k = 0; k <= rings; ++k) {
    const double theta = spacing * k;
    const int count = std::max(1, static_cast<int>(std::ceil(2.0 * std::numbers::pi * std::sin(theta) / spacing)));
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / count;
      Vec u(3);
      u << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
      if (u[2] > kLevelTolerance && instance.contains(u.head(2) / u[2], 0.0)) net.push_back(u);
    }
  }
  rep.net_size = net.size();

  Vec bar = Vec::Zero(3);
  for (const auto& y : net) bar += y;
  bar /= static_cast<double>(net.size());
  for (const auto& y : net) rep.max_offset = std::max(rep.max_offset, (bar - y).norm());
  rep.t_bar = shrink_factor(rep.max_offset, delta);

  std::vector<Vec> xs;
  std::vector<Vec> images;
  for (const auto& y : net) {
    const Vec s = y + rep.t_bar * (bar - y);
    if (!(s[2] > 0.0)) throw Error(ErrorKind::NumericalFailure, "shrunk net point left level > 0");
    const Vec point = s.head(2) / s[2];
    rep.shrunk_violation = std::max(rep.shrunk_violation, instance.membership_violation(point));
    const Vec x = instance.preimage(point);
    xs.push_back(x);
    images.push_back(problem.objective(x));
  }
  rep.preimage_count = xs.size();

  const Polygon2d poly = boundary_polygon(images, problem.cone().generators());
  ApproxSolution& sol = rep.solution;
  for (std::size_t i : poly.chain_index) {
    sol.X.push_back(xs[i]);
    sol.image_vertices.push_back(images[i]);
  }
  sol.cone_generators = problem.cone().generators();
  sol.delta_target = delta;
  sol.roi = RoiSpec{origin, 1.0};
  sol.notes.push_back("built by the net-and-shrink construction");
  rep.verification = brute_force_dtH(sol, instance, verify_resolution, exec);
  sol.gap_estimate = rep.verification.measured_gap;
  sol.status = rep.verification.pass ? EngineStatus::Success : EngineStatus::Stalled;
  return rep;
}

PointBoundReport point_bound_check(const Vec& x, const AnalyticInstance& instance, double epsilon,
                                   const DenseRays& dense) {
  require_plane(instance.problem().m());
  if (x.size() != 2) throw Error(ErrorKind::DimensionMismatch, "x must live in R^2");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::DomainError, "epsilon must be nonnegative");
  if (dense.center.norm() != 0.0) throw Error(ErrorKind::DomainError, "dense rays must be unshifted");
  PointBoundReport rep;
  Vec z = x;
  if (!instance.contains(x, 0.0)) {
    const BoundaryDistance bd = instance.distance_to_boundary(x);
    rep.set_distance = bd.distance;
    z = bd.nearest;
  }
  if (rep.set_distance > epsilon + 1e-9 * std::max(1.0, epsilon))
    throw Error(ErrorKind::PreconditionViolation, "d(x, P) = " + std::to_string(rep.set_distance) + " exceeds epsilon");
  rep.bound = epsilon / std::sqrt(x.squaredNorm() + 1.0);
  const Vec ux = homogenize_point(x).dir();
  rep.excess = hom_distance(ux, instance, dense);
  rep.pair_distance = dist_unit_to_ray(ux, homogenize_point(z).dir());
  rep.slack = dense.chord;
  rep.pass = rep.excess <= rep.bound + rep.slack && rep.pair_distance <= rep.bound + 1e-12;
  return rep;
}

PointBoundReport point_bound_check(const Vec& x, const AnalyticInstance& instance, double epsilon, int resolution) {
  return point_bound_check(x, instance, epsilon, dense_boundary_rays(instance, Vec::Zero(2), resolution));
}

}  // namespace homvcp
