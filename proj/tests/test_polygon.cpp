#include <doctest.h>

#include <random>

#include "homvcp/errors.hpp"
#include "homvcp/polygon2d.hpp"
#include "support.hpp"

using namespace homvcp;
using namespace homvcp::test;

namespace {

const std::vector<Vec> kOrthant{v2(1, 0), v2(0, 1)};

double segment_distance(const Vec& y, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double t = d.squaredNorm() > 0.0 ? std::clamp((y - a).dot(d) / d.squaredNorm(), 0.0, 1.0) : 0.0;
  return (y - a - t * d).norm();
}

}  // namespace

TEST_CASE("polygon of points plus the orthant") {
  const Polygon2d p = boundary_polygon({v2(0, 1), v2(1, 0), v2(0.6, 0.6), v2(2, 2)}, kOrthant);
  REQUIRE(p.chain.size() == 2);
  CHECK(p.chain.front() == v2(0, 1));
  CHECK(p.chain.back() == v2(1, 0));
  CHECK(p.chain_index == std::vector<std::size_t>{0, 1});
  CHECK(p.ray_a.isApprox(v2(1, 0)));
  CHECK(p.ray_b.isApprox(v2(0, 1)));

  CHECK(distance_to_polygon_boundary(p, v2(5, 5)) == doctest::Approx(5.0));
  CHECK(distance_to_polygon_boundary(p, v2(0.5, 0.5)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(distance_to_polygon_boundary(p, v2(0, 0)) == doctest::Approx(std::sqrt(0.5)));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 2000; ++k) {
    const Vec y = v2(u(rng), u(rng));
    const bool inside = y[0] >= 0.0 && y[1] >= 0.0 && y[0] + y[1] >= 1.0;
    CHECK(polygon_contains(p, y, 0.0) == inside);
    // independent boundary distance: segment plus the two rays cut far away
    const double expect = std::min({segment_distance(y, v2(0, 1), v2(1, 0)), segment_distance(y, v2(0, 1), v2(0, 1e6)),
                                    segment_distance(y, v2(1, 0), v2(1e6, 0))});
    CHECK(distance_to_polygon_boundary(p, y) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("sampled boundary and export chain") {
  const Polygon2d p = boundary_polygon({v2(0, 1), v2(0.2, 0.3), v2(1, 0)}, kOrthant);
  CHECK(p.chain.size() == 3);
  for (const auto& y : sample_polygon_boundary(p, 0.05, 10.0)) CHECK(distance_to_polygon_boundary(p, y) < 1e-12);
  const auto chain = closed_export_chain(p, 10.0);
  REQUIRE(chain.size() == p.chain.size() + 3);
  CHECK(chain.front() == chain.back());
  CHECK(chain[1] == p.chain.front());
  CHECK(chain[chain.size() - 3] == p.chain.back());
}

TEST_CASE("random point clouds under a skew cone") {
  const std::vector<Vec> gens{v2(1, 0.2).normalized(), v2(-0.3, 1).normalized()};
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(v2(n(rng), n(rng)));
    const Polygon2d p = boundary_polygon(pts, gens);
    for (const auto& y : pts) CHECK(polygon_contains(p, y, 1e-9));
    for (const auto& v : p.chain) CHECK(distance_to_polygon_boundary(p, v) < 1e-9);
  }
}

TEST_CASE("polygon preconditions") {
  CHECK_THROWS_AS(boundary_polygon({}, kOrthant), Error);
  CHECK_THROWS_AS(boundary_polygon({v2(0, 0)}, {v2(1, 0)}), Error);
  try {
    boundary_polygon({v3(0, 0, 0)}, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});
    FAIL("expected UnsupportedDimension");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedDimension);
  }
}
