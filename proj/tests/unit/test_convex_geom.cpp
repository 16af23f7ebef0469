#include <random>

#include "doctest.h"
#include "mz/convex_geom.hpp"
#include "mz/errors.hpp"
#include "oracles.hpp"

using mz::ConvexBody;
using mz::Point;

namespace {

Point P(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

Point gaussian(std::mt19937_64& rng, int k, double s = 1.0) {
  std::normal_distribution<double> n(0.0, s);
  Point p(k);
  for (int i = 0; i < k; ++i) p(i) = n(rng);
  return p;
}

}  // namespace

TEST_SUITE("convex_geom") {

TEST_CASE("sup norm of simple bodies") {
  CHECK(mz::sup_norm(ConvexBody::ball(P({0, 0}), 1.0)) == doctest::Approx(1.0));
  CHECK(mz::sup_norm(ConvexBody::polytope({P({1, 0}), P({0, 1}), P({-1, 0})})) == doctest::Approx(1.0));
  CHECK(mz::sup_norm(ConvexBody::ball(P({3, 4}), 2.0)) == doctest::Approx(7.0));
}

TEST_CASE("projection examples") {
  const auto r = mz::project(ConvexBody::ball(P({0, 0}), 1.0), P({3, 4}));
  CHECK(r.distance == doctest::Approx(4.0));
  CHECK(r.foot_point(0) == doctest::Approx(0.6));
  CHECK(r.foot_point(1) == doctest::Approx(0.8));
  const auto s = mz::project(ConvexBody::polytope({P({0, 0}), P({1, 0})}), P({2, 1}));
  CHECK(s.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.foot_point(0) == doctest::Approx(1.0));
  CHECK(std::abs(s.foot_point(1)) < 1e-12);
}

TEST_CASE("projection agrees with subset enumeration on random polytopes") {
  std::mt19937_64 rng(11);
  std::vector<Point> V;
  for (int i = 0; i < 5; ++i) V.push_back(gaussian(rng, 3));
  const auto K = ConvexBody::polytope(V);
  double worst = 0.0;
  for (int q = 0; q < 1000; ++q) {
    const Point p = gaussian(rng, 3, 2.0);
    Point foot;
    const double ref = oracle::hull_distance(V, p, &foot);
    const auto r = mz::project(K, p);
    worst = std::max(worst, std::abs(r.distance - ref));
    worst = std::max(worst, (r.foot_point - foot).norm() * (ref > 1e-6 ? 1.0 : 0.0));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("inflated distance") {
  const auto B = ConvexBody::ball(P({0, 0}), 1.0);
  CHECK(mz::inflated_distance(B, 1.0, P({3, 4})) == doctest::Approx(3.0));
  CHECK(mz::inflated_distance(B, 0.5, P({0.9, 1.0})) == 0.0);
  const auto S = ConvexBody::polytope({P({0, 0}), P({1, 0})});
  CHECK(mz::inflated_distance(S, 0.1, P({2, 1})) == doctest::Approx(std::sqrt(2.0) - 0.1).epsilon(1e-12));
  CHECK_THROWS_AS(mz::inflated_distance(S, -0.1, P({2, 1})), mz::InvalidArgument);
}

TEST_CASE("hausdorff examples") {
  CHECK(mz::hausdorff(ConvexBody::ball(P({0, 0}), 1.0), ConvexBody::ball(P({0, 0}), 3.0)) == doctest::Approx(2.0));
  const auto T = ConvexBody::polytope({P({0, 0}), P({1, 0}), P({0, 1})});
  CHECK(mz::hausdorff(T, T) == 0.0);
  // The apex (0, 1) of the triangle is at distance 1 from the segment.
  const std::vector<Point> seg{P({0, 0}), P({1, 0})}, tri{P({0, 0}), P({1, 0}), P({0, 1})};
  const double h = mz::hausdorff(ConvexBody::polytope(seg), ConvexBody::polytope(tri));
  CHECK(h == doctest::Approx(1.0).epsilon(1e-12));
  double dense = 0.0;
  for (const auto& x : oracle::barycentric_samples(tri, 400)) dense = std::max(dense, oracle::hull_distance(seg, x));
  for (const auto& x : oracle::barycentric_samples(seg, 400)) dense = std::max(dense, oracle::hull_distance(tri, x));
  CHECK(std::abs(h - dense) <= 1e-6);
}

TEST_CASE("hausdorff ball against polytope is sampled") {
  const auto B = ConvexBody::ball(P({0, 0}), 1.0);
  const auto sq = ConvexBody::polytope({P({1, 1}), P({-1, 1}), P({-1, -1}), P({1, -1})});
  CHECK(mz::hausdorff(B, sq) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
  const auto seg = ConvexBody::polytope({P({-1, 0}), P({1, 0})});
  CHECK(mz::hausdorff(B, seg) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(mz::ball_boundary_samples(2) == 4096);
  CHECK(mz::ball_boundary_samples(3) == 16384);
}

TEST_CASE("projection is idempotent") {
  std::mt19937_64 rng(5);
  std::vector<Point> V;
  for (int i = 0; i < 6; ++i) V.push_back(gaussian(rng, 2));
  const auto K = ConvexBody::polytope(V);
  for (int q = 0; q < 200; ++q) {
    const auto r = mz::project(K, gaussian(rng, 2, 3.0));
    CHECK(mz::distance(K, r.foot_point) <= 1e-9);
  }
}

TEST_CASE("distance is 1-Lipschitz and inflation monotone") {
  std::mt19937_64 rng(6);
  std::vector<Point> V;
  for (int i = 0; i < 5; ++i) V.push_back(gaussian(rng, 3));
  const auto K = ConvexBody::polytope(V);
  for (int q = 0; q < 300; ++q) {
    const Point p = gaussian(rng, 3, 2.0), r = gaussian(rng, 3, 2.0);
    CHECK(std::abs(mz::distance(K, p) - mz::distance(K, r)) <= (p - r).norm() + 1e-12);
    CHECK(mz::inflated_distance(K, 0.0, p) == mz::project(K, p).distance);
    CHECK(mz::inflated_distance(K, 0.3, p) >= mz::inflated_distance(K, 0.6, p));
  }
}

TEST_CASE("triangle property with hausdorff distance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rad(0.2, 2.0);
  for (int t = 0; t < 300; ++t) {
    std::vector<Point> V1, V2;
    for (int i = 0; i < 4; ++i) {
      V1.push_back(gaussian(rng, 2));
      V2.push_back(gaussian(rng, 2));
    }
    const auto K1 = ConvexBody::polytope(V1);
    const auto K2 = t % 3 == 0 ? ConvexBody::ball(gaussian(rng, 2), rad(rng)) : ConvexBody::polytope(V2);
    const Point p = gaussian(rng, 2, 3.0);
    CHECK(mz::distance(K2, p) <= mz::distance(K1, p) + mz::hausdorff(K1, K2) + 1e-9);
  }
}

TEST_CASE("json round trip and malformed bodies") {
  const auto K = ConvexBody::polytope({P({0, 0}), P({1, 0}), P({0, 1})});
  CHECK(mz::body_from_json(mz::body_to_json(K)) == K);
  const auto B = mz::body_from_json(nlohmann::json::parse(R"({"kind":"ball","center":[1,2],"radius":0.5})"));
  CHECK(B.as_ball().radius == 0.5);
  CHECK_THROWS(mz::body_from_json(nlohmann::json::parse(R"({"kind":"cone"})")));
  CHECK_THROWS(mz::body_from_json(nlohmann::json::parse(R"({"kind":"ball","center":[0,0],"radius":-1})")));
}

}  // TEST_SUITE
