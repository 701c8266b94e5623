#include "kh/error.hpp"
#include "kh/group.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace kh;
using Catch::Approx;
using khtest::random_point;

TEST_CASE("compose matches hand-computed products", "[group]") {
  const Anisotropy a(1, 2.0);
  CHECK(compose(Point::scalar(0, 0, 0), Point::scalar(5, 1, 2), a) == Point::scalar(5, 1, 2));
  CHECK(compose(Point::scalar(1, 2, 3), Point::scalar(4, 5, 6), a) == Point::scalar(5, 19, 9));
  const Point z = Point::scalar(2, 3, 4);
  CHECK(compose(z, inverse(z), a) == Point::identity(1));
}

TEST_CASE("inverse examples", "[group]") {
  CHECK(inverse(Point::identity(1)) == Point::identity(1));
  CHECK(inverse(Point::scalar(2, 3, 4)) == Point::scalar(-2, 5, -4));
  const Point z(1.0, khtest::vec2(0, 0), khtest::vec2(1, 1));
  CHECK(inverse(z) == Point(-1.0, khtest::vec2(1, 1), khtest::vec2(-1, -1)));
}

TEST_CASE("dilation examples", "[group]") {
  const Point z = Point::scalar(0.3, -1.2, 0.7);
  CHECK(dilate(1.0, z, Anisotropy(1, 2.0)) == z);
  CHECK(dilate(2.0, Point::scalar(1, 1, 1), Anisotropy(1, 2.0)) == Point::scalar(4, 8, 2));
  const Point d8 = dilate(8.0, Point::scalar(1, 0, 0), Anisotropy(1, 4.0 / 3.0));
  CHECK(d8.t == Approx(16.0).epsilon(1e-14));
  CHECK(d8.x(0) == 0.0);
  CHECK_THROWS_AS(dilate(0.0, z, Anisotropy(1, 2.0)), Error);
}

TEST_CASE("homogeneous norm examples", "[group]") {
  CHECK(hnorm(Point::identity(1), Anisotropy(1, 2.0)) == 0.0);
  for (double th : {0.25, 1.0, 4.0 / 3.0, 3.0}) CHECK(hnorm(Point::scalar(1, 1, 1), Anisotropy(1, th)) == Approx(3.0));
  CHECK(hnorm(Point::scalar(8, 16, 2), Anisotropy(1, 3.0)) == Approx(6.0).epsilon(1e-14));
}

TEST_CASE("quasi-distance examples", "[group]") {
  const Anisotropy a(1, 1.0);
  const Point z = Point::scalar(1, 2, 3);
  CHECK(qdist(z, z, a) == 0.0);
  CHECK(qdist(Point::scalar(0, 1, 0), Point::identity(1), a) == Approx(1.0));
}

TEST_CASE("anisotropy rejects bad parameters", "[group]") {
  CHECK_THROWS_AS(Anisotropy(0, 1.0), Error);
  CHECK_THROWS_AS(Anisotropy(1, 0.0), Error);
  CHECK_THROWS_AS(Anisotropy(1, -2.0), Error);
  CHECK_THROWS_AS(Anisotropy(kMaxDim + 1, 1.0), Error);
}

TEST_CASE("group axioms hold on random samples", "[group][property]") {
  khtest::Rng rng(11);
  for (double th : {1.0 / 3.0, 1.0, 4.0 / 3.0, 2.0}) {
    for (int d : {1, 2, 3}) {
      const Anisotropy a(d, th);
      for (int n = 0; n < 2000; ++n) {
        const Point z1 = random_point(d, rng), z2 = random_point(d, rng), z3 = random_point(d, rng);
        CHECK(max_abs_diff(compose(compose(z1, z2, a), z3, a), compose(z1, compose(z2, z3, a), a)) <= 1e-12);
        CHECK(max_abs_diff(compose(inverse(z1), z1, a), Point::identity(d)) <= 1e-14);
        CHECK(qdist(compose(z3, z1, a), compose(z3, z2, a), a) ==
              Approx(qdist(z1, z2, a)).epsilon(1e-10));
        const double lam = 0.1 + 3.0 * std::abs(z3.t);
        CHECK(hnorm(dilate(lam, z1, a), a) == Approx(lam * hnorm(z1, a)).epsilon(1e-12));
        CHECK(qdist(dilate(lam, z1, a), dilate(lam, z2, a), a) ==
              Approx(lam * qdist(z1, z2, a)).epsilon(1e-10));
        CHECK(max_abs_diff(dilate(lam, compose(z1, z2, a), a),
                           compose(dilate(lam, z1, a), dilate(lam, z2, a), a)) <= 1e-11);
      }
    }
  }
}

TEST_CASE("exp_Y is right translation by (tau, 0, 0)", "[group]") {
  khtest::Rng rng(3);
  const Anisotropy a(2, 2.0);
  for (int n = 0; n < 100; ++n) {
    const Point z = random_point(2, rng);
    const Point right = compose(z, Point(0.7, Vec::Zero(2), Vec::Zero(2)), a);
    CHECK(max_abs_diff(right, Point(z.t + 0.7, z.x + 0.7 * z.v, z.v)) <= 1e-15);
  }
}

TEST_CASE("minmax distance", "[group]") {
  const Anisotropy a(1, 2.0);
  const Point z = Point::scalar(0.2, -0.4, 0.9);
  CHECK(minmax_dist(z, z, a) == Approx(0.0).margin(1e-12));
  const Point z2 = Point::scalar(0.2, 0.6, 0.9);
  CHECK(minmax_dist(z, z2, a) == Approx(std::pow(1.0, 1.0 / 3.0)).epsilon(1e-9));

  khtest::Rng rng(5);
  for (int n = 0; n < 20; ++n) {
    const Point p = random_point(1, rng), q = random_point(1, rng);
    const double dt = p.t - q.t, dx = p.x(0) - q.x(0);
    double brute = 1e300;
    for (int k = 0; k <= 400000; ++k) {
      const double w = -4.0 + 8.0 * k / 400000.0;
      brute = std::min(brute, std::max({std::pow(std::abs(dt), 0.5),
                                        std::pow(std::abs(dx - w * dt), 1.0 / 3.0),
                                        std::abs(p.v(0) - w), std::abs(q.v(0) - w)}));
    }
    CHECK(minmax_dist(p, q, a) == Approx(brute).margin(1e-6));
  }
}

TEST_CASE("minmax distance is comparable with the quasi-distance", "[group][property]") {
  khtest::Rng rng(9);
  const Anisotropy a(2, 4.0 / 3.0);
  double lo = 1e300, hi = 0.0;
  for (int n = 0; n < 300; ++n) {
    const Point p = random_point(2, rng), q = random_point(2, rng);
    const double r = minmax_dist(p, q, a) / qdist(p, q, a);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo > 0.05);
  CHECK(hi < 20.0);
}

TEST_CASE("quasi-triangle constant", "[group]") {
  const Anisotropy a(1, 2.0);
  std::vector<PointTriple> line;
  for (int k = 0; k < 10; ++k) {
    const double v = 0.1 * k;
    line.push_back({Point::scalar(0.3, 0.2, v), Point::scalar(0.3, 0.2, v + 0.05 * (k + 1)),
                    Point::scalar(0.3, 0.2, v + 0.3 * (k + 1))});
  }
  CHECK(estimate_kappa(line, a).kappa == Approx(1.0).epsilon(1e-12));

  const Point z1 = Point::scalar(0.1, 0.2, 0.3), z3 = Point::scalar(-0.4, 0.5, 0.1);
  const std::vector<PointTriple> single{{z1, z1, z3}};
  CHECK(estimate_kappa(single, a).kappa == Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_kappa({}, a), Error);

  auto sample = [&](std::uint64_t seed) {
    khtest::Rng rng(seed);
    std::vector<PointTriple> s;
    for (int n = 0; n < 10000; ++n)
      s.push_back({khtest::random_ball_point(a, rng), khtest::random_ball_point(a, rng),
                   khtest::random_ball_point(a, rng)});
    return estimate_kappa(s, a).kappa;
  };
  const double k1 = sample(1), k2 = sample(2);
  CHECK(std::isfinite(k1));
  CHECK(k1 >= 1.0);
  CHECK(std::abs(k1 - k2) <= 0.1 * k1);
}
