#pragma once

// Seeded generators for the property tests.

#include "kh/group.hpp"

#include <random>

namespace khtest {

using Rng = std::mt19937_64;

inline kh::Point random_point(int d, Rng& rng, double half = 1.0) {
  std::uniform_real_distribution<double> u(-half, half);
  kh::Point p = kh::Point::identity(d);
  p.t = u(rng);
  for (int i = 0; i < d; ++i) {
    p.x(i) = u(rng);
    p.v(i) = u(rng);
  }
  return p;
}

inline kh::Point random_ball_point(const kh::Anisotropy& a, Rng& rng) {
  for (;;) {
    kh::Point p = random_point(a.d(), rng);
    if (kh::hnorm(p, a) <= 1.0) return p;
  }
}

inline kh::Vec random_unit(int d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  kh::Vec w(d);
  do {
    for (int i = 0; i < d; ++i) w(i) = g(rng);
  } while (w.norm() < 1e-8);
  return w / w.norm();
}

inline kh::Vec vec1(double a) { return kh::Vec::Constant(1, a); }

inline kh::Vec vec2(double a, double b) {
  kh::Vec v(2);
  v << a, b;
  return v;
}

}  // namespace khtest
