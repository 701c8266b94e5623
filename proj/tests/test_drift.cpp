#include "kh/drift.hpp"
#include "kh/error.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cstdio>
#include <fstream>

using namespace kh;
using Catch::Approx;

TEST_CASE("expm agrees with Eigen's matrix exponential", "[drift]") {
  khtest::Rng rng(3);
  std::normal_distribution<double> g;
  for (double scale : {1e-3, 0.3, 1.0, 5.0, 20.0}) {
    for (int n = 2; n <= 6; n += 2) {
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = scale * g(rng) / n;
      const Eigen::MatrixXd want = m.exp();
      CHECK((expm(m) - want).norm() <= 1e-11 * std::max(1.0, want.norm()));
    }
  }
  CHECK(expm(Eigen::MatrixXd::Zero(3, 3)).isIdentity(0.0));
}

TEST_CASE("drift validation", "[drift]") {
  CHECK_THROWS_AS(DriftMatrix(Eigen::MatrixXd::Zero(3, 3)), Error);
  CHECK_THROWS_AS(DriftMatrix(Eigen::MatrixXd::Zero(2, 2)), Error);
  Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(DriftMatrix(nan), Error);
  CHECK_NOTHROW(DriftMatrix::unchecked(Eigen::MatrixXd::Zero(2, 2)));
  const DriftMatrix k = DriftMatrix::kinetic(2);
  CHECK(k.block(1, 2).isIdentity());
  CHECK(k.block(2, 2).isZero());
  CHECK(k.b12_full_rank());
  CHECK(k.norm() == Approx(1.0));
}

TEST_CASE("parsing", "[drift]") {
  const DriftMatrix b = DriftMatrix::parse("0 1; 0.5 0");
  CHECK(b.matrix()(0, 1) == 1.0);
  CHECK(b.matrix()(1, 0) == 0.5);
  CHECK_THROWS_AS(DriftMatrix::parse("0 1; 1"), Error);
  CHECK_THROWS_AS(DriftMatrix::parse("a b; c d"), Error);
  const std::string path = "kh_drift_test.txt";
  {
    std::ofstream f(path);
    f << "0 1\n0 0\n";
  }
  CHECK(DriftMatrix::from_file(path).matrix() == DriftMatrix::kinetic(1).matrix());
  std::remove(path.c_str());
  CHECK_THROWS_AS(DriftMatrix::from_file("does/not/exist"), Error);
}

TEST_CASE("kinetic flow is free transport", "[drift]") {
  const DriftMatrix k = DriftMatrix::kinetic(2);
  Vec x = khtest::vec2(1, 2), v = khtest::vec2(-1, 0.5);
  k.apply_flow(2.0, x, v);
  CHECK(x(0) == Approx(-1.0));
  CHECK(x(1) == Approx(3.0));
  CHECK(v(1) == Approx(0.5));
}
