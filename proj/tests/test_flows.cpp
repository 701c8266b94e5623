#include "kh/error.hpp"
#include "kh/field.hpp"
#include "kh/flows.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace kh;
using Catch::Approx;

namespace {

FunctionHandle poly(int a, int g, int b) {
  return SymbolicField::monomial(1, 1.0, a, {g}, {b}).handle("poly");
}

}  // namespace

TEST_CASE("exp_Z examples", "[flows]") {
  const Point z = Point::scalar(0.1, 0.2, 0.3);
  CHECK(exp_z(0.0, khtest::vec1(1.0), z) == z);
  CHECK(exp_z(2.0, khtest::vec1(3.0), Point::identity(1)) == Point::scalar(0, 0, 6));
  CHECK(max_abs_diff(exp_z(0.4, khtest::vec1(2.0), exp_z(-0.4, khtest::vec1(2.0), z)), z) <= 1e-15);
  CHECK_THROWS_AS(exp_z(1.0, khtest::vec2(1, 0), z), Error);
}

TEST_CASE("exp_Y examples", "[flows]") {
  const Point z = Point::scalar(0.1, 0.2, 0.3);
  CHECK(exp_y(0.0, z) == z);
  CHECK(exp_y(1.0, Point::scalar(0, 0, 1)) == Point::scalar(1, 1, 1));
  const Anisotropy a(1, 2.0);
  CHECK(max_abs_diff(exp_y(0.8, z), compose(z, Point::scalar(0.8, 0, 0), a)) <= 1e-16);
}

TEST_CASE("flows are one-parameter groups", "[flows][property]") {
  khtest::Rng rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 500; ++n) {
    const Point z = khtest::random_point(2, rng);
    const double s = u(rng), t = u(rng);
    CHECK(max_abs_diff(exp_y(s, exp_y(t, z)), exp_y(s + t, z)) <= 1e-14);
    const Vec h = khtest::random_unit(2, rng);
    CHECK(max_abs_diff(exp_z(s, h, exp_z(t, h, z)), exp_z(s + t, h, z)) <= 1e-14);
  }
}

TEST_CASE("lie derivative examples", "[flows]") {
  const FunctionHandle c = SymbolicField::constant(1, 4.0).handle("c");
  CHECK(lie_derivative(c, FieldSpec::y(), Point::scalar(1, 2, 3), 1e-3) == 0.0);
  CHECK(lie_derivative(poly(0, 1, 0), FieldSpec::y(), Point::scalar(0, 0, 2), 1e-3) == Approx(2.0).epsilon(1e-13));
  CHECK(lie_derivative(poly(0, 0, 2), FieldSpec::z_axis(1, 0), Point::scalar(0, 0, 3), 1e-3) ==
        Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(lie_derivative(c, FieldSpec::y(), Point::identity(1), 0.0), Error);
  const FunctionHandle bad = make_handle([](const Point&) { return std::nan(""); }, "nan");
  CHECK_THROWS_AS(lie_derivative(bad, FieldSpec::y(), Point::identity(1), 1e-3), Error);
}

TEST_CASE("commutator identity [Z, Y] = d_x", "[flows]") {
  khtest::Rng rng(2);
  for (int n = 0; n < 20; ++n) {
    const Point z = khtest::random_point(1, rng);
    for (auto [a, g, b] : {std::tuple{0, 0, 2}, {1, 1, 0}, {0, 1, 1}, {2, 0, 0}, {1, 0, 1}}) {
      CHECK(commutator_defect(poly(a, g, b), 0, z, 1e-3).defect <= 1e-8);
    }
    const auto xv = commutator_defect(poly(0, 1, 1), 0, z, 1e-3);
    CHECK(xv.commutator == Approx(z.v(0)).margin(1e-8));
  }
  const FunctionHandle s = SymbolicField::sine(1, 1, 1.0).handle("sin x");
  CHECK(commutator_defect(s, 0, Point::identity(1), 1e-3).defect <= 1e-5);
}

TEST_CASE("non-homogeneous flow with the kinetic drift is exp_Y", "[flows]") {
  khtest::Rng rng(4);
  const DriftMatrix b = DriftMatrix::kinetic(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 0; n < 100; ++n) {
    const Point z = khtest::random_point(1, rng);
    const double tau = u(rng);
    CHECK(max_abs_diff(exp_y_nh(tau, z, b), exp_y(tau, z)) <= 1e-12);
  }
  const DriftMatrix zero = DriftMatrix::unchecked(Eigen::MatrixXd::Zero(2, 2));
  CHECK(exp_y_nh(0.5, Point::scalar(1, 2, 3), zero) == Point::scalar(1.5, 2, 3));
}
