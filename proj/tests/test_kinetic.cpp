#include "kh/error.hpp"
#include "kh/field.hpp"
#include "kh/flows.hpp"
#include "kh/kinetic.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace kh;
using Catch::Approx;

namespace {

double closed_form_constant(int d, double s) {
  return std::pow(4.0, s) * std::tgamma(0.5 * d + s) /
         (std::pow(std::numbers::pi, 0.5 * d) * std::abs(std::tgamma(-s)));
}

FunctionHandle cos_v1(int d, double xi) {
  return SymbolicField::sine(d, 1 + d, xi, 0.5 * std::numbers::pi).handle("cos");
}

FunctionHandle window(int d) {
  std::array<double, SymbolicField::kMaxVars> q{};
  for (int j = 0; j < 1 + 2 * d; ++j) q[j] = 0.3;
  return (SymbolicField::sine(d, 1 + d, 1.2, 0.3) * SymbolicField::gaussian(d, q)).handle("w");
}

QuadratureSpec coarse() {
  QuadratureSpec q;
  q.far_radius = 200.0;
  q.n_angular = 16;
  return q;
}

}  // namespace

TEST_CASE("normalizing constant", "[kinetic]") {
  CHECK(closed_form_constant(1, 0.5) == Approx(1.0 / std::numbers::pi));
  for (double s : {0.25, 0.5, 0.75}) {
    CHECK(calibrate_constant(1, s) == Approx(closed_form_constant(1, s)).epsilon(2e-4));
  }
  // The angular rule limits accuracy for d > 1.
  QuadratureSpec fine;
  fine.n_angular = 128;
  CHECK(calibrate_constant(2, 0.5, fine) == Approx(closed_form_constant(2, 0.5)).epsilon(2e-4));
  CHECK(calibrate_constant(2, 0.25, fine) == Approx(closed_form_constant(2, 0.25)).epsilon(2e-3));
  CHECK(calibrate_constant(3, 0.5, coarse()) == Approx(closed_form_constant(3, 0.5)).epsilon(3e-2));
  CHECK_THROWS_AS(calibrate_constant(1, 1.0), Error);
  CHECK_THROWS_AS(calibrate_constant(1, 0.5, {}, 0.0), Error);
}

TEST_CASE("symbol of the fractional Laplacian", "[kinetic]") {
  for (double s : {0.25, 0.5, 0.75}) {
    const KernelSpec k = KernelSpec::prototype(s, closed_form_constant(1, s));
    for (double xi : {0.5, 1.0, 2.0}) {
      const double got = frac_laplacian(cos_v1(1, xi), Point::scalar(0, 0, 0.3), k);
      const double want = std::pow(xi, 2 * s) * std::cos(xi * 0.3);
      CHECK(got == Approx(want).epsilon(5e-4));
    }
  }
  QuadratureSpec fine;
  fine.n_angular = 128;
  const KernelSpec k2 = KernelSpec::prototype(0.5, closed_form_constant(2, 0.5));
  Point z = Point::identity(2);
  z.v(0) = 0.3;
  z.v(1) = -1.0;
  CHECK(frac_laplacian(cos_v1(2, 2.0), z, k2, fine) == Approx(2.0 * std::cos(0.6)).epsilon(2e-4));
}

TEST_CASE("sign and symmetry", "[kinetic]") {
  const KernelSpec k = KernelSpec::prototype(0.9, 1.0);
  CHECK(frac_laplacian(cos_v1(1, 1.0), Point::identity(1), k) > 0.0);
  const FunctionHandle odd = SymbolicField::sine(1, 2, 1.0).handle("sin v");
  CHECK(std::abs(frac_laplacian(odd, Point::scalar(0.4, -0.2, 0.0), KernelSpec::prototype(0.5, 1.0))) <= 1e-12);
  const FunctionHandle c = SymbolicField::constant(2, 3.0).handle("c");
  CHECK(frac_laplacian(c, Point::identity(2), KernelSpec::prototype(0.5, 1.0)) == 0.0);
}

TEST_CASE("linearity and Galilean invariance", "[kinetic][property]") {
  const Anisotropy a(1, 1.0);
  const KernelSpec k = KernelSpec::prototype(0.4, 1.0);
  const FunctionHandle u = window(1), w = cos_v1(1, 0.7);
  const SymbolicField sum = SymbolicField::sine(1, 2, 0.7, 0.5 * std::numbers::pi) * 2.0;
  khtest::Rng rng(17);
  for (int n = 0; n < 5; ++n) {
    const Point z = khtest::random_point(1, rng);
    const double lhs = frac_laplacian(sum.handle("2w"), z, k);
    CHECK(lhs == Approx(2.0 * frac_laplacian(w, z, k)).epsilon(1e-12));
    const Point z1 = khtest::random_point(1, rng);
    const double translated = frac_laplacian(left_translate(u, z1, a), z, k);
    CHECK(translated == Approx(frac_laplacian(u, compose(z1, z, a), k)).epsilon(1e-9).margin(1e-12));
  }
}

TEST_CASE("p = 2 reduces to the fractional Laplacian", "[kinetic]") {
  khtest::Rng rng(12);
  for (int d : {1, 2}) {
    const FunctionHandle u = window(d);
    for (int n = 0; n < 3; ++n) {
      const Point z = khtest::random_point(d, rng);
      const double lin = frac_laplacian(u, z, KernelSpec::prototype(0.3, 1.7));
      const double pl = p_laplacian_apply(u, z, KernelSpec::p_laplacian(0.3, 2.0, 1.7));
      CHECK(pl == Approx(lin).epsilon(1e-12).margin(1e-14));
    }
  }
}

TEST_CASE("p-Laplacian", "[kinetic]") {
  const KernelSpec k = KernelSpec::p_laplacian(0.4, 3.0, 1.0);
  CHECK(k.theta() == Approx(1.2));
  CHECK(p_laplacian_apply(cos_v1(1, 1.0), Point::identity(1), k) > 0.0);
  // p - 1 <= p s with p < 2 is rejected.
  CHECK_THROWS_AS(p_laplacian_apply(cos_v1(1, 1.0), Point::identity(1), KernelSpec::p_laplacian(0.8, 1.5, 1.0)),
                  Error);
  CHECK_NOTHROW(p_laplacian_apply(cos_v1(1, 1.0), Point::identity(1), KernelSpec::p_laplacian(0.2, 1.5, 1.0)));
  CHECK_THROWS_AS(KernelSpec::p_laplacian(0.4, 1.0, 1.0).validate(), Error);
}

TEST_CASE("general kernels", "[kinetic]") {
  const double s = 0.5;
  const double c = closed_form_constant(1, s);
  auto kern = [c, s](const Point& z, const Vec& vp) {
    const double r = std::abs(vp(0) - z.v(0));
    return c * (1.0 + 0.1 * std::cos(r)) / std::pow(r, 1.0 + 2.0 * s);
  };
  const KernelSpec k = KernelSpec::general(s, kern, 0.9 * c, 1.1 * c, true);
  const double val = general_kernel_apply(cos_v1(1, 1.0), Point::identity(1), k);
  CHECK(val >= 0.9);
  CHECK(val <= 1.1);

  const KernelSpec proto_like = KernelSpec::general(
      0.3, [](const Point& z, const Vec& vp) { return std::pow(std::abs(vp(0) - z.v(0)), -1.6); }, 1.0,
      1.0, true);
  const Point z = Point::scalar(0.1, 0.2, 0.3);
  CHECK(general_kernel_apply(window(1), z, proto_like) ==
        Approx(frac_laplacian(window(1), z, KernelSpec::prototype(0.3, 1.0))).epsilon(1e-10));

  const KernelSpec loose = KernelSpec::general(s, kern, 0.95 * c, 1.05 * c, true);
  try {
    general_kernel_apply(cos_v1(1, 1.0), Point::identity(1), loose);
    FAIL("expected a kernel bound error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KernelBound);
  }
  const KernelSpec skew = KernelSpec::general(0.6, kern, 0.5 * c, 2 * c, false);
  try {
    general_kernel_apply(cos_v1(1, 1.0), Point::identity(1), skew);
    FAIL("expected a symmetrization error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NeedsSymmetrizedKernel);
  }
}

TEST_CASE("guards", "[kinetic]") {
  CHECK_THROWS_AS(KernelSpec::prototype(0.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(KernelSpec::prototype(1.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(KernelSpec::prototype(0.5, -1.0).validate(), Error);
  QuadratureSpec bad;
  bad.near_radius = 1e-5;
  CHECK_THROWS_AS(bad.validate(), Error);
  const FunctionHandle grow = SymbolicField::monomial(1, 1.0, 0, {0}, {2}).handle("v^2");
  try {
    frac_laplacian(grow, Point::identity(1), KernelSpec::prototype(0.5, 1.0));
    FAIL("expected a non-integrable error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegrable);
  }
  const FunctionHandle nan = make_handle([](const Point&) { return std::nan(""); }, "nan");
  CHECK_THROWS_AS(frac_laplacian(nan, Point::identity(1), KernelSpec::prototype(0.5, 1.0)), Error);
}

TEST_CASE("full operator adds transport", "[kinetic]") {
  const FunctionHandle x = SymbolicField::monomial(1, 1.0, 0, {1}, {0}).handle("x");
  const Point z = Point::scalar(0, 0, 0.7);
  CHECK(apply_L(x, z, KernelSpec::prototype(0.5, 1.0), {}, 1e-4) == Approx(0.7));
  const FunctionHandle c = cos_v1(1, 1.0);
  CHECK(apply_L(c, z, KernelSpec::prototype(0.5, 1.0), {}, 1e-4) ==
        Approx(nonlocal_apply(c, z, KernelSpec::prototype(0.5, 1.0))));
}

TEST_CASE("worked operator examples", "[kinetic]") {
  const QuadratureSpec q;
  const double c1 = calibrate_constant(1, 0.5, q, 1.0);
  CHECK(calibrate_constant(1, 0.5, q, 2.0) == Approx(c1).epsilon(1e-3));
  CHECK(calibrate_constant(1, 0.5, q.refined()) == Approx(c1).epsilon(1e-4));

  // v^2 under a window: the s -> 1 limit points along -u''(0) < 0.
  std::array<double, SymbolicField::kMaxVars> g{};
  g[2] = 0.5;
  const FunctionHandle bump =
      (SymbolicField::monomial(1, 1.0, 0, {0}, {2}) * SymbolicField::gaussian(1, g)).handle("v^2 w");
  CHECK(frac_laplacian(bump, Point::identity(1), KernelSpec::prototype(0.9, calibrate_constant(1, 0.9))) < 0.0);

  const KernelSpec proto = KernelSpec::prototype(0.4, 1.0);
  const Point z = Point::scalar(0.2, 0.1, -0.3);
  const KernelSpec doubled = KernelSpec::general(
      0.4, [](const Point& p, const Vec& vp) { return 2.0 * std::pow(std::abs(vp(0) - p.v(0)), -1.8); }, 2.0,
      2.0, true);
  CHECK(general_kernel_apply(window(1), z, doubled) == Approx(2.0 * frac_laplacian(window(1), z, proto)).epsilon(1e-12));

  // Odd perturbation, allowed below s = 1/2 without symmetrization.
  const KernelSpec wavy = KernelSpec::general(
      0.4,
      [](const Point& p, const Vec& vp) {
        const double y = p.v(0) - vp(0);
        return (1.0 + 0.1 * std::sin(y)) * std::pow(std::abs(y), -1.8);
      },
      0.9, 1.1, false);
  const double proto_val = frac_laplacian(cos_v1(1, 1.0), Point::identity(1), proto);
  const double wavy_val = general_kernel_apply(cos_v1(1, 1.0), Point::identity(1), wavy);
  CHECK(std::isfinite(wavy_val));
  CHECK(wavy_val >= 0.9 * proto_val);
  CHECK(wavy_val <= 1.1 * proto_val);
}

TEST_CASE("p-Laplacian worked examples", "[kinetic]") {
  const KernelSpec k = KernelSpec::p_laplacian(0.4, 3.0, 1.0);
  CHECK(p_laplacian_apply(SymbolicField::constant(1, 2.0).handle("c"), Point::identity(1), k) == 0.0);
  const FunctionHandle odd = SymbolicField::sine(1, 2, 1.0).handle("sin v");
  CHECK(std::abs(p_laplacian_apply(odd, Point::scalar(0.3, 0.2, 0.0), k)) <= 1e-12);
}

TEST_CASE("full operator assembly", "[kinetic]") {
  const KernelSpec k = KernelSpec::prototype(0.5, 1.0);
  CHECK(apply_L(SymbolicField::constant(1, 1.0).handle("c"), Point::scalar(1, 2, 3), k, {}, 1e-4) == 0.0);
  const FunctionHandle u = (SymbolicField::sine(1, 2, 1.0, 0.5 * std::numbers::pi) *
                            SymbolicField::sine(1, 1, 0.5) * SymbolicField::sine(1, 0, 0.7, 0.2))
                               .handle("cos v phi");
  const Point z = Point::scalar(0.3, 0.4, 0.5);
  const double parts = nonlocal_apply(u, z, k) + lie_derivative(u, FieldSpec::y(), z, 1e-4);
  CHECK(apply_L(u, z, k, {}, 1e-4) == Approx(parts).epsilon(1e-14));
}
