#pragma once

// Intrinsic Taylor polynomials
//
//   T_alpha u(z0; z) = sum_{weight < alpha} Y^k d_v^beta d_x^gamma u(z0) / (k! gamma! beta!)
//                      * s^k h^gamma y^beta,     (s, h, y) = z0^{-1} o z,
//
// their remainders, and the log-log slope fit of remainder against
// ||z0^{-1} o z||.

#include "kh/drift.hpp"
#include "kh/field.hpp"
#include "kh/group.hpp"
#include "kh/index.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kh {

class TaylorPolynomial {
 public:
  struct Coefficient {
    TermIndex term;
    double value = 0.0;  // derivative / (k! gamma! beta!)
  };

  /// Homogeneous group; needs u.oracle for every term with weight < alpha.
  static TaylorPolynomial build(const FunctionHandle& u, double alpha, const Point& z0,
                                const Anisotropy& a);
  /// Non-homogeneous group with drift B: coefficients from Y_B^k d_v^beta d_x^gamma u,
  /// increments from z0^{-1} o_B z. Needs u.derive.
  static TaylorPolynomial build_nh(const FunctionHandle& u, double alpha, const Point& z0,
                                   const Anisotropy& a, std::shared_ptr<const DriftMatrix> b);

  double operator()(const Point& z) const;

  const std::vector<Coefficient>& coefficients() const { return coeffs_; }
  const Point& center() const { return z0_; }
  double alpha() const { return alpha_; }

 private:
  TaylorPolynomial(Point z0, Anisotropy a, double alpha) : z0_(std::move(z0)), a_(a), alpha_(alpha) {}

  Point z0_;
  Anisotropy a_;
  double alpha_;
  std::shared_ptr<const DriftMatrix> drift_;
  std::vector<Coefficient> coeffs_;
};

/// s^k h^gamma y^beta for the increment (s, h, y).
double multi_product(const Point& increment, const TermIndex& ti);

double taylor_eval(const FunctionHandle& u, double alpha, const Point& z0, const Point& z,
                   const Anisotropy& a);

/// |u(z) - T_alpha u(z0; z)|
double remainder(const FunctionHandle& u, double alpha, const Point& z0, const Point& z,
                 const Anisotropy& a);

struct SlopeRecord {
  Point direction;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n_points = 0;
  enum class Status { Fitted, PolynomialExact, InsufficientPoints } status = Status::Fitted;
};

std::string to_string(SlopeRecord::Status s);

struct SlopeReport {
  double alpha = 0.0;
  double theta = 0.0;
  std::vector<SlopeRecord> records;
  /// True when every direction's remainders vanished (below 1e-14).
  bool polynomial_exact = false;
  double min_slope() const;
  double min_r2() const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

/// Geometric grid from `hi` down to `lo` with n points (strictly decreasing).
std::vector<double> geometric_grid(double hi, double lo, int n);

/// Default probe directions: the three axis directions plus `n_random`
/// random points of unit homogeneous norm, seeded.
std::vector<Point> default_directions(const Anisotropy& a, int n_random, unsigned seed);

/// Remainders below kRoundoffFactor * eps * max(|u(z)|, |T(z)|) are dropped from slope fits.
inline constexpr double kRoundoffFactor = 64.0;

/// Fits log remainder against log ||z0^{-1} o z|| along z = z0 o D_lambda(w).
/// Points at the roundoff floor are dropped; at least 6 must survive. A
/// direction whose remainders all stay below 1e-14 is polynomial-exact.
SlopeReport scaling_slope(const FunctionHandle& u, double alpha, const Point& z0,
                          const Anisotropy& a, const std::vector<Point>& directions,
                          const std::vector<double>& lambdas);

}  // namespace kh
