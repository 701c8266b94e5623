#pragma once

// Integral curves of Z_h = sum h_i d_{v_i} and Y = <v, grad_x> + d_t, plus
// central-difference Lie derivatives and the commutator identity
// [Z_i, Y] = d_{x_i}.

#include "kh/drift.hpp"
#include "kh/field.hpp"
#include "kh/group.hpp"

#include <memory>

namespace kh {

struct FieldSpec {
  enum class Kind { Z, Y };
  Kind kind = Kind::Y;
  Vec h;  // direction for Z
  std::shared_ptr<const DriftMatrix> drift;  // optional non-homogeneous Y

  static FieldSpec z(Vec h);
  static FieldSpec z_axis(int d, int i);
  static FieldSpec y();
  static FieldSpec y(std::shared_ptr<const DriftMatrix> b);

  double formal_degree(const Anisotropy& a) const {
    return kind == Kind::Y ? a.theta() : 1.0;
  }
};

/// (t, x, v + tau h)
Point exp_z(double tau, const Vec& h, const Point& z);
/// (t + tau, x + tau v, v)
Point exp_y(double tau, const Point& z);
/// (t + tau, e^{tau B}(x, v))
Point exp_y_nh(double tau, const Point& z, const DriftMatrix& b);

Point flow(const FieldSpec& field, double tau, const Point& z);

/// Default step 1e-4 * max(1, largest |component| of z).
double default_step(const Point& z);

/// (u(e^{step X} z) - u(e^{-step X} z)) / (2 step)
double lie_derivative(const FunctionHandle& u, const FieldSpec& field, const Point& z, double step);

struct CommutatorDefect {
  double commutator = 0.0;  // ([Z_i, Y] u)(z)
  double dx = 0.0;          // d_{x_i} u(z)
  double defect = 0.0;      // |commutator - dx|
};

/// ([Z_i,Y]u)(z) from the mixed second difference of
/// (a,b) -> u(e^{bY} e^{aZ_i} z) - u(e^{aZ_i} e^{bY} z), compared with a
/// central difference in x_i.
CommutatorDefect commutator_defect(const FunctionHandle& u, int i, const Point& z, double step);

}  // namespace kh
