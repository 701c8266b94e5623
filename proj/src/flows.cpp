#include "kh/flows.hpp"

#include "kh/error.hpp"

#include <cmath>

namespace kh {

namespace {

double checked(double value, const char* what, const Point& z) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFinite, std::string("non-finite evaluation in ") + what, z.str());
  }
  return value;
}

}  // namespace

FieldSpec FieldSpec::z(Vec h) { return FieldSpec{Kind::Z, std::move(h), nullptr}; }

FieldSpec FieldSpec::z_axis(int d, int i) {
  Vec h = Vec::Zero(d);
  h(i) = 1.0;
  return z(std::move(h));
}

FieldSpec FieldSpec::y() { return FieldSpec{Kind::Y, Vec(), nullptr}; }

FieldSpec FieldSpec::y(std::shared_ptr<const DriftMatrix> b) {
  return FieldSpec{Kind::Y, Vec(), std::move(b)};
}

Point exp_z(double tau, const Vec& h, const Point& z) {
  if (h.size() != z.v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "direction h must have dimension d");
  }
  return Point(z.t, z.x, z.v + tau * h);
}

Point exp_y(double tau, const Point& z) { return Point(z.t + tau, z.x + tau * z.v, z.v); }

Point exp_y_nh(double tau, const Point& z, const DriftMatrix& b) {
  if (z.dim() != b.d()) throw Error(ErrorCode::DimensionMismatch, "point and drift dimension differ");
  Point out = z;
  out.t += tau;
  b.apply_flow(tau, out.x, out.v);
  return out;
}

Point flow(const FieldSpec& field, double tau, const Point& z) {
  if (field.kind == FieldSpec::Kind::Z) return exp_z(tau, field.h, z);
  if (field.drift) return exp_y_nh(tau, z, *field.drift);
  return exp_y(tau, z);
}

double default_step(const Point& z) {
  double m = std::max(1.0, std::abs(z.t));
  if (z.x.size() > 0) m = std::max(m, z.x.cwiseAbs().maxCoeff());
  if (z.v.size() > 0) m = std::max(m, z.v.cwiseAbs().maxCoeff());
  return 1e-4 * m;
}

double lie_derivative(const FunctionHandle& u, const FieldSpec& field, const Point& z, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const double up = checked(u(flow(field, step, z)), "lie_derivative", z);
  const double dn = checked(u(flow(field, -step, z)), "lie_derivative", z);
  return (up - dn) / (2.0 * step);
}

CommutatorDefect commutator_defect(const FunctionHandle& u, int i, const Point& z, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (i < 0 || i >= z.dim()) throw Error(ErrorCode::InvalidArgument, "field index out of range");
  const Vec e = Vec::Unit(z.dim(), i);

  // Z then Y versus Y then Z.
  auto zy = [&](double a, double b) { return checked(u(exp_y(b, exp_z(a, e, z))), "commutator", z); };
  auto yz = [&](double a, double b) { return checked(u(exp_z(a, e, exp_y(b, z))), "commutator", z); };
  auto mixed = [&](auto&& f) {
    return (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) / (4.0 * step * step);
  };

  CommutatorDefect out;
  out.commutator = mixed(zy) - mixed(yz);
  Point xp = z, xm = z;
  xp.x(i) += step;
  xm.x(i) -= step;
  out.dx = (checked(u(xp), "commutator", z) - checked(u(xm), "commutator", z)) / (2.0 * step);
  out.defect = std::abs(out.commutator - out.dx);
  return out;
}

}  // namespace kh
