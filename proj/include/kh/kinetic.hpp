#pragma once

// Pointwise evaluation of non-local kinetic operators in the velocity
// variable:
//
//   prototype     C   int (u(v) - u(v'))              |v - v'|^{-d-2s} dv'
//   general           int K(z, v') (u(v) - u(v'))                     dv'
//   p-Laplacian   C   int Phi_p(u(v) - u(v'))         |v - v'|^{-d-ps} dv'
//
// with Phi_p(r) = |r|^{p-2} r, plus the transport part Y u. All three share
// the sign convention of (-Delta_v)^s, which is positive on cos(<xi, v>).
//
// Integrals are taken in polar coordinates around v, pairing the directions
// +theta and -theta so that the first-order singularity cancels.

#include "kh/field.hpp"
#include "kh/group.hpp"

#include <functional>

namespace kh {

struct QuadratureSpec {
  double core_radius = 1e-4;     // [0, core] handled by a power-law model
  double near_radius = 0.1;      // geometric panels (ratio 2) below this
  double far_radius = 1000.0;    // truncation radius, tail modelled beyond
  double max_panel_width = 1.0;  // uniform panels once widths reach this
  int n_radial = 16;             // Gauss-Legendre nodes per panel
  int n_angular = 32;            // see hemisphere_rule
  bool analytic_tail = true;

  void validate() const;
  /// Same layout with twice the radial and angular resolution.
  QuadratureSpec refined() const;
};

using KernelFn = std::function<double(const Point& z, const Vec& vprime)>;

struct KernelSpec {
  enum class Kind { Prototype, General, PLaplacian };
  Kind kind = Kind::Prototype;
  double s = 0.5;
  double C = 1.0;
  double p = 2.0;
  KernelFn K;
  double c_minus = 0.0;
  double c_plus = 0.0;
  bool symmetric = true;  // K(z, v') depends on v, v' symmetrically

  static KernelSpec prototype(double s, double C);
  static KernelSpec general(double s, KernelFn K, double c_minus, double c_plus, bool symmetric);
  static KernelSpec p_laplacian(double s, double p, double C);

  /// Homogeneity of the operator: 2s, or ps for the p-Laplacian.
  double theta() const { return kind == Kind::PLaplacian ? p * s : 2.0 * s; }
  void validate() const;
};

/// C int (u(v) - u(v')) |v - v'|^{-d-2s} dv' for a prototype spec.
double frac_laplacian(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                      const QuadratureSpec& quad = {});

/// C with C * int (1 - cos(<xi, v'>)) |v'|^{-d-2s} dv' = |xi|^{2s}, xi = xi_norm e_1.
double calibrate_constant(int d, double s, const QuadratureSpec& quad = {}, double xi_norm = 1.0);

/// int K(z, v') (u(v) - u(v')) dv'. Kernel bounds are checked at every node.
double general_kernel_apply(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                            const QuadratureSpec& quad = {});

/// C int Phi_p(u(v) - u(v')) |v - v'|^{-d-ps} dv'.
double p_laplacian_apply(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                         const QuadratureSpec& quad = {});

/// Dispatch on spec.kind.
double nonlocal_apply(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                      const QuadratureSpec& quad = {});

/// nonlocal part + central-difference Y u with the given step.
double apply_L(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
               const QuadratureSpec& quad, double step);

}  // namespace kh
