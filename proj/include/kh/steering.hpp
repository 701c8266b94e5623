#pragma once

// Commutator paths that move only the x-component, the non-homogeneous
// group built on a drift matrix B, and the connection solver.
//
// For signed tau we write sigma = |tau|^theta, so the four-flow path
// e^{-sigma Y} e^{-tau Z_w} e^{sigma Y} e^{tau Z_w} displaces x by
// tau * sigma * w = sign(tau) |tau|^(theta+1) w.

#include "kh/drift.hpp"
#include "kh/group.hpp"

#include <string>
#include <vector>

namespace kh {

struct PathReport {
  std::vector<Point> waypoints;  // z, z2, z3, ..., endpoint
  Point endpoint;
  Point target;
  double endpoint_error = 0.0;  // sup-norm |endpoint - target|
};

/// z2 = e^{tau Z_w} z, z3 = e^{sigma Y} z2, z4 = e^{-tau Z_w} z3, end = e^{-sigma Y} z4.
PathReport commutator_path(const Point& z, const Vec& w, double tau, const Anisotropy& a);

/// commutator_path with w = h/|h|, tau = |h|^{1/(theta+1)}; target (t, x + h, v).
PathReport steer_x(const Point& z, const Vec& h, const Anisotropy& a);

/// (t1 + t2, (x2, v2) + e^{t2 B} (x1, v1))
Point compose_nh(const Point& z1, const Point& z2, const DriftMatrix& b);
/// (-t, -e^{-t B} (x, v))
Point inverse_nh(const Point& z, const DriftMatrix& b);
/// ||z2^{-1} o_B z1||
double qdist_nh(const Point& z1, const Point& z2, const DriftMatrix& b, const Anisotropy& a);

/// S(sigma) = sum_n (-1)^n sigma^n B^{n+2} / (n+2)!, truncated when a term's
/// norm drops below 1e-16 (at most 60 terms). Refuses sigma ||B22|| >= 1.
Eigen::MatrixXd correction_series(double sigma, const DriftMatrix& b);

/// w' = S(sigma)_{22} w
Vec velocity_correction(const Vec& w, double tau, const DriftMatrix& b, const Anisotropy& a);

/// g_{w,tau}(z): the six-flow path of the non-homogeneous group
/// z2 = e^{tau Z_w} z, z3 = e^{sigma Y_B} z2, z4 = e^{-tau Z_w} z3,
/// z5 = e^{-sigma Y_B} z4, z6 = e^{-tau sigma Z_{B22 w}} z5,
/// g = e^{tau sigma^2 Z_{w'}} z6. Its velocity equals v.
PathReport g_path(const Point& z, const Vec& w, double tau, const DriftMatrix& b,
                  const Anisotropy& a);
Point g_correction(const Point& z, const Vec& w, double tau, const DriftMatrix& b,
                   const Anisotropy& a);

/// Radius of targets |h| accepted by connect:
/// min(1, (2||B||)^{-(theta+1)}, largest radius where the fixed-point map is
/// contractive (Lipschitz <= 1/2) on a seeded sample).
double connect_radius(const DriftMatrix& b, const Anisotropy& a);

struct ConnectResult {
  Vec w;
  double tau = 0.0;
  double epsilon = 0.0;
  double tau_bound = 0.0;  // 2 / ||B12|| * |h|^{1/(theta+1)}
  int iterations = 0;
  double residual = 0.0;  // sup-norm of achieved - target
  std::string method;     // "fixed-point", "newton" or "trivial"
  PathReport report;
};

/// Finds unit w and tau >= 0 with g_{w,tau}(z) = (t, x + h, v).
ConnectResult connect(const Point& z, const Vec& h, const DriftMatrix& b, const Anisotropy& a);

}  // namespace kh
