#pragma once

// Discretized intrinsic Hoelder seminorms. True suprema over (z, tau) are
// replaced by maxima over a finite SampleGrid, so every value reported
// here is a lower bound of the continuous seminorm.

#include "kh/drift.hpp"
#include "kh/field.hpp"
#include "kh/group.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace kh {

struct SampleGrid {
  std::vector<Point> points;
  std::vector<double> taus;  // nonzero, both signs

  /// `n_points` Halton points of the unit hnorm ball (rejection sampling)
  /// times `n_taus` log-spaced |tau| in [tau_lo, tau_hi], both signs.
  static SampleGrid halton_ball(const Anisotropy& a, int n_points = 2000, int n_taus = 40,
                                double tau_lo = 1e-4, double tau_hi = 1.0);
  double min_abs_tau() const;
  void validate() const;
};

struct BoxDomain {
  Point lower;
  Point upper;

  BoxDomain(Point lower, Point upper);
  /// Open box test.
  bool contains(const Point& z) const;
  /// Closed box test.
  bool contains_closure(const Point& z) const;
  int dim() const { return lower.dim(); }
};

struct HolderOptions {
  /// Non-homogeneous Y (drift B); null means Y = <v, grad_x> + d_t.
  std::shared_ptr<const DriftMatrix> drift;
  /// Only taus with |tau| < tau_limit enter the suprema.
  double tau_limit = std::numeric_limits<double>::infinity();
  /// Finite-difference derivative levels allowed when a handle has no derive().
  int max_fd_depth = 2;
};

struct HolderReport {
  double alpha = 0.0;
  double theta = 0.0;
  double value = 0.0;
  std::vector<std::string> case_path;  // recursion branches, outermost first
  std::size_t grid_points = 0;
  std::size_t grid_taus = 0;
  bool lower_bound = true;
};

/// max over the grid of |u(e^{tau Z_i} z) - u(z)| / |tau|^alpha, 0 < alpha <= 1.
double seminorm_Z(const FunctionHandle& u, int i, double alpha, const SampleGrid& grid,
                  const HolderOptions& opt = {});
/// max over the grid of |u(e^{tau Y} z) - u(z)| / |tau|^{alpha/theta}, 0 < alpha <= theta.
double seminorm_Y(const FunctionHandle& u, double alpha, const SampleGrid& grid,
                  const Anisotropy& a, const HolderOptions& opt = {});

/// Recursive C^alpha seminorm:
///   alpha <= min(1,theta):            ||u||_Y + sum ||u||_{Z_i}
///   min < alpha <= max, theta < 1:    ||Yu||_{alpha-theta} + sum ||u||_{Z_i}
///   min < alpha <= max, theta > 1:    ||u||_Y + sum ||Z_i u||_{alpha-1}
///   alpha > max(1,theta):             ||Yu||_{alpha-theta} + sum ||Z_i u||_{alpha-1}
/// For theta = 1 the middle case is empty.
HolderReport seminorm_C_alpha(const FunctionHandle& u, double alpha, const SampleGrid& grid,
                              const Anisotropy& a, const HolderOptions& opt = {});

/// Largest delta in ]0,1] such that e^{s Z_i}(z) and e^{s Y}(z) stay in the
/// open box for |s| <= delta. Closed form for the homogeneous Y; forward
/// scan plus bisection (1e-10) when a drift is given.
double delta_z(const Point& z, const BoxDomain& omega, const Anisotropy& a,
               const std::shared_ptr<const DriftMatrix>& drift = nullptr);

/// Minimum of delta_z over an n^{1+2d} cosine-spaced sample of the closure of omega0.
double delta_omega0(const BoxDomain& omega0, const BoxDomain& omega, const Anisotropy& a,
                    const std::shared_ptr<const DriftMatrix>& drift = nullptr,
                    int n_per_axis = 20);

/// Localized seminorm: grid points restricted to the closure of omega0 and
/// taus to |tau| < delta_{omega0}.
HolderReport seminorm_local(const FunctionHandle& u, double alpha, const BoxDomain& omega0,
                            const BoxDomain& omega, const SampleGrid& grid, const Anisotropy& a,
                            HolderOptions opt = {});

}  // namespace kh
