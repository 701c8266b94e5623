#pragma once

// Drift matrix B of the non-homogeneous transport field
// Y = <B (x,v)^T, grad_(x,v)> + d_t, and its matrix exponential.

#include "kh/group.hpp"

#include <Eigen/Dense>

#include <string>

namespace kh {

/// exp(A) by scaling and squaring with diagonal Pade approximants of
/// degree 3, 5, 7, 9 or 13, chosen from the 1-norm of A.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

class DriftMatrix {
 public:
  /// Validates that B is 2d x 2d, finite, and that B12 has rank d.
  explicit DriftMatrix(Eigen::MatrixXd b);

  /// Skips the rank check on B12 (used for degenerate algebraic checks such as B = 0).
  static DriftMatrix unchecked(Eigen::MatrixXd b);

  /// B with B12 = I and every other block zero: Y = <v, grad_x> + d_t.
  static DriftMatrix kinetic(int d);

  /// Parses whitespace-separated rows ("1 0; 0 1" or newline-separated).
  static DriftMatrix parse(const std::string& text);
  static DriftMatrix from_file(const std::string& path);

  int d() const { return d_; }
  const Eigen::MatrixXd& matrix() const { return b_; }
  Eigen::MatrixXd block(int row, int col) const;  // row, col in {1, 2}

  double norm() const;          // spectral norm of B
  double block_norm(int row, int col) const;
  bool b12_full_rank() const;

  /// e^{tau B}
  Eigen::MatrixXd flow(double tau) const { return expm(tau * b_); }

  /// e^{tau B} applied to the stacked vector (x, v).
  void apply_flow(double tau, Vec& x, Vec& v) const;

 private:
  DriftMatrix(Eigen::MatrixXd b, bool check);

  Eigen::MatrixXd b_;
  int d_;
};

double spectral_norm(const Eigen::MatrixXd& m);

}  // namespace kh
