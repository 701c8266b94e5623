#pragma once

// Evaluable scalar fields u(t,x,v) and an exact symbolic backend.
//
// SymbolicField represents finite sums of terms
//
//   c * t^a x^b v^c * prod_j sin(omega_j y_j + phi_j) * exp(-sum_j q_j y_j^2)
//
// over the coordinates y = (t, x_1..x_d, v_1..v_d). The class is closed
// under d_t, d_{x_i}, d_{v_i} and under the transport field
// Y = d_t + <B (x,v), grad_(x,v)> for any drift B (B = kinetic gives
// Y = d_t + <v, grad_x>), so every mixed Lie derivative is exact.

#include "kh/drift.hpp"
#include "kh/group.hpp"
#include "kh/index.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kh {

/// One Lie derivative to apply: Y (kinetic or drift B), Z_i = d_{v_i}, or d_{x_i}.
struct LieDirection {
  enum class Kind { Y, Z, X };
  Kind kind = Kind::Y;
  int index = 0;  // coordinate for Z / X
  std::shared_ptr<const DriftMatrix> drift;  // null: Y = <v, grad_x> + d_t

  static LieDirection y() { return {Kind::Y, 0, nullptr}; }
  static LieDirection y(std::shared_ptr<const DriftMatrix> b) { return {Kind::Y, 0, std::move(b)}; }
  static LieDirection z(int i) { return {Kind::Z, i, nullptr}; }
  static LieDirection x(int i) { return {Kind::X, i, nullptr}; }

  std::string str() const;
};

struct FunctionHandle;
using DeriveFn = std::function<FunctionHandle(const LieDirection&)>;

/// An evaluable field with optional exact derivatives.
///
/// `oracle(ti, z)` returns Y^k d_v^beta d_x^gamma u(z) (Y outermost).
/// `derive(dir)` returns a handle for the Lie derivative of u along dir.
/// Both must be re-entrant.
struct FunctionHandle {
  std::function<double(const Point&)> eval;
  std::function<double(const TermIndex&, const Point&)> oracle;
  DeriveFn derive;
  std::string label;

  double operator()(const Point& z) const { return eval(z); }
  bool has_oracle() const { return static_cast<bool>(oracle); }
  bool has_derive() const { return static_cast<bool>(derive); }
};

/// Plain evaluator, no derivatives.
FunctionHandle make_handle(std::function<double(const Point&)> f, std::string label);

/// u o L_{z1}: z -> u(z1 o z). Derivatives are dropped.
FunctionHandle left_translate(const FunctionHandle& u, const Point& z1, const Anisotropy& a);

/// z -> c * u(z), keeping derivative capabilities.
FunctionHandle scale(const FunctionHandle& u, double c);

class SymbolicField {
 public:
  static constexpr int kMaxVars = 1 + 2 * kMaxDim;

  struct Term {
    double coeff = 0.0;
    std::array<int, kMaxVars> pow{};       // monomial exponents
    std::array<double, kMaxVars> omega{};  // trig frequency; 0 means no factor
    std::array<double, kMaxVars> phase{};  // trig phase
    std::array<double, kMaxVars> gauss{};  // exp(-q y^2) rate
  };

  explicit SymbolicField(int d);

  static SymbolicField constant(int d, double c);
  /// c * t^a x^gamma v^beta
  static SymbolicField monomial(int d, double c, int a, const MultiIndex& gamma,
                                const MultiIndex& beta);
  /// sin(omega * y_var + phase); var = 0 for t, 1..d for x_i, d+1..2d for v_i.
  static SymbolicField sine(int d, int var, double omega, double phase = 0.0);
  /// exp(-sum_j q_j y_j^2) over all coordinates.
  static SymbolicField gaussian(int d, const std::array<double, kMaxVars>& q);

  int d() const { return d_; }
  int num_vars() const { return 1 + 2 * d_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double operator()(const Point& z) const;

  SymbolicField operator+(const SymbolicField& o) const;
  SymbolicField operator-(const SymbolicField& o) const;
  SymbolicField operator*(const SymbolicField& o) const;
  SymbolicField operator*(double c) const;

  /// Partial derivative in coordinate var.
  SymbolicField partial(int var) const;
  SymbolicField dt() const { return partial(0); }
  SymbolicField dx(int i) const { return partial(1 + i); }
  SymbolicField dv(int i) const { return partial(1 + d_ + i); }
  /// Y u with Y = d_t + <v, grad_x>.
  SymbolicField lie_y() const;
  /// Y u with Y = d_t + <B (x,v), grad_(x,v)>.
  SymbolicField lie_y(const DriftMatrix& b) const;
  SymbolicField lie(const LieDirection& dir) const;

  /// Y^k d_v^beta d_x^gamma u.
  SymbolicField term_derivative(const TermIndex& ti,
                                const std::shared_ptr<const DriftMatrix>& drift = nullptr) const;

  /// Handle with eval, oracle and derive backed by this field.
  FunctionHandle handle(std::string label) const;

 private:
  void add_term(const Term& t);
  void canonicalize();
  /// y_var * (this)
  SymbolicField times_var(int var) const;

  int d_;
  std::vector<Term> terms_;
};

/// Central-difference Lie derivative handle (no further exact derivatives).
FunctionHandle finite_difference_derivative(const FunctionHandle& u, const LieDirection& dir,
                                            double step, int depth_left);

}  // namespace kh
