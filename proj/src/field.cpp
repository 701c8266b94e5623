#include "kh/field.hpp"

#include "kh/error.hpp"
#include "kh/flows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace kh {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double p) {
  double r = std::fmod(p, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

void fill_coordinates(const Point& z, int d, std::array<double, SymbolicField::kMaxVars>& y) {
  y[0] = z.t;
  for (int i = 0; i < d; ++i) {
    y[1 + i] = z.x(i);
    y[1 + d + i] = z.v(i);
  }
}

double ipow(double base, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

bool same_shape(const SymbolicField::Term& a, const SymbolicField::Term& b, int nv) {
  for (int j = 0; j < nv; ++j) {
    if (a.pow[j] != b.pow[j] || a.omega[j] != b.omega[j] || a.gauss[j] != b.gauss[j]) return false;
    if (a.omega[j] != 0.0 && a.phase[j] != b.phase[j]) return false;
  }
  return true;
}

bool shape_less(const SymbolicField::Term& a, const SymbolicField::Term& b, int nv) {
  for (int j = 0; j < nv; ++j) {
    const double pa = a.omega[j] != 0.0 ? a.phase[j] : 0.0;
    const double pb = b.omega[j] != 0.0 ? b.phase[j] : 0.0;
    const auto ka = std::make_tuple(a.pow[j], a.omega[j], pa, a.gauss[j]);
    const auto kb = std::make_tuple(b.pow[j], b.omega[j], pb, b.gauss[j]);
    if (ka != kb) return ka < kb;
  }
  return false;
}

}  // namespace

std::string LieDirection::str() const {
  switch (kind) {
    case Kind::Y: return drift ? "Y_B" : "Y";
    case Kind::Z: return "Z" + std::to_string(index + 1);
    case Kind::X: return "dx" + std::to_string(index + 1);
  }
  return "?";
}

FunctionHandle make_handle(std::function<double(const Point&)> f, std::string label) {
  FunctionHandle h;
  h.eval = std::move(f);
  h.label = std::move(label);
  return h;
}

FunctionHandle left_translate(const FunctionHandle& u, const Point& z1, const Anisotropy& a) {
  auto f = u.eval;
  return make_handle([f, z1, a](const Point& z) { return f(compose(z1, z, a)); },
                     u.label + " o L_z1");
}

FunctionHandle scale(const FunctionHandle& u, double c) {
  FunctionHandle h;
  auto f = u.eval;
  h.eval = [f, c](const Point& z) { return c * f(z); };
  if (u.oracle) {
    auto o = u.oracle;
    h.oracle = [o, c](const TermIndex& ti, const Point& z) { return c * o(ti, z); };
  }
  if (u.derive) {
    auto dv = u.derive;
    h.derive = [dv, c](const LieDirection& dir) { return scale(dv(dir), c); };
  }
  h.label = std::to_string(c) + "*" + u.label;
  return h;
}

SymbolicField::SymbolicField(int d) : d_(d) {
  if (d < 1 || d > kMaxDim) throw Error(ErrorCode::InvalidArgument, "d out of range");
}

SymbolicField SymbolicField::constant(int d, double c) {
  SymbolicField f(d);
  Term t;
  t.coeff = c;
  f.add_term(t);
  f.canonicalize();
  return f;
}

SymbolicField SymbolicField::monomial(int d, double c, int a, const MultiIndex& gamma,
                                      const MultiIndex& beta) {
  if (static_cast<int>(gamma.size()) != d || static_cast<int>(beta.size()) != d) {
    throw Error(ErrorCode::DimensionMismatch, "monomial multi-index length must equal d");
  }
  SymbolicField f(d);
  Term t;
  t.coeff = c;
  t.pow[0] = a;
  for (int i = 0; i < d; ++i) {
    t.pow[1 + i] = gamma[i];
    t.pow[1 + d + i] = beta[i];
  }
  f.add_term(t);
  f.canonicalize();
  return f;
}

SymbolicField SymbolicField::sine(int d, int var, double omega, double phase) {
  SymbolicField f(d);
  if (var < 0 || var >= f.num_vars()) throw Error(ErrorCode::InvalidArgument, "variable out of range");
  Term t;
  t.coeff = 1.0;
  if (omega == 0.0) {
    t.coeff = std::sin(phase);
  } else {
    t.omega[var] = omega;
    t.phase[var] = wrap_phase(phase);
  }
  f.add_term(t);
  f.canonicalize();
  return f;
}

SymbolicField SymbolicField::gaussian(int d, const std::array<double, kMaxVars>& q) {
  SymbolicField f(d);
  Term t;
  t.coeff = 1.0;
  for (int j = 0; j < f.num_vars(); ++j) {
    if (q[j] < 0.0) throw Error(ErrorCode::InvalidArgument, "gaussian rate must be >= 0");
    t.gauss[j] = q[j];
  }
  f.add_term(t);
  f.canonicalize();
  return f;
}

double SymbolicField::operator()(const Point& z) const {
  if (z.dim() != d_) throw Error(ErrorCode::DimensionMismatch, "field and point dimension differ");
  std::array<double, kMaxVars> y{};
  fill_coordinates(z, d_, y);
  const int nv = num_vars();
  double total = 0.0;
  for (const auto& t : terms_) {
    double val = t.coeff;
    double expo = 0.0;
    for (int j = 0; j < nv; ++j) {
      if (t.pow[j]) val *= ipow(y[j], t.pow[j]);
      if (t.omega[j] != 0.0) val *= std::sin(t.omega[j] * y[j] + t.phase[j]);
      if (t.gauss[j] != 0.0) expo -= t.gauss[j] * y[j] * y[j];
    }
    if (expo != 0.0) val *= std::exp(expo);
    total += val;
  }
  return total;
}

void SymbolicField::add_term(const Term& t) {
  if (t.coeff != 0.0) terms_.push_back(t);
}

void SymbolicField::canonicalize() {
  const int nv = num_vars();
  for (auto& t : terms_)
    for (int j = 0; j < nv; ++j) {
      if (t.omega[j] == 0.0) t.phase[j] = 0.0;
      else t.phase[j] = wrap_phase(t.phase[j]);
    }
  std::sort(terms_.begin(), terms_.end(),
            [nv](const Term& a, const Term& b) { return shape_less(a, b, nv); });
  std::vector<Term> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && same_shape(merged.back(), t, nv)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.coeff == 0.0; }),
               merged.end());
  terms_ = std::move(merged);
}

SymbolicField SymbolicField::operator+(const SymbolicField& o) const {
  if (o.d_ != d_) throw Error(ErrorCode::DimensionMismatch, "field dimension differ");
  SymbolicField r = *this;
  for (const auto& t : o.terms_) r.add_term(t);
  r.canonicalize();
  return r;
}

SymbolicField SymbolicField::operator-(const SymbolicField& o) const { return *this + o * -1.0; }

SymbolicField SymbolicField::operator*(double c) const {
  SymbolicField r(d_);
  for (auto t : terms_) {
    t.coeff *= c;
    r.add_term(t);
  }
  r.canonicalize();
  return r;
}

SymbolicField SymbolicField::operator*(const SymbolicField& o) const {
  if (o.d_ != d_) throw Error(ErrorCode::DimensionMismatch, "field dimension differ");
  const int nv = num_vars();
  SymbolicField r(d_);
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      // Expand trig products variable by variable:
      // sin A sin B = (sin(A - B + pi/2) - sin(A + B + pi/2)) / 2.
      std::vector<Term> partial{Term{}};
      partial[0].coeff = a.coeff * b.coeff;
      for (int j = 0; j < nv; ++j) {
        for (auto& p : partial) {
          p.pow[j] = a.pow[j] + b.pow[j];
          p.gauss[j] = a.gauss[j] + b.gauss[j];
        }
        const bool ta = a.omega[j] != 0.0, tb = b.omega[j] != 0.0;
        if (ta && tb) {
          std::vector<Term> next;
          for (const auto& p : partial) {
            Term diff = p, sum = p;
            diff.coeff *= 0.5;
            sum.coeff *= -0.5;
            diff.omega[j] = a.omega[j] - b.omega[j];
            diff.phase[j] = a.phase[j] - b.phase[j] + kHalfPi;
            sum.omega[j] = a.omega[j] + b.omega[j];
            sum.phase[j] = a.phase[j] + b.phase[j] + kHalfPi;
            for (Term* t : {&diff, &sum}) {
              if (t->omega[j] == 0.0) {
                t->coeff *= std::sin(t->phase[j]);
                t->phase[j] = 0.0;
              }
              next.push_back(*t);
            }
          }
          partial = std::move(next);
        } else if (ta || tb) {
          for (auto& p : partial) {
            p.omega[j] = ta ? a.omega[j] : b.omega[j];
            p.phase[j] = ta ? a.phase[j] : b.phase[j];
          }
        }
      }
      for (const auto& p : partial) r.add_term(p);
    }
  }
  r.canonicalize();
  return r;
}

SymbolicField SymbolicField::times_var(int var) const {
  SymbolicField r = *this;
  for (auto& t : r.terms_) ++t.pow[var];
  r.canonicalize();
  return r;
}

SymbolicField SymbolicField::partial(int var) const {
  if (var < 0 || var >= num_vars()) throw Error(ErrorCode::InvalidArgument, "variable out of range");
  SymbolicField r(d_);
  for (const auto& t : terms_) {
    if (t.pow[var] > 0) {
      Term p = t;
      p.coeff *= t.pow[var];
      --p.pow[var];
      r.add_term(p);
    }
    if (t.omega[var] != 0.0) {
      Term p = t;
      p.coeff *= t.omega[var];
      p.phase[var] += kHalfPi;
      r.add_term(p);
    }
    if (t.gauss[var] != 0.0) {
      Term p = t;
      p.coeff *= -2.0 * t.gauss[var];
      ++p.pow[var];
      r.add_term(p);
    }
  }
  r.canonicalize();
  return r;
}

SymbolicField SymbolicField::lie_y() const {
  SymbolicField r = dt();
  for (int i = 0; i < d_; ++i) r = r + dx(i).times_var(1 + d_ + i);
  return r;
}

SymbolicField SymbolicField::lie_y(const DriftMatrix& b) const {
  if (b.d() != d_) throw Error(ErrorCode::DimensionMismatch, "drift and field dimension differ");
  const auto& m = b.matrix();
  SymbolicField r = dt();
  for (int row = 0; row < 2 * d_; ++row) {
    const SymbolicField der = partial(1 + row);
    if (der.is_zero()) continue;
    for (int col = 0; col < 2 * d_; ++col) {
      if (m(row, col) == 0.0) continue;
      r = r + der.times_var(1 + col) * m(row, col);
    }
  }
  return r;
}

SymbolicField SymbolicField::lie(const LieDirection& dir) const {
  switch (dir.kind) {
    case LieDirection::Kind::Y: return dir.drift ? lie_y(*dir.drift) : lie_y();
    case LieDirection::Kind::Z: return dv(dir.index);
    case LieDirection::Kind::X: return dx(dir.index);
  }
  return *this;
}

SymbolicField SymbolicField::term_derivative(const TermIndex& ti,
                                             const std::shared_ptr<const DriftMatrix>& drift) const {
  if (static_cast<int>(ti.gamma.size()) != d_ || static_cast<int>(ti.beta.size()) != d_) {
    throw Error(ErrorCode::DimensionMismatch, "term index dimension differs from field");
  }
  SymbolicField r = *this;
  for (int i = 0; i < d_; ++i)
    for (int n = 0; n < ti.gamma[i]; ++n) r = r.dx(i);
  for (int i = 0; i < d_; ++i)
    for (int n = 0; n < ti.beta[i]; ++n) r = r.dv(i);
  for (int n = 0; n < ti.k; ++n) r = drift ? r.lie_y(*drift) : r.lie_y();
  return r;
}

FunctionHandle SymbolicField::handle(std::string label) const {
  auto self = std::make_shared<const SymbolicField>(*this);
  FunctionHandle h;
  h.eval = [self](const Point& z) { return (*self)(z); };
  h.oracle = [self](const TermIndex& ti, const Point& z) { return self->term_derivative(ti)(z); };
  h.derive = [self, label](const LieDirection& dir) {
    return self->lie(dir).handle(dir.str() + "(" + label + ")");
  };
  h.label = std::move(label);
  return h;
}

FunctionHandle finite_difference_derivative(const FunctionHandle& u, const LieDirection& dir,
                                            double step, int depth_left) {
  const FieldSpec field = dir.drift ? FieldSpec::y(dir.drift) : FieldSpec::y();
  auto f = u.eval;
  FunctionHandle h;
  if (dir.kind == LieDirection::Kind::X) {
    const int i = dir.index;
    h.eval = [f, i, step](const Point& z) {
      Point p = z, m = z;
      p.x(i) += step;
      m.x(i) -= step;
      return (f(p) - f(m)) / (2.0 * step);
    };
  } else if (dir.kind == LieDirection::Kind::Z) {
    const int i = dir.index;
    h.eval = [f, i, step](const Point& z) {
      Point p = z, m = z;
      p.v(i) += step;
      m.v(i) -= step;
      return (f(p) - f(m)) / (2.0 * step);
    };
  } else {
    h.eval = [f, field, step](const Point& z) {
      return (f(flow(field, step, z)) - f(flow(field, -step, z))) / (2.0 * step);
    };
  }
  h.label = "fd_" + dir.str() + "(" + u.label + ")";
  if (depth_left > 1) {
    auto self = std::make_shared<FunctionHandle>(h);
    h.derive = [self, step, depth_left](const LieDirection& next) {
      return finite_difference_derivative(*self, next, step, depth_left - 1);
    };
  }
  return h;
}

}  // namespace kh
