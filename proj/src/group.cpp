#include "kh/group.hpp"

#include "kh/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace kh {

namespace {

void require_same_dim(const Point& a, const Point& b) {
  if (a.x.size() != b.x.size() || a.v.size() != b.v.size() || a.x.size() != a.v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "points live in different dimensions",
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

void require_dim(const Point& z, const Anisotropy& a) {
  if (z.dim() != a.d() || z.v.size() != z.x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension does not match anisotropy",
                std::to_string(z.dim()) + " vs " + std::to_string(a.d()));
  }
}

constexpr double kInvPhi = 0.6180339887498948482;

template <class F>
double golden_min(F&& f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double m = 0.5 * (a + b);
  return std::min({f(m), fc, fd});
}

/// Nelder-Mead on a d-dimensional objective; d <= kMaxDim.
template <class F>
Vec nelder_mead(F&& f, const Vec& start, double scale, int max_iter) {
  const int n = static_cast<int>(start.size());
  std::array<Vec, kMaxDim + 1> simplex;
  std::array<double, kMaxDim + 1> values{};
  simplex[0] = start;
  for (int i = 0; i < n; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1](i) += scale;
  }
  for (int i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  std::array<int, kMaxDim + 1> order{};
  for (int it = 0; it < max_iter; ++it) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + n + 1,
              [&](int p, int q) { return values[p] < values[q]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(values[worst] - values[best]) < 1e-15 * (1.0 + std::abs(values[best]))) {
      double spread = 0.0;
      for (int i = 0; i <= n; ++i) spread = std::max(spread, (simplex[i] - simplex[best]).norm());
      if (spread < 1e-13) break;
    }
    Vec centroid = Vec::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= n;

    const Vec reflected = centroid + (centroid - simplex[worst]);
    const double fr = f(reflected);
    if (fr < values[best]) {
      const Vec expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else {
      const Vec contracted = centroid + 0.5 * (simplex[worst] - centroid);
      const double fc = f(contracted);
      if (fc < values[worst]) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
          values[i] = f(simplex[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (values[i] < values[best]) best = i;
  return simplex[best];
}

}  // namespace

Point::Point(double t_, Vec x_, Vec v_) : t(t_), x(std::move(x_)), v(std::move(v_)) {
  if (x.size() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "x and v must have equal dimension");
  }
  if (x.size() < 1 || x.size() > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument, "dimension out of range [1, kMaxDim]",
                std::to_string(x.size()));
  }
}

Point Point::identity(int d) { return Point(0.0, Vec::Zero(d), Vec::Zero(d)); }

Point Point::scalar(double t, double x, double v) {
  Vec xs(1), vs(1);
  xs << x;
  vs << v;
  return Point(t, xs, vs);
}

bool Point::finite() const {
  return std::isfinite(t) && x.allFinite() && v.allFinite();
}

std::string Point::str() const {
  std::ostringstream os;
  os.precision(17);
  os << "(" << t << ", [";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << "], [";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "])";
  return os.str();
}

bool operator==(const Point& a, const Point& b) {
  return a.t == b.t && a.x.size() == b.x.size() && a.x == b.x && a.v == b.v;
}

double max_abs_diff(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double m = std::abs(a.t - b.t);
  m = std::max(m, (a.x - b.x).cwiseAbs().maxCoeff());
  m = std::max(m, (a.v - b.v).cwiseAbs().maxCoeff());
  return m;
}

Anisotropy::Anisotropy(int d, double theta) : d_(d), theta_(theta) {
  if (d < 1 || d > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument, "d must lie in [1, kMaxDim]", std::to_string(d));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::InvalidArgument, "theta must be positive and finite",
                std::to_string(theta));
  }
}

Point compose(const Point& z1, const Point& z2, const Anisotropy& a) {
  require_same_dim(z1, z2);
  require_dim(z1, a);
  return Point(z1.t + z2.t, z1.x + z2.x + z2.t * z1.v, z1.v + z2.v);
}

Point inverse(const Point& z) { return Point(-z.t, z.t * z.v - z.x, -z.v); }

Point dilate(double lambda, const Point& z, const Anisotropy& a) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dilation factor must be positive",
                std::to_string(lambda));
  }
  require_dim(z, a);
  const double th = a.theta();
  return Point(std::pow(lambda, th) * z.t, std::pow(lambda, th + 1.0) * z.x, lambda * z.v);
}

double hnorm(const Point& z, const Anisotropy& a) {
  const double th = a.theta();
  return std::pow(std::abs(z.t), 1.0 / th) + std::pow(z.x.norm(), 1.0 / (th + 1.0)) + z.v.norm();
}

double qdist(const Point& z1, const Point& z2, const Anisotropy& a) {
  return hnorm(compose(inverse(z2), z1, a), a);
}

double minmax_dist(const Point& z1, const Point& z2, const Anisotropy& a) {
  require_same_dim(z1, z2);
  require_dim(z1, a);
  const double th = a.theta();
  const double dt = z1.t - z2.t;
  const Vec dx = z1.x - z2.x;
  const double t_term = std::pow(std::abs(dt), 1.0 / th);

  auto objective = [&](const Vec& w) {
    const double xr = std::pow((dx - w * dt).norm(), 1.0 / (1.0 + th));
    return std::max({t_term, xr, (z1.v - w).norm(), (z2.v - w).norm()});
  };

  const int d = a.d();
  if (d == 1) {
    double lo = std::min(z1.v(0), z2.v(0));
    double hi = std::max(z1.v(0), z2.v(0));
    if (dt != 0.0) {
      const double slope = dx(0) / dt;
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
    }
    Vec w(1);
    auto f1 = [&](double s) {
      w(0) = s;
      return objective(w);
    };
    return golden_min(f1, lo - 1.0, hi + 1.0, 1e-15);
  }

  // Quasi-convex in w: Nelder-Mead from the velocity midpoint, then
  // coordinate-wise golden polishing.
  Vec w = 0.5 * (z1.v + z2.v);
  const double scale = std::max(1e-3, 0.5 * (z1.v - z2.v).norm() + 0.1);
  w = nelder_mead(objective, w, scale, 4000);
  w = nelder_mead(objective, w, scale * 1e-3, 4000);
  double best = objective(w);
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int i = 0; i < d; ++i) {
      Vec trial = w;
      double arg_best = w(i);
      auto fi = [&](double s) {
        trial(i) = s;
        const double val = objective(trial);
        if (val < best) {
          best = val;
          arg_best = s;
        }
        return val;
      };
      const double span = std::max(1.0, std::abs(w(i)));
      golden_min(fi, w(i) - span, w(i) + span, 1e-15);
      w(i) = arg_best;
    }
  }
  return best;
}

KappaEstimate estimate_kappa(std::span<const PointTriple> samples, const Anisotropy& a) {
  if (samples.empty()) {
    throw Error(ErrorCode::EmptyInput, "estimate_kappa needs at least one triple");
  }
  KappaEstimate out;
  for (const auto& s : samples) {
    const double d13 = qdist(s.z1, s.z3, a);
    const double denom = qdist(s.z1, s.z2, a) + qdist(s.z2, s.z3, a);
    if (denom < 1e-14) {
      ++out.skipped;
      continue;
    }
    ++out.used;
    out.kappa = std::max(out.kappa, d13 / denom);
  }
  return out;
}

}  // namespace kh
