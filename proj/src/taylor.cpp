#include "kh/taylor.hpp"

#include "kh/error.hpp"
#include "kh/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace kh {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

double multi_product(const Point& inc, const TermIndex& ti) {
  double p = ipow(inc.t, ti.k);
  for (int i = 0; i < inc.dim(); ++i) p *= ipow(inc.x(i), ti.gamma[i]) * ipow(inc.v(i), ti.beta[i]);
  return p;
}

TaylorPolynomial TaylorPolynomial::build(const FunctionHandle& u, double alpha, const Point& z0,
                                         const Anisotropy& a) {
  if (!u.has_oracle()) {
    throw Error(ErrorCode::MissingDerivative, "Taylor polynomial needs an exact derivative oracle",
                u.label);
  }
  TaylorPolynomial p(z0, a, alpha);
  for (auto& ti : enumerate_terms(a, alpha)) {
    double deriv = 0.0;
    try {
      deriv = u.oracle(ti, z0);
    } catch (const Error& e) {
      throw Error(ErrorCode::MissingDerivative, "oracle failed for term " + ti.str(), e.what());
    }
    if (!std::isfinite(deriv)) {
      throw Error(ErrorCode::MissingDerivative, "oracle returned non-finite value", ti.str());
    }
    const double c = deriv / ti.factorial_coefficient();
    p.coeffs_.push_back({std::move(ti), c});
  }
  return p;
}

TaylorPolynomial TaylorPolynomial::build_nh(const FunctionHandle& u, double alpha, const Point& z0,
                                            const Anisotropy& a,
                                            std::shared_ptr<const DriftMatrix> b) {
  if (!u.has_derive()) {
    throw Error(ErrorCode::MissingDerivative, "non-homogeneous Taylor polynomial needs derive()",
                u.label);
  }
  TaylorPolynomial p(z0, a, alpha);
  p.drift_ = b;
  for (auto& ti : enumerate_terms(a, alpha)) {
    FunctionHandle h = u;
    for (int i = 0; i < a.d(); ++i)
      for (int n = 0; n < ti.gamma[i]; ++n) h = h.derive(LieDirection::x(i));
    for (int i = 0; i < a.d(); ++i)
      for (int n = 0; n < ti.beta[i]; ++n) h = h.derive(LieDirection::z(i));
    for (int n = 0; n < ti.k; ++n) {
      if (!h.has_derive()) throw Error(ErrorCode::MissingDerivative, "derive chain ended", ti.str());
      h = h.derive(LieDirection::y(b));
    }
    const double c = h(z0) / ti.factorial_coefficient();
    p.coeffs_.push_back({std::move(ti), c});
  }
  return p;
}

double TaylorPolynomial::operator()(const Point& z) const {
  const Point inc = drift_ ? compose_nh(inverse_nh(z0_, *drift_), z, *drift_)
                           : compose(inverse(z0_), z, a_);
  double total = 0.0;
  for (const auto& c : coeffs_) total += c.value * multi_product(inc, c.term);
  return total;
}

double taylor_eval(const FunctionHandle& u, double alpha, const Point& z0, const Point& z,
                   const Anisotropy& a) {
  return TaylorPolynomial::build(u, alpha, z0, a)(z);
}

double remainder(const FunctionHandle& u, double alpha, const Point& z0, const Point& z,
                 const Anisotropy& a) {
  return std::abs(u(z) - taylor_eval(u, alpha, z0, z, a));
}

std::string to_string(SlopeRecord::Status s) {
  switch (s) {
    case SlopeRecord::Status::Fitted: return "fitted";
    case SlopeRecord::Status::PolynomialExact: return "polynomial-exact";
    case SlopeRecord::Status::InsufficientPoints: return "insufficient-points";
  }
  return "?";
}

double SlopeReport::min_slope() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records)
    if (r.status == SlopeRecord::Status::Fitted) m = std::min(m, r.slope);
  return m;
}

double SlopeReport::min_r2() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records)
    if (r.status == SlopeRecord::Status::Fitted) m = std::min(m, r.r2);
  return m;
}

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "least squares needs >= 2 paired samples");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate abscissae in least squares");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::vector<double> geometric_grid(double hi, double lo, int n) {
  if (!(hi > lo) || !(lo > 0.0) || n < 2) {
    throw Error(ErrorCode::InvalidArgument, "geometric grid needs hi > lo > 0 and n >= 2");
  }
  std::vector<double> g(n);
  const double step = std::log(lo / hi) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = hi * std::exp(step * i);
  g.back() = lo;
  return g;
}

std::vector<Point> default_directions(const Anisotropy& a, int n_random, unsigned seed) {
  const int d = a.d();
  std::vector<Point> dirs;
  Point e = Point::identity(d);
  e.t = 1.0;
  dirs.push_back(e);
  e = Point::identity(d);
  e.x(0) = 1.0;
  dirs.push_back(e);
  e = Point::identity(d);
  e.v(0) = 1.0;
  dirs.push_back(e);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  while (static_cast<int>(dirs.size()) < 3 + n_random) {
    Point p = Point::identity(d);
    p.t = unif(rng);
    for (int i = 0; i < d; ++i) {
      p.x(i) = unif(rng);
      p.v(i) = unif(rng);
    }
    const double n = hnorm(p, a);
    if (n < 1e-3) continue;
    dirs.push_back(dilate(1.0 / n, p, a));
  }
  return dirs;
}

SlopeReport scaling_slope(const FunctionHandle& u, double alpha, const Point& z0,
                          const Anisotropy& a, const std::vector<Point>& directions,
                          const std::vector<double>& lambdas) {
  if (lambdas.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two scales");
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] < lambdas[i - 1]) || !(lambdas[i] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "scales must be positive and strictly decreasing");
    }
  }
  if (lambdas.front() / lambdas.back() < 100.0 * (1.0 - 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "scales must span at least two decades");
  }
  if (directions.empty()) throw Error(ErrorCode::EmptyInput, "no probe directions");

  const TaylorPolynomial poly = TaylorPolynomial::build(u, alpha, z0, a);
  SlopeReport report;
  report.alpha = alpha;
  report.theta = a.theta();
  bool all_exact = true;
  for (const auto& w : directions) {
    SlopeRecord rec;
    rec.direction = w;
    std::vector<double> lx, ly;
    bool direction_exact = true;
    for (double lam : lambdas) {
      const Point z = compose(z0, dilate(lam, w, a), a);
      const double uz = u(z), pz = poly(z);
      const double r = std::abs(uz - pz);
      const double dist = qdist(z, z0, a);
      // Below this the difference is cancellation noise.
      const double floor = kRoundoffFactor * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(uz), std::abs(pz));
      if (r >= 1e-14) direction_exact = false;
      if (r > floor && r > 0.0 && dist > 0.0) {
        lx.push_back(std::log(dist));
        ly.push_back(std::log(r));
      }
    }
    rec.n_points = static_cast<int>(lx.size());
    if (direction_exact) {
      rec.status = SlopeRecord::Status::PolynomialExact;
    } else if (rec.n_points < 6) {
      rec.status = SlopeRecord::Status::InsufficientPoints;
      all_exact = false;
    } else {
      const LinearFit fit = least_squares(lx, ly);
      rec.slope = fit.slope;
      rec.intercept = fit.intercept;
      rec.r2 = fit.r2;
      all_exact = false;
    }
    report.records.push_back(std::move(rec));
  }
  report.polynomial_exact = all_exact;
  return report;
}

}  // namespace kh
