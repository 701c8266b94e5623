#include "kh/holder.hpp"

#include "kh/error.hpp"
#include "kh/flows.hpp"
#include "kh/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace kh {

namespace {

double halton(std::size_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr std::array<int, 9> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23};

bool le_tol(double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

SampleGrid SampleGrid::halton_ball(const Anisotropy& a, int n_points, int n_taus, double tau_lo,
                                   double tau_hi) {
  if (n_points <= 0 || n_taus <= 0 || !(tau_lo > 0.0) || !(tau_hi >= tau_lo)) {
    throw Error(ErrorCode::InvalidArgument, "invalid grid specification");
  }
  const int d = a.d();
  SampleGrid g;
  for (std::size_t idx = 1; static_cast<int>(g.points.size()) < n_points; ++idx) {
    Point p = Point::identity(d);
    p.t = 2.0 * halton(idx, kPrimes[0]) - 1.0;
    for (int i = 0; i < d; ++i) {
      p.x(i) = 2.0 * halton(idx, kPrimes[1 + i]) - 1.0;
      p.v(i) = 2.0 * halton(idx, kPrimes[1 + d + i]) - 1.0;
    }
    if (hnorm(p, a) <= 1.0) g.points.push_back(p);
  }
  for (int k = 0; k < n_taus; ++k) {
    const double s = n_taus == 1 ? 0.0 : static_cast<double>(k) / (n_taus - 1);
    const double tau = tau_lo * std::pow(tau_hi / tau_lo, s);
    g.taus.push_back(tau);
    g.taus.push_back(-tau);
  }
  return g;
}

double SampleGrid::min_abs_tau() const {
  double m = std::numeric_limits<double>::infinity();
  for (double t : taus) m = std::min(m, std::abs(t));
  return m;
}

void SampleGrid::validate() const {
  if (points.empty() || taus.empty()) throw Error(ErrorCode::EmptyInput, "empty sample grid");
  for (double t : taus)
    if (t == 0.0 || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "grid taus must be nonzero");
}

BoxDomain::BoxDomain(Point lo, Point hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.dim() != upper.dim()) throw Error(ErrorCode::DimensionMismatch, "box bounds differ in dimension");
  bool ok = lower.t < upper.t;
  for (int i = 0; i < lower.dim(); ++i) ok = ok && lower.x(i) < upper.x(i) && lower.v(i) < upper.v(i);
  if (!ok) throw Error(ErrorCode::InvalidArgument, "box needs lower < upper componentwise");
}

bool BoxDomain::contains(const Point& z) const {
  if (z.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "point and box dimension differ");
  bool in = lower.t < z.t && z.t < upper.t;
  for (int i = 0; i < dim(); ++i) {
    in = in && lower.x(i) < z.x(i) && z.x(i) < upper.x(i);
    in = in && lower.v(i) < z.v(i) && z.v(i) < upper.v(i);
  }
  return in;
}

bool BoxDomain::contains_closure(const Point& z) const {
  if (z.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "point and box dimension differ");
  bool in = lower.t <= z.t && z.t <= upper.t;
  for (int i = 0; i < dim(); ++i) {
    in = in && lower.x(i) <= z.x(i) && z.x(i) <= upper.x(i);
    in = in && lower.v(i) <= z.v(i) && z.v(i) <= upper.v(i);
  }
  return in;
}

namespace {

std::vector<double> active_taus(const SampleGrid& grid, const HolderOptions& opt) {
  std::vector<double> taus;
  for (double t : grid.taus)
    if (std::abs(t) < opt.tau_limit) taus.push_back(t);
  return taus;
}

template <class Flow>
double leaf_seminorm(const FunctionHandle& u, double exponent, const SampleGrid& grid,
                     const HolderOptions& opt, Flow&& flow_of) {
  grid.validate();
  const std::vector<double> taus = active_taus(grid, opt);
  if (taus.empty()) return 0.0;
  const std::size_t nt = taus.size();
  return parallel_max(grid.points.size() * nt, [&](std::size_t k) {
    const Point& z = grid.points[k / nt];
    const double tau = taus[k % nt];
    const double diff = std::abs(u(flow_of(tau, z)) - u(z));
    if (!std::isfinite(diff)) throw Error(ErrorCode::NonFinite, "non-finite seminorm increment", z.str());
    return diff / std::pow(std::abs(tau), exponent);
  });
}

}  // namespace

double seminorm_Z(const FunctionHandle& u, int i, double alpha, const SampleGrid& grid,
                  const HolderOptions& opt) {
  if (!(alpha > 0.0) || !le_tol(alpha, 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Z seminorm needs 0 < alpha <= 1", fmt(alpha));
  }
  alpha = std::min(alpha, 1.0);
  return leaf_seminorm(u, alpha, grid, opt, [i](double tau, const Point& z) {
    Point p = z;
    p.v(i) += tau;
    return p;
  });
}

double seminorm_Y(const FunctionHandle& u, double alpha, const SampleGrid& grid,
                  const Anisotropy& a, const HolderOptions& opt) {
  if (!(alpha > 0.0) || !le_tol(alpha, a.theta())) {
    throw Error(ErrorCode::InvalidArgument, "Y seminorm needs 0 < alpha <= theta", fmt(alpha));
  }
  alpha = std::min(alpha, a.theta());
  const auto drift = opt.drift;
  return leaf_seminorm(u, alpha / a.theta(), grid, opt, [drift](double tau, const Point& z) {
    return drift ? exp_y_nh(tau, z, *drift) : exp_y(tau, z);
  });
}

namespace {

struct Recursion {
  const SampleGrid& grid;
  const Anisotropy& a;
  const HolderOptions& opt;
  double fd_step;
  std::vector<std::string>& path;

  // Derivative handle plus the number of finite-difference levels it consumed.
  std::pair<FunctionHandle, int> derive(const FunctionHandle& u, int fd_used,
                                        const LieDirection& dir) const {
    if (u.has_derive()) return {u.derive(dir), fd_used};
    if (fd_used >= opt.max_fd_depth) {
      throw Error(ErrorCode::MissingDerivative, "required derivative unavailable",
                  dir.str() + "(" + u.label + ")");
    }
    return {finite_difference_derivative(u, dir, fd_step, 1), fd_used + 1};
  }

  LieDirection y_dir() const { return opt.drift ? LieDirection::y(opt.drift) : LieDirection::y(); }

  double sum_z(const FunctionHandle& u, double alpha) const {
    double s = 0.0;
    for (int i = 0; i < a.d(); ++i) s += seminorm_Z(u, i, alpha, grid, opt);
    return s;
  }

  double run(const FunctionHandle& u, double alpha, int fd_used, const std::string& name) {
    const double th = a.theta();
    const double lo = std::min(1.0, th), hi = std::max(1.0, th);
    const std::string tag = name + "@" + fmt(alpha);
    if (le_tol(alpha, lo)) {
      path.push_back("i:" + tag);
      return seminorm_Y(u, alpha, grid, a, opt) + sum_z(u, alpha);
    }
    if (th != 1.0 && le_tol(alpha, hi)) {
      if (th < 1.0) {
        path.push_back("ii(theta<1):" + tag);
        auto [yu, used] = derive(u, fd_used, y_dir());
        return run(yu, alpha - th, used, "Y" + name) + sum_z(u, alpha);
      }
      path.push_back("ii(theta>1):" + tag);
      double s = seminorm_Y(u, alpha, grid, a, opt);
      for (int i = 0; i < a.d(); ++i) {
        auto [zu, used] = derive(u, fd_used, LieDirection::z(i));
        s += run(zu, alpha - 1.0, used, "Z" + std::to_string(i + 1) + name);
      }
      return s;
    }
    path.push_back("iii:" + tag);
    auto [yu, used_y] = derive(u, fd_used, y_dir());
    double s = run(yu, alpha - th, used_y, "Y" + name);
    for (int i = 0; i < a.d(); ++i) {
      auto [zu, used] = derive(u, fd_used, LieDirection::z(i));
      s += run(zu, alpha - 1.0, used, "Z" + std::to_string(i + 1) + name);
    }
    return s;
  }
};

}  // namespace

HolderReport seminorm_C_alpha(const FunctionHandle& u, double alpha, const SampleGrid& grid,
                              const Anisotropy& a, const HolderOptions& opt) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive", fmt(alpha));
  }
  grid.validate();
  HolderReport rep;
  rep.alpha = alpha;
  rep.theta = a.theta();
  rep.grid_points = grid.points.size();
  rep.grid_taus = active_taus(grid, opt).size();
  Recursion rec{grid, a, opt, grid.min_abs_tau() / 10.0, rep.case_path};
  rep.value = rec.run(u, alpha, 0, "u");
  return rep;
}

namespace {

double dist_to_bounds(double c, double lo, double hi) { return std::min(c - lo, hi - c); }

double delta_nh(const Point& z, const BoxDomain& omega, const DriftMatrix& b) {
  auto inside = [&](double s) { return omega.contains(exp_y_nh(s, z, b)); };
  double best = 1.0;
  for (double sign : {1.0, -1.0}) {
    const double step = 1e-3;
    double good = 0.0;
    double bad = -1.0;
    for (int k = 1; k <= 1000; ++k) {
      const double s = std::min(1.0, k * step);
      if (!inside(sign * s)) {
        bad = s;
        break;
      }
      good = s;
    }
    if (bad < 0.0) continue;
    while (bad - good > 1e-10) {
      const double mid = 0.5 * (good + bad);
      if (inside(sign * mid)) good = mid;
      else bad = mid;
    }
    best = std::min(best, good);
  }
  return best;
}

}  // namespace

double delta_z(const Point& z, const BoxDomain& omega, const Anisotropy& a,
               const std::shared_ptr<const DriftMatrix>& drift) {
  if (z.dim() != a.d()) throw Error(ErrorCode::DimensionMismatch, "point and anisotropy differ");
  if (!omega.contains(z)) throw Error(ErrorCode::OutOfDomain, "delta_z needs z inside the domain", z.str());
  double delta = 1.0;
  for (int i = 0; i < z.dim(); ++i)
    delta = std::min(delta, dist_to_bounds(z.v(i), omega.lower.v(i), omega.upper.v(i)));
  if (drift) return std::min(delta, delta_nh(z, omega, *drift));
  delta = std::min(delta, dist_to_bounds(z.t, omega.lower.t, omega.upper.t));
  for (int j = 0; j < z.dim(); ++j) {
    if (z.v(j) == 0.0) continue;
    delta = std::min(delta, dist_to_bounds(z.x(j), omega.lower.x(j), omega.upper.x(j)) /
                                std::abs(z.v(j)));
  }
  return delta;
}

double delta_omega0(const BoxDomain& omega0, const BoxDomain& omega, const Anisotropy& a,
                    const std::shared_ptr<const DriftMatrix>& drift, int n_per_axis) {
  if (n_per_axis < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples per axis");
  const int d = a.d();
  const int nv = 1 + 2 * d;
  // Cosine spacing clusters nodes near the faces, endpoints included.
  std::vector<double> nodes(n_per_axis);
  for (int k = 0; k < n_per_axis; ++k)
    nodes[k] = 0.5 * (1.0 - std::cos(M_PI * k / (n_per_axis - 1)));
  auto lerp = [&](double lo, double hi, int k) { return lo + (hi - lo) * nodes[k]; };

  std::size_t total = 1;
  for (int i = 0; i < nv; ++i) total *= n_per_axis;
  double best = 1.0;
  std::vector<int> idx(nv, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (int i = 0; i < nv; ++i) {
      idx[i] = static_cast<int>(rem % n_per_axis);
      rem /= n_per_axis;
    }
    Point p = Point::identity(d);
    p.t = lerp(omega0.lower.t, omega0.upper.t, idx[0]);
    for (int i = 0; i < d; ++i) {
      p.x(i) = lerp(omega0.lower.x(i), omega0.upper.x(i), idx[1 + i]);
      p.v(i) = lerp(omega0.lower.v(i), omega0.upper.v(i), idx[1 + d + i]);
    }
    best = std::min(best, delta_z(p, omega, a, drift));
  }
  return best;
}

HolderReport seminorm_local(const FunctionHandle& u, double alpha, const BoxDomain& omega0,
                            const BoxDomain& omega, const SampleGrid& grid, const Anisotropy& a,
                            HolderOptions opt) {
  const double delta = delta_omega0(omega0, omega, a, opt.drift);
  SampleGrid local;
  for (const auto& p : grid.points)
    if (omega0.contains_closure(p)) local.points.push_back(p);
  if (local.points.empty()) throw Error(ErrorCode::EmptyInput, "no grid points inside the subdomain");
  local.taus = grid.taus;
  opt.tau_limit = std::min(opt.tau_limit, delta);
  if (active_taus(local, opt).empty()) {
    throw Error(ErrorCode::EmptyInput, "no grid tau below delta", fmt(delta));
  }
  return seminorm_C_alpha(u, alpha, local, a, opt);
}

}  // namespace kh
