#include "kh/steering.hpp"

#include "kh/error.hpp"
#include "kh/flows.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace kh {

namespace {

void require_unit(const Vec& w) {
  if (std::abs(w.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "steering direction must have unit length",
                std::to_string(w.norm()));
  }
}

void require_dim(const Point& z, const DriftMatrix& b) {
  if (z.dim() != b.d()) throw Error(ErrorCode::DimensionMismatch, "point and drift dimension differ");
}

double sigma_of(double tau, const Anisotropy& a) { return std::pow(std::abs(tau), a.theta()); }

Point make_target(const Point& z, const Vec& h) { return Point(z.t, z.x + h, z.v); }

void finish(PathReport& r, Point target) {
  r.endpoint = r.waypoints.back();
  r.target = std::move(target);
  r.endpoint_error = max_abs_diff(r.endpoint, r.target);
}

Vec to_vec(const Eigen::VectorXd& e) {
  Vec v(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) v(i) = e(i);
  return v;
}

double sup_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

PathReport commutator_path(const Point& z, const Vec& w, double tau, const Anisotropy& a) {
  if (w.size() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "w must have dimension d");
  require_unit(w);
  const double sigma = sigma_of(tau, a);
  PathReport r;
  r.waypoints.push_back(z);
  r.waypoints.push_back(exp_z(tau, w, r.waypoints.back()));
  r.waypoints.push_back(exp_y(sigma, r.waypoints.back()));
  r.waypoints.push_back(exp_z(-tau, w, r.waypoints.back()));
  r.waypoints.push_back(exp_y(-sigma, r.waypoints.back()));
  finish(r, make_target(z, (tau * sigma) * w));
  return r;
}

PathReport steer_x(const Point& z, const Vec& h, const Anisotropy& a) {
  if (h.size() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "h must have dimension d");
  const double n = h.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "steer_x needs a nonzero displacement");
  const double tau = std::pow(n, 1.0 / (a.theta() + 1.0));
  PathReport r = commutator_path(z, h / n, tau, a);
  finish(r, make_target(z, h));
  return r;
}

Point compose_nh(const Point& z1, const Point& z2, const DriftMatrix& b) {
  require_dim(z1, b);
  require_dim(z2, b);
  Vec x = z1.x, v = z1.v;
  b.apply_flow(z2.t, x, v);
  return Point(z1.t + z2.t, z2.x + x, z2.v + v);
}

Point inverse_nh(const Point& z, const DriftMatrix& b) {
  require_dim(z, b);
  Vec x = z.x, v = z.v;
  b.apply_flow(-z.t, x, v);
  return Point(-z.t, -x, -v);
}

double qdist_nh(const Point& z1, const Point& z2, const DriftMatrix& b, const Anisotropy& a) {
  return hnorm(compose_nh(inverse_nh(z2, b), z1, b), a);
}

Eigen::MatrixXd correction_series(double sigma, const DriftMatrix& b) {
  if (std::abs(sigma) * b.block_norm(2, 2) >= 1.0) {
    throw Error(ErrorCode::NotConverged, "correction series needs tau^theta ||B22|| < 1",
                std::to_string(std::abs(sigma) * b.block_norm(2, 2)));
  }
  const Eigen::MatrixXd& m = b.matrix();
  // term_n = (-sigma)^n B^{n+2} / (n+2)!
  Eigen::MatrixXd term = m * m / 2.0;
  Eigen::MatrixXd sum = term;
  for (int n = 1; n < 60; ++n) {
    term = term * m * (-sigma / (n + 2.0));
    sum += term;
    if (term.norm() < 1e-16) break;
  }
  return sum;
}

Vec velocity_correction(const Vec& w, double tau, const DriftMatrix& b, const Anisotropy& a) {
  const int d = b.d();
  const Eigen::MatrixXd s = correction_series(sigma_of(tau, a), b);
  return to_vec(s.block(d, d, d, d) * Eigen::VectorXd(w));
}

PathReport g_path(const Point& z, const Vec& w, double tau, const DriftMatrix& b,
                  const Anisotropy& a) {
  require_dim(z, b);
  if (w.size() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "w must have dimension d");
  require_unit(w);
  const double sigma = sigma_of(tau, a);
  const Vec b22w = to_vec(b.block(2, 2) * Eigen::VectorXd(w));
  const Vec wp = velocity_correction(w, tau, b, a);

  PathReport r;
  r.waypoints.push_back(z);
  r.waypoints.push_back(exp_z(tau, w, r.waypoints.back()));
  r.waypoints.push_back(exp_y_nh(sigma, r.waypoints.back(), b));
  r.waypoints.push_back(exp_z(-tau, w, r.waypoints.back()));
  r.waypoints.push_back(exp_y_nh(-sigma, r.waypoints.back(), b));
  r.waypoints.push_back(exp_z(-tau * sigma, b22w, r.waypoints.back()));
  r.waypoints.push_back(exp_z(tau * sigma * sigma, wp, r.waypoints.back()));
  const Vec lead = to_vec(b.block(1, 2) * Eigen::VectorXd(w));
  finish(r, make_target(z, (tau * sigma) * lead));
  return r;
}

Point g_correction(const Point& z, const Vec& w, double tau, const DriftMatrix& b,
                   const Anisotropy& a) {
  return g_path(z, w, tau, b, a).endpoint;
}

namespace {

// B12 p - achieved displacement, for the closed-form path: sigma S12(sigma) p.
Eigen::VectorXd correction_term(const Eigen::VectorXd& p, const DriftMatrix& b,
                                const Anisotropy& a) {
  const double n = p.norm();
  if (n == 0.0) return Eigen::VectorXd::Zero(p.size());
  const int d = b.d();
  const double sigma = std::pow(n, a.theta() / (a.theta() + 1.0));
  return sigma * correction_series(sigma, b).block(0, d, d, d) * p;
}

}  // namespace

double connect_radius(const DriftMatrix& b, const Anisotropy& a) {
  const int d = b.d();
  const double bn = b.norm();
  double r = 1.0;
  if (bn > 0.0) r = std::min(r, std::pow(2.0 * bn, -(a.theta() + 1.0)));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.block(1, 2));
  const double smin = svd.singularValues()(d - 1);
  const Eigen::MatrixXd b12inv = b.block(1, 2).inverse();

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto sample = [&](double rho) {
    Eigen::VectorXd p(d);
    for (int i = 0; i < d; ++i) p(i) = gauss(rng);
    return Eigen::VectorXd(p.normalized() * rho * std::pow(unif(rng), 1.0 / d));
  };
  for (int halving = 0; halving < 60; ++halving, r *= 0.5) {
    const double rho = 2.0 * r / smin;
    double lip = 0.0;
    try {
      for (int k = 0; k < 32; ++k) {
        const Eigen::VectorXd p1 = sample(rho), p2 = sample(rho);
        const double dp = (p1 - p2).norm();
        if (dp == 0.0) continue;
        const Eigen::VectorXd t1 = b12inv * correction_term(p1, b, a);
        const Eigen::VectorXd t2 = b12inv * correction_term(p2, b, a);
        lip = std::max(lip, (t1 - t2).norm() / dp);
      }
    } catch (const Error&) {
      continue;
    }
    if (lip <= 0.5) return r;
  }
  throw Error(ErrorCode::NotConverged, "no contractive radius found for this drift");
}

ConnectResult connect(const Point& z, const Vec& h, const DriftMatrix& b, const Anisotropy& a) {
  require_dim(z, b);
  if (h.size() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "h must have dimension d");
  const int d = b.d();
  ConnectResult out;
  out.epsilon = connect_radius(b, a);
  const double hn = h.norm();
  out.tau_bound = 2.0 / b.block_norm(1, 2) * std::pow(hn, 1.0 / (a.theta() + 1.0));
  if (hn > out.epsilon) {
    throw Error(ErrorCode::OutOfDomain, "target displacement exceeds connect radius",
                "epsilon=" + std::to_string(out.epsilon));
  }
  if (hn == 0.0) {
    out.w = Vec::Unit(d, 0);
    out.tau = 0.0;
    out.method = "trivial";
    out.report = g_path(z, out.w, 0.0, b, a);
    return out;
  }

  const Eigen::MatrixXd b12 = b.block(1, 2);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b12);
  const Eigen::VectorXd he = Eigen::VectorXd(h);
  const Point target = make_target(z, h);

  auto wt = [&](const Eigen::VectorXd& p, Vec& w, double& tau) {
    const double n = p.norm();
    w = to_vec(p / n);
    tau = std::pow(n, 1.0 / (a.theta() + 1.0));
  };
  // Achieved x-displacement minus h; velocity mismatch folded into the residual.
  auto residual = [&](const Eigen::VectorXd& p, double& sup) {
    Vec w;
    double tau;
    wt(p, w, tau);
    const Point g = g_correction(z, w, tau, b, a);
    sup = std::max(max_abs_diff(g, target), 0.0);
    return Eigen::VectorXd((g.x - z.x) - h);
  };

  const double tol = 1e-15 * std::max(1.0, std::max(sup_norm(z.x), sup_norm(z.v))) + 1e-18;
  Eigen::VectorXd p = lu.solve(he);
  double sup = 0.0;
  Eigen::VectorXd f = residual(p, sup);
  double best = sup;
  int stall = 0;
  out.method = "fixed-point";
  int it = 0;
  for (; it < 200 && sup > tol; ++it) {
    p = p - lu.solve(f);
    f = residual(p, sup);
    if (sup < 0.5 * best) {
      best = sup;
      stall = 0;
    } else if (++stall >= 10) {
      break;
    }
    best = std::min(best, sup);
  }
  if (sup > 1e-11) {
    // Newton with a forward-difference Jacobian on the d-dimensional residual.
    out.method = "newton";
    for (int k = 0; k < 50 && sup > tol; ++k, ++it) {
      Eigen::MatrixXd jac(d, d);
      const double step = 1e-7 * std::max(p.norm(), 1e-12);
      for (int j = 0; j < d; ++j) {
        Eigen::VectorXd q = p;
        q(j) += step;
        double unused;
        jac.col(j) = (residual(q, unused) - f) / step;
      }
      p = p - jac.partialPivLu().solve(f);
      f = residual(p, sup);
    }
  }
  out.iterations = it;
  out.residual = sup;
  if (sup > 1e-11) {
    throw Error(ErrorCode::NotConverged, "connect solver did not converge",
                "residual=" + std::to_string(sup));
  }
  wt(p, out.w, out.tau);
  out.report = g_path(z, out.w, out.tau, b, a);
  out.report.target = target;
  out.report.endpoint_error = max_abs_diff(out.report.endpoint, target);
  return out;
}

}  // namespace kh
