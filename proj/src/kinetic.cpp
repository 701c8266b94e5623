#include "kh/kinetic.hpp"

#include "kh/error.hpp"
#include "kh/flows.hpp"
#include "kh/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace kh {

void QuadratureSpec::validate() const {
  if (!(core_radius > 0.0 && core_radius < near_radius && near_radius < far_radius)) {
    throw Error(ErrorCode::InvalidArgument, "quadrature needs 0 < core < near < far radius");
  }
  if (!(max_panel_width > 0.0) || n_radial < 1 || n_angular < 1) {
    throw Error(ErrorCode::InvalidArgument, "quadrature resolution must be positive");
  }
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec q = *this;
  q.n_radial *= 2;
  q.n_angular *= 2;
  q.max_panel_width *= 0.5;
  return q;
}

KernelSpec KernelSpec::prototype(double s, double C) {
  KernelSpec k;
  k.kind = Kind::Prototype;
  k.s = s;
  k.C = C;
  k.validate();
  return k;
}

KernelSpec KernelSpec::general(double s, KernelFn K, double c_minus, double c_plus, bool symmetric) {
  KernelSpec k;
  k.kind = Kind::General;
  k.s = s;
  k.K = std::move(K);
  k.c_minus = c_minus;
  k.c_plus = c_plus;
  k.symmetric = symmetric;
  k.validate();
  return k;
}

KernelSpec KernelSpec::p_laplacian(double s, double p, double C) {
  KernelSpec k;
  k.kind = Kind::PLaplacian;
  k.s = s;
  k.p = p;
  k.C = C;
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidArgument, "kernel order s must lie in ]0,1[");
  if (kind == Kind::General) {
    if (!K) throw Error(ErrorCode::InvalidArgument, "general kernel needs K");
    if (!(c_minus > 0.0 && c_minus <= c_plus)) {
      throw Error(ErrorCode::InvalidArgument, "general kernel needs 0 < c_minus <= c_plus");
    }
  } else if (!(C > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "kernel constant must be positive");
  }
  if (kind == Kind::PLaplacian && !(p > 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "p-Laplacian needs p > 1");
  }
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Engine {
  const FunctionHandle& u;
  const Point& z;
  double kappa;  // radial singularity: integrand ~ A(rho) rho^{-1-kappa}
  std::function<double(double)> phi;
  // Kernel factor K(z, v') |v' - v|^{d + kappa}; null means 1.
  std::function<double(const Vec&, double)> kfac;
  double core_order;  // NaN: estimate from two samples
  const QuadratureSpec& quad;

  HemisphereRule rule;
  double u0 = 0.0;
  double scale = 0.0;

  double A(double rho) {
    double sum = 0.0;
    Point p = z;
    for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
      const Vec& th = rule.dirs[i];
      double pair = 0.0;
      for (double sign : {1.0, -1.0}) {
        p.v = z.v + (sign * rho) * th;
        const double up = u(p);
        if (!std::isfinite(up)) throw Error(ErrorCode::NonFinite, "non-finite integrand", p.str());
        scale = std::max(scale, std::abs(up));
        double term = phi(u0 - up);
        if (kfac) term *= kfac(p.v, rho);
        pair += term;
      }
      sum += rule.weights[i] * pair;
    }
    return sum;
  }

  double run() {
    quad.validate();
    rule = hemisphere_rule(z.dim(), quad.n_angular);
    u0 = u(z);
    if (!std::isfinite(u0)) throw Error(ErrorCode::NonFinite, "non-finite value at evaluation point", z.str());
    scale = std::abs(u0);
    const double eps = quad.core_radius;
    const double far = quad.far_radius;

    // Core [0, eps]: A(rho) ~ c rho^m.
    double core = 0.0;
    const double a_eps = A(eps);
    if (a_eps != 0.0) {
      double m = core_order;
      if (std::isnan(m)) {
        const double a_half = A(0.5 * eps);
        m = (a_half != 0.0 && (a_half > 0.0) == (a_eps > 0.0)) ? std::log2(a_eps / a_half) : 0.0;
      }
      if (m > kappa) core = a_eps * std::pow(eps, -kappa) / (m - kappa);
    }

    const std::vector<Panel> panels =
        radial_panels(eps, quad.near_radius, far, quad.max_panel_width, {far / 4.0, far / 2.0});
    const Rule1D gl = gauss_legendre(quad.n_radial);
    double body = 0.0, ring_in = 0.0, ring_out = 0.0;
    for (const Panel& pn : panels) {
      const double half = 0.5 * (pn.b - pn.a), mid = 0.5 * (pn.a + pn.b);
      double acc = 0.0;
      for (int k = 0; k < quad.n_radial; ++k) {
        const double rho = mid + half * gl.nodes[k];
        acc += gl.weights[k] * A(rho) * std::pow(rho, -1.0 - kappa);
      }
      acc *= half;
      body += acc;
      if (pn.a >= far / 4.0 * (1 - 1e-12) && pn.b <= far / 2.0 * (1 + 1e-12)) ring_in += acc;
      if (pn.a >= far / 2.0 * (1 - 1e-12)) ring_out += acc;
    }

    // Ring means of A with respect to rho^{-1-kappa}.
    const double shell = (1.0 - std::pow(2.0, -kappa)) / kappa;
    const double mean_in = ring_in / (std::pow(far / 4.0, -kappa) * shell);
    const double mean_out = ring_out / (std::pow(far / 2.0, -kappa) * shell);
    double total_weight = 0.0;
    for (double w : rule.weights) total_weight += 2.0 * w;
    const bool significant = std::abs(mean_out) > 1e-6 * std::max(scale, 1e-300) * total_weight;
    if (significant && std::abs(mean_out) >= 0.95 * std::pow(2.0, kappa) * std::abs(mean_in)) {
      throw Error(ErrorCode::NonIntegrable, "integrand does not decay over the far ring",
                  "inner_mean=" + fmt(mean_in) + " outer_mean=" + fmt(mean_out));
    }
    const double tail = quad.analytic_tail ? mean_out * std::pow(far, -kappa) / kappa : 0.0;
    return core + body + tail;
  }
};

double linear_phi(double r) { return r; }

}  // namespace

double frac_laplacian(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                      const QuadratureSpec& quad) {
  spec.validate();
  if (spec.kind != KernelSpec::Kind::Prototype) {
    throw Error(ErrorCode::InvalidArgument, "frac_laplacian needs a prototype kernel");
  }
  Engine e{u, z, 2.0 * spec.s, linear_phi, nullptr, 2.0, quad, {}};
  return spec.C * e.run();
}

double calibrate_constant(int d, double s, const QuadratureSpec& quad, double xi_norm) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidArgument, "s must lie in ]0,1[");
  if (!(xi_norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "reference frequency must be positive");
  const FunctionHandle probe =
      make_handle([xi_norm](const Point& p) { return std::cos(xi_norm * p.v(0)); }, "cos-probe");
  const double raw = frac_laplacian(probe, Point::identity(d), KernelSpec::prototype(s, 1.0), quad);
  if (!(raw > 0.0)) throw Error(ErrorCode::NotConverged, "calibration integral is not positive", fmt(raw));
  return std::pow(xi_norm, 2.0 * s) / raw;
}

double general_kernel_apply(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                            const QuadratureSpec& quad) {
  spec.validate();
  if (spec.kind != KernelSpec::Kind::General) {
    throw Error(ErrorCode::InvalidArgument, "general_kernel_apply needs a general kernel");
  }
  if (!spec.symmetric && spec.s >= 0.5) {
    throw Error(ErrorCode::NeedsSymmetrizedKernel,
                "non-symmetric kernels are only absolutely convergent for s < 1/2", fmt(spec.s));
  }
  const double kappa = 2.0 * spec.s;
  const int d = z.dim();
  auto kfac = [&](const Vec& vp, double rho) {
    const double k = spec.K(z, vp);
    const double scaled = k * std::pow(rho, d + kappa);
    const double tol = 1e-12 * spec.c_plus;
    if (!(scaled >= spec.c_minus - tol && scaled <= spec.c_plus + tol)) {
      throw Error(ErrorCode::KernelBound, "kernel violates c-/|y|^{d+2s} <= K <= c+/|y|^{d+2s}",
                  "K|y|^{d+2s}=" + fmt(scaled));
    }
    return scaled;
  };
  const double order = spec.symmetric ? 2.0 : std::numeric_limits<double>::quiet_NaN();
  Engine e{u, z, kappa, linear_phi, kfac, order, quad, {}};
  return e.run();
}

double p_laplacian_apply(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                         const QuadratureSpec& quad) {
  spec.validate();
  if (spec.kind != KernelSpec::Kind::PLaplacian) {
    throw Error(ErrorCode::InvalidArgument, "p_laplacian_apply needs a p-Laplacian kernel");
  }
  const double p = spec.p, s = spec.s;
  if (p < 2.0 && !(p - 1.0 > p * s)) {
    throw Error(ErrorCode::NonIntegrable, "p-Laplacian integrand not integrable near v' = v",
                "requires p - 1 > p*s: p - 1 = " + fmt(p - 1.0) + ", p*s = " + fmt(p * s));
  }
  std::function<double(double)> phi = linear_phi;
  double order = 2.0;
  if (p != 2.0) {
    phi = [p](double r) { return std::pow(std::abs(r), p - 2.0) * r; };
    order = std::numeric_limits<double>::quiet_NaN();
  }
  Engine e{u, z, p * s, phi, nullptr, order, quad, {}};
  return spec.C * e.run();
}

double nonlocal_apply(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
                      const QuadratureSpec& quad) {
  switch (spec.kind) {
    case KernelSpec::Kind::Prototype: return frac_laplacian(u, z, spec, quad);
    case KernelSpec::Kind::General: return general_kernel_apply(u, z, spec, quad);
    case KernelSpec::Kind::PLaplacian: return p_laplacian_apply(u, z, spec, quad);
  }
  return 0.0;
}

double apply_L(const FunctionHandle& u, const Point& z, const KernelSpec& spec,
               const QuadratureSpec& quad, double step) {
  return nonlocal_apply(u, z, spec, quad) + lie_derivative(u, FieldSpec::y(), z, step);
}

}  // namespace kh
