#include "kh/quadrature.hpp"

#include "kh/error.hpp"

#include <algorithm>
#include <cmath>

namespace kh {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre rule needs n >= 1");
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

double sphere_area(int d) { return 2.0 * std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0); }

HemisphereRule hemisphere_rule(int d, int n_angular) {
  if (d < 1 || d > 3) throw Error(ErrorCode::InvalidArgument, "angular rules exist for d = 1, 2, 3");
  if (n_angular < 1) throw Error(ErrorCode::InvalidArgument, "n_angular must be positive");
  HemisphereRule r;
  if (d == 1) {
    r.dirs.push_back(Vec::Constant(1, 1.0));
    r.weights.push_back(1.0);
    return r;
  }
  if (d == 2) {
    for (int j = 0; j < n_angular; ++j) {
      const double phi = M_PI * j / n_angular;
      Vec v(2);
      v << std::cos(phi), std::sin(phi);
      r.dirs.push_back(v);
      r.weights.push_back(M_PI / n_angular);
    }
    return r;
  }
  const int n_polar = std::max(2, n_angular / 2);
  const Rule1D gl = gauss_legendre(n_polar);
  for (int i = 0; i < n_polar; ++i) {
    const double mu = 0.5 * (gl.nodes[i] + 1.0);  // cos(polar) in [0, 1]
    const double sin_p = std::sqrt(1.0 - mu * mu);
    for (int j = 0; j < n_angular; ++j) {
      const double phi = 2.0 * M_PI * j / n_angular;
      Vec v(3);
      v << sin_p * std::cos(phi), sin_p * std::sin(phi), mu;
      r.dirs.push_back(v);
      r.weights.push_back(0.5 * gl.weights[i] * 2.0 * M_PI / n_angular);
    }
  }
  return r;
}

std::vector<Panel> radial_panels(double core, double near, double far, double max_width,
                                 const std::vector<double>& breaks) {
  if (!(core > 0.0 && core < near && near < far && max_width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "radial panels need 0 < core < near < far");
  }
  std::vector<double> edges{core};
  double r = core;
  while (r * 2.0 < near) {
    r *= 2.0;
    edges.push_back(r);
  }
  edges.push_back(near);
  r = near;
  while (r < far) {
    const double width = std::min(max_width, 0.25 * r);
    r = std::min(far, r + width);
    if (far - r < 1e-9 * far) r = far;
    edges.push_back(r);
  }
  for (double b : breaks)
    if (b > core && b < far) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  std::vector<Panel> panels;
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] - edges[i - 1] > 1e-12 * edges[i]) panels.push_back({edges[i - 1], edges[i]});
  return panels;
}

}  // namespace kh
