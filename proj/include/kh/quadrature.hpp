#pragma once

// Gauss-Legendre rules, hemisphere direction sets and radial panel layouts
// for singular integrals over R^d in polar coordinates.

#include "kh/group.hpp"

#include <vector>

namespace kh {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule1D gauss_legendre(int n);

/// Directions theta covering half of the unit sphere S^{d-1}, one from each
/// antipodal pair, with weights summing to |S^{d-1}| / 2.
///   d = 1: {+1}, weight 1
///   d = 2: angles pi j / n, weight pi / n (periodic trapezoid)
///   d = 3: Gauss-Legendre in cos(polar) on [0, 1] times n uniform azimuths
struct HemisphereRule {
  std::vector<Vec> dirs;
  std::vector<double> weights;
};
HemisphereRule hemisphere_rule(int d, int n_angular);

/// |S^{d-1}|
double sphere_area(int d);

struct Panel {
  double a;
  double b;
};

/// Panels covering [core, far]: geometric (ratio 2) up to `near`, then
/// geometric (ratio 1.25) until the width reaches `max_width`, then uniform.
/// Every value in `breaks` that lies inside (core, far) becomes a panel edge.
std::vector<Panel> radial_panels(double core, double near, double far, double max_width,
                                 const std::vector<double>& breaks = {});

}  // namespace kh
