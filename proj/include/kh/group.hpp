#pragma once

// Homogeneous Galilean group on R x R^d x R^d.
//
//   (t1,x1,v1) o (t2,x2,v2) = (t1+t2, x1+x2+t2 v1, v1+v2)
//   D_l(t,x,v)               = (l^theta t, l^(theta+1) x, l v)
//   ||(t,x,v)||              = |t|^(1/theta) + |x|^(1/(theta+1)) + |v|

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kh {

/// Largest supported spatial dimension. Vectors live inline (no heap).
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

struct Point {
  double t = 0.0;
  Vec x;
  Vec v;

  Point() = default;
  Point(double t_, Vec x_, Vec v_);

  static Point identity(int d);
  /// d = 1 convenience constructor.
  static Point scalar(double t, double x, double v);

  int dim() const { return static_cast<int>(x.size()); }
  bool finite() const;
  std::string str() const;
};

bool operator==(const Point& a, const Point& b);

/// Sup-norm of the componentwise difference.
double max_abs_diff(const Point& a, const Point& b);

class Anisotropy {
 public:
  Anisotropy(int d, double theta);

  int d() const { return d_; }
  double theta() const { return theta_; }

 private:
  int d_;
  double theta_;
};

Point compose(const Point& z1, const Point& z2, const Anisotropy& a);
Point inverse(const Point& z);
Point dilate(double lambda, const Point& z, const Anisotropy& a);
double hnorm(const Point& z, const Anisotropy& a);

/// Quasi-distance d(z1,z2) = ||z2^{-1} o z1||.
double qdist(const Point& z1, const Point& z2, const Anisotropy& a);

/// min over w of max(|dt|^(1/theta), |dx - w dt|^(1/(1+theta)), |v1-w|, |v2-w|).
double minmax_dist(const Point& z1, const Point& z2, const Anisotropy& a);

struct PointTriple {
  Point z1, z2, z3;
};

struct KappaEstimate {
  double kappa = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;  // degenerate denominators
};

/// Empirical lower bound for the quasi-triangle constant.
KappaEstimate estimate_kappa(std::span<const PointTriple> samples, const Anisotropy& a);

}  // namespace kh
