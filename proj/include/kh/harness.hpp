#pragma once

// Experiment suites shared by the CLI and the acceptance binary. Every suite
// returns a JSON verdict with a top-level "pass" flag and no timing data, so
// identical seeds give byte-identical reports.

#include "kh/drift.hpp"
#include "kh/group.hpp"
#include "kh/kinetic.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <string>

namespace kh {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const Point& z);
json to_json(const Vec& v);

using ComposeFn = std::function<Point(const Point&, const Point&, const Anisotropy&)>;

/// Group law with x1 + x2 + t1 v2 in place of x1 + x2 + t2 v1 (mutation hook).
Point broken_compose(const Point& z1, const Point& z2, const Anisotropy& a);

/// Associativity, identity, inverse, left invariance of the quasi-distance,
/// dilation homogeneity and dilation automorphism on seeded samples.
json verify_group(const Anisotropy& a, std::uint64_t seed, int n_samples = 10000,
                  const ComposeFn& compose_fn = compose);

/// Term sets on each jump interval for theta = 4/3 (alpha <= 8/3) and theta = 1/3 (alpha <= 5/3).
json index_examples();

/// Remainder of every weighted monomial of weight < alpha on the unit hnorm ball.
json taylor_exactness(double theta, double alpha, std::uint64_t seed, int pairs_per_monomial = 50);

/// Remainder slopes for one (theta, alpha, function) over distances [1e-3, 1e-1].
json taylor_scaling(double theta, double alpha, int dim, const std::string& func,
                    std::uint64_t seed);

/// Pure-x increment exponent at x = 0 through the commutator path.
json holder_x_exponent(double theta, double alpha, std::uint64_t seed);

/// Four-flow endpoint identity on seeded (z, w, tau).
json four_flow_identity(double theta, int dim, std::uint64_t seed, int n = 1000);

/// Seeded drift with ||B|| <= 1 and singular values of B12 in [0.5, 0.7].
DriftMatrix random_drift(int d, std::uint64_t seed);

/// connect on seeded drifts with |h| = h_norm.
json connect_suite(double theta, int dim, std::uint64_t seed, int n_drifts = 100,
                   double h_norm = 1e-3);

/// Symbol check |xi|^{2s}, Galilean invariance and the p = 2 reduction.
json operator_suite(std::uint64_t seed, const QuadratureSpec& quad = {});

/// ||Y^k d_v^beta d_x^gamma u||_{C^{alpha - weight}} <= 1.05 ||u||_{C^alpha}.
json seminorm_consistency(double theta, double alpha, int grid_points = 2000, int grid_taus = 40);

/// One JSON verdict per acceptance criterion 1..8, keyed "criterion_<n>".
json full_suite(std::uint64_t seed);

}  // namespace kh
