#include "kh/harness.hpp"

#include "kh/corpus.hpp"
#include "kh/error.hpp"
#include "kh/holder.hpp"
#include "kh/index.hpp"
#include "kh/steering.hpp"
#include "kh/taylor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

namespace kh {

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Point& z) { return json{{"t", z.t}, {"x", to_json(z.x)}, {"v", to_json(z.v)}}; }

namespace {

using Rng = std::mt19937_64;

double sup_norm(const Point& z) {
  double m = std::abs(z.t);
  for (int i = 0; i < z.dim(); ++i) m = std::max({m, std::abs(z.x(i)), std::abs(z.v(i))});
  return m;
}

double rel_point(const Point& p, const Point& q) {
  return max_abs_diff(p, q) / std::max({1.0, sup_norm(p), sup_norm(q)});
}

double rel_scalar(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

Point random_box_point(int d, Rng& rng, double half = 1.0) {
  std::uniform_real_distribution<double> unif(-half, half);
  Point p = Point::identity(d);
  p.t = unif(rng);
  for (int i = 0; i < d; ++i) {
    p.x(i) = unif(rng);
    p.v(i) = unif(rng);
  }
  return p;
}

Point random_ball_point(const Anisotropy& a, Rng& rng) {
  for (;;) {
    Point p = random_box_point(a.d(), rng);
    if (hnorm(p, a) <= 1.0) return p;
  }
}

Vec random_unit(int d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec w(d);
  do {
    for (int i = 0; i < d; ++i) w(i) = g(rng);
  } while (w.norm() < 1e-8);
  return w / w.norm();
}

json check(const std::string& name, double err, double tol) {
  return json{{"name", name}, {"max_error", err}, {"tolerance", tol}, {"pass", err <= tol}};
}

bool all_pass(const json& arr) {
  return std::all_of(arr.begin(), arr.end(), [](const json& c) { return c.at("pass").get<bool>(); });
}

const Corpus& corpus_for(const Anisotropy& a) {
  static thread_local std::map<std::pair<int, double>, Corpus> cache;
  const auto key = std::make_pair(a.d(), a.theta());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, Corpus::standard(a)).first;
  return it->second;
}

}  // namespace

Point broken_compose(const Point& z1, const Point& z2, const Anisotropy&) {
  return Point(z1.t + z2.t, z1.x + z2.x + z2.t * z2.v, z1.v + z2.v);
}

json verify_group(const Anisotropy& a, std::uint64_t seed, int n_samples, const ComposeFn& op) {
  Rng rng(seed);
  std::uniform_real_distribution<double> loglam(std::log(0.1), std::log(10.0));
  const int d = a.d();
  const Point e = Point::identity(d);
  auto dist = [&](const Point& z1, const Point& z2) { return hnorm(op(inverse(z2), z1, a), a); };
  double assoc = 0, ident = 0, inv = 0, left = 0, dil_norm = 0, dil_dist = 0, dil_auto = 0;
  for (int n = 0; n < n_samples; ++n) {
    const Point z1 = random_box_point(d, rng), z2 = random_box_point(d, rng),
                z3 = random_box_point(d, rng);
    const double lam = std::exp(loglam(rng));
    assoc = std::max(assoc, rel_point(op(op(z1, z2, a), z3, a), op(z1, op(z2, z3, a), a)));
    ident = std::max({ident, rel_point(op(z1, e, a), z1), rel_point(op(e, z1, a), z1)});
    inv = std::max({inv, max_abs_diff(op(z1, inverse(z1), a), e) / std::max(1.0, sup_norm(z1)),
                    max_abs_diff(op(inverse(z1), z1, a), e) / std::max(1.0, sup_norm(z1))});
    left = std::max(left, rel_scalar(dist(op(z3, z1, a), op(z3, z2, a)), dist(z1, z2)));
    dil_norm = std::max(dil_norm, rel_scalar(hnorm(dilate(lam, z1, a), a), lam * hnorm(z1, a)));
    dil_dist = std::max(dil_dist, rel_scalar(dist(dilate(lam, z1, a), dilate(lam, z2, a)),
                                             lam * dist(z1, z2)));
    dil_auto = std::max(dil_auto, rel_point(dilate(lam, op(z1, z2, a), a),
                                            op(dilate(lam, z1, a), dilate(lam, z2, a), a)));
  }
  const double tol = 1e-10;
  json checks = json::array({check("associativity", assoc, tol), check("identity", ident, tol),
                             check("inverse", inv, tol), check("left_invariance", left, tol),
                             check("dilation_norm", dil_norm, tol),
                             check("dilation_distance", dil_dist, tol),
                             check("dilation_automorphism", dil_auto, tol)});
  json failed = json::array();
  for (const auto& c : checks)
    if (!c["pass"].get<bool>()) failed.push_back(c["name"]);
  return json{{"theta", a.theta()}, {"dim", d},         {"seed", seed},
              {"n_samples", n_samples}, {"checks", checks}, {"failed", failed},
              {"pass", failed.empty()}};
}

namespace {

using Triple = std::tuple<int, int, int>;  // (k, |gamma|, |beta|) for d = 1

std::set<Triple> term_set(const Anisotropy& a, double alpha) {
  std::set<Triple> s;
  for (const auto& ti : enumerate_terms(a, alpha)) s.insert({ti.k, ti.gamma[0], ti.beta[0]});
  return s;
}

json triples_json(const std::set<Triple>& s) {
  json arr = json::array();
  for (const auto& [k, g, b] : s) arr.push_back({k, g, b});
  return arr;
}

}  // namespace

json index_examples() {
  json cases = json::array();
  auto add_case = [&](double theta, const std::string& interval, double lo, double hi,
                      std::set<Triple> expected) {
    const Anisotropy a(1, theta);
    // Probe just above the left end, the midpoint and the right end.
    for (double alpha : {lo + 1e-9, 0.5 * (lo + hi), hi}) {
      const std::set<Triple> got = term_set(a, alpha);
      cases.push_back(json{{"theta", theta},
                           {"interval", interval},
                           {"alpha", alpha},
                           {"expected", triples_json(expected)},
                           {"got", triples_json(got)},
                           {"size", got.size()},
                           {"pass", got == expected}});
    }
  };
  const double f = 4.0 / 3.0;
  add_case(f, "]1,4/3]", 1.0, f, {{0, 0, 0}, {0, 0, 1}});
  add_case(f, "]4/3,2]", f, 2.0, {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}});
  add_case(f, "]2,7/3]", 2.0, 7.0 / 3.0, {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 2}});
  add_case(f, "]7/3,8/3]", 7.0 / 3.0, 8.0 / 3.0,
           {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 2}, {0, 1, 0}, {1, 0, 1}});
  const double th = 1.0 / 3.0;
  add_case(th, "]0,1/3]", 0.0, th, {{0, 0, 0}});
  add_case(th, "]1/3,2/3]", th, 2.0 * th, {{0, 0, 0}, {1, 0, 0}});
  add_case(th, "]2/3,1]", 2.0 * th, 1.0, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
  add_case(th, "]1,4/3]", 1.0, 4.0 * th, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {0, 0, 1}});
  add_case(th, "]4/3,5/3]", 4.0 * th, 5.0 * th,
           {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {0, 0, 1}, {4, 0, 0}, {1, 0, 1}, {0, 1, 0}});
  return json{{"cases", cases}, {"pass", all_pass(cases)}};
}

json taylor_exactness(double theta, double alpha, std::uint64_t seed, int pairs) {
  const Anisotropy a(1, theta);
  Rng rng(seed);
  json items = json::array();
  double worst = 0.0;
  for (const auto& [id, f] : weighted_monomials(a, alpha)) {
    const FunctionHandle u = f.handle(id);
    const TermIndex ti = [&] {
      const auto& t = f.terms().front();
      return TermIndex::make(t.pow[0], {t.pow[1]}, {t.pow[2]}, a);
    }();
    if (!below_cutoff(ti.weight, alpha)) continue;
    double err = 0.0;
    for (int n = 0; n < pairs; ++n) {
      const Point z0 = random_ball_point(a, rng), z = random_ball_point(a, rng);
      err = std::max(err, std::abs(u(z) - TaylorPolynomial::build(u, alpha, z0, a)(z)));
    }
    worst = std::max(worst, err);
    items.push_back(json{{"id", id}, {"weight", ti.weight}, {"max_remainder", err}});
  }
  return json{{"theta", theta},     {"alpha", alpha},       {"monomials", items},
              {"max_remainder", worst}, {"tolerance", 1e-10}, {"pass", worst <= 1e-10}};
}

json taylor_scaling(double theta, double alpha, int dim, const std::string& func, std::uint64_t seed) {
  const Anisotropy a(dim, theta);
  const FunctionHandle& u = corpus_for(a).get(func).handle;
  const std::vector<Point> dirs = default_directions(a, 5, static_cast<unsigned>(seed));
  const std::vector<double> lambdas = geometric_grid(1e-1, 1e-3, 12);

  auto run = [&](const Point& z0, bool& pass) {
    const SlopeReport rep = scaling_slope(u, alpha, z0, a, dirs, lambdas);
    json records = json::array();
    for (const auto& r : rep.records) {
      bool ok = r.status == SlopeRecord::Status::PolynomialExact ||
                (r.status == SlopeRecord::Status::Fitted && r.slope >= alpha - 0.1 && r.r2 >= 0.99);
      pass = pass && ok;
      records.push_back(json{{"alpha", alpha},
                             {"theta", theta},
                             {"direction", to_json(r.direction)},
                             {"slope", r.slope},
                             {"intercept", r.intercept},
                             {"r2", r.r2},
                             {"n_points", r.n_points},
                             {"status", to_string(r.status)},
                             {"pass", ok}});
    }
    return json{{"z0", to_json(z0)}, {"polynomial_exact", rep.polynomial_exact}, {"records", records},
                {"pass", pass}};
  };

  // Verdict at the origin; seeded generic centers are reported alongside.
  bool pass = true;
  json centers = json::array({run(Point::identity(dim), pass)});
  Rng rng(seed);
  json generic = json::array();
  for (int k = 0; k < 2; ++k) {
    bool ok = true;
    generic.push_back(run(random_ball_point(a, rng), ok));
  }
  return json{{"theta", theta},     {"alpha", alpha},   {"dim", dim},   {"function", func},
              {"centers", centers}, {"generic_centers", generic}, {"pass", pass}};
}

json holder_x_exponent(double theta, double alpha, std::uint64_t seed) {
  const Anisotropy a(1, theta);
  const double e = std::min(alpha, theta + 1.0) / (theta + 1.0);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const std::vector<double> hs = geometric_grid(1e-1, 1e-4, 12);

  auto fit = [&](const FunctionHandle& u, const Point& z) {
    std::vector<double> lx, ly;
    for (double h : hs) {
      const PathReport path = steer_x(z, Vec::Constant(1, h), a);
      const double diff = std::abs(u(path.endpoint) - u(z));
      if (diff > 1e-14) {
        lx.push_back(std::log(h));
        ly.push_back(std::log(diff));
      }
    }
    if (lx.size() < 6) return LinearFit{};
    return least_squares(lx, ly);
  };

  const Point z_kink = Point::scalar(unif(rng), 0.0, unif(rng));
  const LinearFit kink = fit(holder_x_profile(1, e), z_kink);
  const Point z_smooth = random_ball_point(a, rng);
  const LinearFit smooth = fit(corpus_for(a).get("sin-mix").handle, z_smooth);
  const double need = e - 0.05;
  const bool pass = kink.slope >= need && smooth.slope >= need;
  return json{{"theta", theta},
              {"alpha", alpha},
              {"exponent", e},
              {"kink", {{"z", to_json(z_kink)}, {"slope", kink.slope}, {"r2", kink.r2}}},
              {"smooth", {{"z", to_json(z_smooth)}, {"slope", smooth.slope}, {"r2", smooth.r2}}},
              {"required_slope", need},
              {"pass", pass}};
}

json four_flow_identity(double theta, int dim, std::uint64_t seed, int n) {
  const Anisotropy a(dim, theta);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const Point z = random_box_point(dim, rng);
    const Vec w = random_unit(dim, rng);
    const double tau = unif(rng);
    worst = std::max(worst, commutator_path(z, w, tau, a).endpoint_error);
  }
  return json{{"theta", theta}, {"dim", dim}, {"n", n}, {"max_error", worst},
              {"tolerance", 1e-12}, {"pass", worst <= 1e-12}};
}

DriftMatrix random_drift(int d, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> sv(0.5, 0.7);
  auto gauss = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
  };
  const Eigen::HouseholderQR<Eigen::MatrixXd> qu(gauss(d, d)), qv(gauss(d, d));
  const Eigen::MatrixXd u = qu.householderQ(), v = qv.householderQ();
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i) s(i) = sv(rng);
  Eigen::MatrixXd b = 0.15 * gauss(2 * d, 2 * d);
  b.block(0, d, d, d) = u * s.asDiagonal() * v.transpose();
  const double n = spectral_norm(b);
  if (n > 1.0) b /= n;
  return DriftMatrix(b);
}

json connect_suite(double theta, int dim, std::uint64_t seed, int n_drifts, double h_norm) {
  const Anisotropy a(dim, theta);
  json runs = json::array();
  json failures = json::array();
  int converged = 0;
  bool accurate = true;
  for (int k = 0; k < n_drifts; ++k) {
    Rng rng(seed * 1000003ULL + k);
    const DriftMatrix b = random_drift(dim, seed * 7919ULL + k);
    const Point z = random_box_point(dim, rng);
    const Vec h = h_norm * random_unit(dim, rng);
    try {
      const ConnectResult r = connect(z, h, b, a);
      ++converged;
      const bool ok = r.report.endpoint_error <= 1e-10 && r.tau <= r.tau_bound;
      accurate = accurate && ok;
      runs.push_back(json{{"drift_norm", b.norm()},
                          {"epsilon", r.epsilon},
                          {"tau", r.tau},
                          {"tau_bound", r.tau_bound},
                          {"w", to_json(r.w)},
                          {"endpoint_error", r.report.endpoint_error},
                          {"iterations", r.iterations},
                          {"method", r.method},
                          {"pass", ok}});
    } catch (const Error& e) {
      failures.push_back(json{{"index", k}, {"error", e.what()}, {"detail", e.detail()}});
    }
  }
  const double rate = n_drifts == 0 ? 0.0 : static_cast<double>(converged) / n_drifts;
  return json{{"theta", theta},       {"dim", dim},           {"h_norm", h_norm},
              {"n_drifts", n_drifts}, {"convergence_rate", rate}, {"runs", runs},
              {"failures", failures}, {"pass", accurate && rate >= 0.95}};
}

json operator_suite(std::uint64_t seed, const QuadratureSpec& quad) {
  json symbol = json::array();
  bool symbol_ok = true;
  for (double s : {0.25, 0.5, 0.75}) {
    const double C = calibrate_constant(1, s, quad);
    const KernelSpec spec = KernelSpec::prototype(s, C);
    for (double xi : {0.5, 1.0, 2.0}) {
      const FunctionHandle probe =
          make_handle([xi](const Point& z) { return std::cos(xi * z.v(0)); }, "cos-probe");
      const double value = frac_laplacian(probe, Point::identity(1), spec, quad);
      const double expect = std::pow(xi, 2.0 * s);
      const double rel = std::abs(value - expect) / expect;
      symbol_ok = symbol_ok && rel <= 1e-3;
      symbol.push_back(json{{"s", s}, {"xi", xi}, {"C", C}, {"value", value}, {"expected", expect},
                            {"rel_error", rel}, {"pass", rel <= 1e-3}});
    }
  }

  const Anisotropy a(1, 1.0);
  const FunctionHandle& u = corpus_for(a).get("gauss-window").handle;
  const double s = 0.5;
  const KernelSpec spec = KernelSpec::prototype(s, calibrate_constant(1, s, quad));
  Rng rng(seed);
  json galilean = json::array();
  double worst_gal = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Point z1 = random_box_point(1, rng), z2 = random_box_point(1, rng);
    const double lhs = apply_L(left_translate(u, z1, a), z2, spec, quad, 1e-5);
    const double rhs = apply_L(u, compose(z1, z2, a), spec, quad, 1e-5);
    worst_gal = std::max(worst_gal, std::abs(lhs - rhs));
    galilean.push_back(json{{"z1", to_json(z1)}, {"z2", to_json(z2)}, {"lhs", lhs}, {"rhs", rhs}});
  }

  double worst_p2 = 0.0;
  const KernelSpec p2 = KernelSpec::p_laplacian(s, 2.0, spec.C);
  for (int k = 0; k < 10; ++k) {
    const Point z = random_box_point(1, rng);
    worst_p2 = std::max(worst_p2, std::abs(p_laplacian_apply(u, z, p2, quad) -
                                           frac_laplacian(u, z, spec, quad)));
  }
  const bool pass = symbol_ok && worst_gal <= 1e-6 && worst_p2 <= 1e-10;
  return json{{"symbol", symbol},
              {"galilean", galilean},
              {"galilean_max_error", worst_gal},
              {"p2_max_error", worst_p2},
              {"pass", pass}};
}

json seminorm_consistency(double theta, double alpha, int grid_points, int grid_taus) {
  const Anisotropy a(1, theta);
  const SampleGrid grid = SampleGrid::halton_ball(a, grid_points, grid_taus);
  json funcs = json::array();
  bool pass = true;
  for (const auto& [id, f] : std::vector<std::pair<std::string, SymbolicField>>{
           {"sin-mix", sin_mix(1)}, {"gauss-window", gauss_window_cos(1)}}) {
    const HolderReport base = seminorm_C_alpha(f.handle(id), alpha, grid, a);
    json terms = json::array();
    for (const auto& ti : enumerate_terms(a, alpha)) {
      const double order = alpha - ti.weight;
      const HolderReport r = seminorm_C_alpha(f.term_derivative(ti).handle(id + ti.str()), order, grid, a);
      const bool ok = r.value <= 1.05 * base.value + 1e-12;
      pass = pass && ok;
      terms.push_back(json{{"term", ti.str()},
                           {"order", order},
                           {"value", r.value},
                           {"case_path", r.case_path},
                           {"ratio", base.value > 0.0 ? r.value / base.value : 0.0},
                           {"pass", ok}});
    }
    funcs.push_back(json{{"function", id},
                         {"seminorm", base.value},
                         {"case_path", base.case_path},
                         {"terms", terms}});
  }
  return json{{"theta", theta},
              {"alpha", alpha},
              {"grid", {{"points", grid_points}, {"taus", grid_taus}, {"lower_bound", true}}},
              {"functions", funcs},
              {"pass", pass}};
}

json full_suite(std::uint64_t seed) {
  const std::vector<std::pair<double, double>> triples = {
      {1.0 / 3.0, 1.2}, {4.0 / 3.0, 2.6}, {2.0, 2.9}};
  json out{{"schema_version", kSchemaVersion}, {"seed", seed}};

  json c1 = json::array();
  for (double th : {1.0 / 3.0, 4.0 / 3.0, 2.0})
    for (int d : {1, 2}) c1.push_back(verify_group(Anisotropy(d, th), seed, 10000));
  out["criterion_1"] = {{"runs", c1}, {"pass", all_pass(c1)}};

  out["criterion_2"] = index_examples();

  json c3 = json::array(), c4 = json::array(), c5 = json::array();
  for (const auto& [th, al] : triples) {
    c3.push_back(taylor_exactness(th, al, seed));
    c4.push_back(taylor_scaling(th, al, 1, "sin-mix", seed));
    c5.push_back(holder_x_exponent(th, al, seed));
  }
  out["criterion_3"] = {{"runs", c3}, {"pass", all_pass(c3)}};
  out["criterion_4"] = {{"runs", c4}, {"pass", all_pass(c4)}};
  out["criterion_5"] = {{"runs", c5}, {"pass", all_pass(c5)}};

  json four_flow = json::array();
  for (const auto& [th, al] : triples)
    for (int d : {1, 2}) four_flow.push_back(four_flow_identity(th, d, seed, 1000));
  const json conn = connect_suite(2.0, 2, seed, 100, 1e-3);
  out["criterion_6"] = {{"four_flow", four_flow}, {"connect", conn},
                        {"pass", all_pass(four_flow) && conn["pass"].get<bool>()}};

  out["criterion_7"] = operator_suite(seed);
  out["criterion_8"] = seminorm_consistency(4.0 / 3.0, 2.6);
  return out;
}

}  // namespace kh
