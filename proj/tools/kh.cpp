// kh: command-line front end for the kinetic Hoelder toolkit.

#include "kh/corpus.hpp"
#include "kh/error.hpp"
#include "kh/harness.hpp"
#include "kh/holder.hpp"
#include "kh/kinetic.hpp"
#include "kh/steering.hpp"
#include "kh/taylor.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

namespace {

using kh::json;

struct Config {
  int dim = 1;
  double theta = 2.0;
  double alpha = 2.9;
  std::string func = "sin-mix";
  std::uint64_t seed = 20240101;
  std::string out;
  std::string matrix_file;
  std::string matrix;
  double s = 0.5;
  double p = 2.0;
  int samples = 10000;
  bool inject_broken_compose = false;
  int grid_points = 2000;
  int grid_taus = 40;
  std::string h = "0.001";
  std::string z;
  std::string mode = "symbol";
  int points = 10;
  double xi = 1.0;
  std::string box_lower = "-1,-1,-1";
  std::string box_upper = "1,1,1";
  std::string omega0_lower;
  std::string omega0_upper;
  double far_radius = 1000.0;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

kh::Vec parse_vec(const std::string& text, int d) {
  const auto vals = parse_list(text);
  if (static_cast<int>(vals.size()) != d) {
    throw kh::Error(kh::ErrorCode::DimensionMismatch, "expected " + std::to_string(d) + " values", text);
  }
  kh::Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = vals[i];
  return v;
}

kh::Point parse_point(const std::string& text, int d) {
  if (text.empty()) return kh::Point::identity(d);
  const auto vals = parse_list(text);
  if (static_cast<int>(vals.size()) != 1 + 2 * d) {
    throw kh::Error(kh::ErrorCode::DimensionMismatch,
                    "a point needs 1 + 2d comma-separated values (t, x..., v...)", text);
  }
  kh::Point p = kh::Point::identity(d);
  p.t = vals[0];
  for (int i = 0; i < d; ++i) {
    p.x(i) = vals[1 + i];
    p.v(i) = vals[1 + d + i];
  }
  return p;
}

std::shared_ptr<const kh::DriftMatrix> load_drift(const Config& c) {
  if (!c.matrix_file.empty()) return std::make_shared<kh::DriftMatrix>(kh::DriftMatrix::from_file(c.matrix_file));
  if (!c.matrix.empty()) return std::make_shared<kh::DriftMatrix>(kh::DriftMatrix::parse(c.matrix));
  return nullptr;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw kh::Error(kh::ErrorCode::InvalidArgument, "cannot open output file", c.out);
  f << text << "\n";
}

int emit_json(const Config& c, json j) {
  j["schema_version"] = kh::kSchemaVersion;
  emit(c, j.dump(2));
  return j.value("pass", true) ? 0 : 1;
}

int cmd_verify_group(const Config& c) {
  const kh::Anisotropy a(c.dim, c.theta);
  const kh::ComposeFn op = c.inject_broken_compose ? kh::ComposeFn(kh::broken_compose)
                                                   : kh::ComposeFn(kh::compose);
  return emit_json(c, kh::verify_group(a, c.seed, c.samples, op));
}

int cmd_taylor_scaling(const Config& c) {
  return emit_json(c, kh::taylor_scaling(c.theta, c.alpha, c.dim, c.func, c.seed));
}

int cmd_seminorm(const Config& c) {
  const kh::Anisotropy a(c.dim, c.theta);
  const kh::Corpus corpus = kh::Corpus::standard(a);
  const kh::SampleGrid grid = kh::SampleGrid::halton_ball(a, c.grid_points, c.grid_taus);
  kh::HolderOptions opt;
  opt.drift = load_drift(c);
  const kh::HolderReport r = kh::seminorm_C_alpha(corpus.get(c.func).handle, c.alpha, grid, a, opt);
  return emit_json(c, json{{"alpha", r.alpha},
                           {"theta", r.theta},
                           {"function", c.func},
                           {"case_path", r.case_path},
                           {"value", r.value},
                           {"lower_bound", r.lower_bound},
                           {"grid_spec",
                            {{"points", r.grid_points}, {"taus", r.grid_taus}, {"kind", "halton-ball"}}}});
}

json path_json(const kh::PathReport& r) {
  json wp = json::array();
  for (const auto& p : r.waypoints) wp.push_back(kh::to_json(p));
  return json{{"waypoints", wp},
              {"endpoint", kh::to_json(r.endpoint)},
              {"target", kh::to_json(r.target)},
              {"endpoint_error", r.endpoint_error}};
}

int cmd_steer(const Config& c) {
  const kh::Anisotropy a(c.dim, c.theta);
  const kh::Point z = parse_point(c.z, c.dim);
  const kh::Vec h = parse_vec(c.h, c.dim);
  const kh::PathReport r = kh::steer_x(z, h, a);
  const double n = h.norm();
  return emit_json(c, json{{"theta", c.theta},
                           {"h", kh::to_json(h)},
                           {"w", kh::to_json(kh::Vec(h / n))},
                           {"tau", std::pow(n, 1.0 / (c.theta + 1.0))},
                           {"path", path_json(r)},
                           {"pass", r.endpoint_error <= 1e-12}});
}

int cmd_connect(const Config& c) {
  const kh::Anisotropy a(c.dim, c.theta);
  auto b = load_drift(c);
  if (!b) b = std::make_shared<kh::DriftMatrix>(kh::DriftMatrix::kinetic(c.dim));
  const kh::Point z = parse_point(c.z, c.dim);
  const kh::Vec h = parse_vec(c.h, c.dim);
  const kh::ConnectResult r = kh::connect(z, h, *b, a);
  const bool bound_ok = r.tau <= r.tau_bound;
  return emit_json(c, json{{"theta", c.theta},
                           {"w", kh::to_json(r.w)},
                           {"tau", r.tau},
                           {"tau_bound", r.tau_bound},
                           {"bound_ok", bound_ok},
                           {"epsilon", r.epsilon},
                           {"iterations", r.iterations},
                           {"method", r.method},
                           {"residual", r.residual},
                           {"path", path_json(r.report)},
                           {"pass", bound_ok && r.report.endpoint_error <= 1e-10}});
}

std::string spec_digest(const kh::KernelSpec& k, const kh::QuadratureSpec& q) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "kind=%d;s=%.6g;p=%.6g;C=%.10g;far=%.6g;nr=%d;na=%d",
                static_cast<int>(k.kind), k.s, k.p, k.C, q.far_radius, q.n_radial, q.n_angular);
  return buf;
}

int cmd_operator(const Config& c) {
  kh::QuadratureSpec quad;
  quad.far_radius = c.far_radius;
  const double C = kh::calibrate_constant(c.dim, c.s, quad);
  const kh::KernelSpec proto = kh::KernelSpec::prototype(c.s, C);
  std::ostringstream os;
  os.precision(17);
  bool pass = true;
  if (c.mode == "symbol") {
    os << "xi,value,expected,rel_error,status,spec\n";
    for (double xi : {0.5 * c.xi, c.xi, 2.0 * c.xi}) {
      const kh::FunctionHandle probe = kh::make_handle(
          [xi](const kh::Point& z) { return std::cos(xi * z.v(0)); }, "cos-probe");
      const double v = kh::frac_laplacian(probe, kh::Point::identity(c.dim), proto, quad);
      const double expect = std::pow(xi, 2.0 * c.s);
      const double rel = std::abs(v - expect) / expect;
      pass = pass && rel <= 1e-3;
      os << xi << "," << v << "," << expect << "," << rel << "," << (rel <= 1e-3 ? "ok" : "fail")
         << "," << spec_digest(proto, quad) << "\n";
    }
  } else {
    const kh::Anisotropy a(c.dim, 2.0 * c.s);
    const kh::Corpus corpus = kh::Corpus::standard(a);
    const kh::FunctionHandle& u = corpus.get(c.func).handle;
    const kh::KernelSpec spec =
        c.p == 2.0 && c.mode != "p-laplacian" ? proto : kh::KernelSpec::p_laplacian(c.s, c.p, C);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    os << "t";
    for (int i = 0; i < c.dim; ++i) os << ",x" << i + 1;
    for (int i = 0; i < c.dim; ++i) os << ",v" << i + 1;
    os << (c.mode == "p2-check" ? ",value,prototype,abs_diff,status,spec\n" : ",value,status,spec\n");
    for (int k = 0; k < c.points; ++k) {
      kh::Point z = kh::Point::identity(c.dim);
      z.t = unif(rng);
      for (int i = 0; i < c.dim; ++i) {
        z.x(i) = unif(rng);
        z.v(i) = unif(rng);
      }
      os << z.t;
      for (int i = 0; i < c.dim; ++i) os << "," << z.x(i);
      for (int i = 0; i < c.dim; ++i) os << "," << z.v(i);
      try {
        if (c.mode == "p2-check") {
          const kh::KernelSpec p2 = kh::KernelSpec::p_laplacian(c.s, 2.0, C);
          const double v = kh::p_laplacian_apply(u, z, p2, quad);
          const double ref = kh::frac_laplacian(u, z, proto, quad);
          const bool ok = std::abs(v - ref) <= 1e-10;
          pass = pass && ok;
          os << "," << v << "," << ref << "," << std::abs(v - ref) << "," << (ok ? "ok" : "fail");
        } else {
          os << "," << kh::apply_L(u, z, spec, quad, 1e-5) << ",ok";
        }
      } catch (const kh::Error& e) {
        pass = false;
        os << ",nan" << (c.mode == "p2-check" ? ",nan,nan" : "") << "," << kh::to_string(e.code());
      }
      os << "," << spec_digest(spec, quad) << "\n";
    }
  }
  std::string text = os.str();
  text.pop_back();
  emit(c, text);
  return pass ? 0 : 1;
}

int cmd_delta(const Config& c) {
  const kh::Anisotropy a(c.dim, c.theta);
  const kh::BoxDomain omega(parse_point(c.box_lower, c.dim), parse_point(c.box_upper, c.dim));
  const auto drift = load_drift(c);
  json j{{"theta", c.theta}};
  if (!c.omega0_lower.empty() || !c.omega0_upper.empty()) {
    const kh::BoxDomain omega0(parse_point(c.omega0_lower, c.dim), parse_point(c.omega0_upper, c.dim));
    j["delta_omega0"] = kh::delta_omega0(omega0, omega, a, drift);
  }
  const kh::Point z = parse_point(c.z, c.dim);
  j["z"] = kh::to_json(z);
  j["delta_z"] = kh::delta_z(z, omega, a, drift);
  return emit_json(c, j);
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--theta", c.theta, "homogeneity degree of Y")->capture_default_str();
  sub->add_option("--dim", c.dim, "spatial dimension d")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--out", c.out, "output file (stdout if empty)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kh: intrinsic Taylor, Hoelder and kinetic operator experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value configuration file");
  Config c;

  auto* vg = app.add_subcommand("verify-group", "group law, distance and dilation identities");
  add_common(vg, c);
  vg->add_option("--samples", c.samples, "number of random samples")->capture_default_str();
  vg->add_flag("--inject-broken-compose", c.inject_broken_compose, "mutation hook: wrong group law");

  auto* ts = app.add_subcommand("taylor-scaling", "remainder slope fits");
  add_common(ts, c);
  ts->add_option("--alpha", c.alpha, "regularity index")->capture_default_str();
  ts->add_option("--func", c.func, "corpus function id")->capture_default_str();

  auto* sn = app.add_subcommand("seminorm", "discretized C^alpha seminorm");
  add_common(sn, c);
  sn->add_option("--alpha", c.alpha, "regularity index")->capture_default_str();
  sn->add_option("--func", c.func, "corpus function id")->capture_default_str();
  sn->add_option("--grid-points", c.grid_points, "Halton points in the unit ball")->capture_default_str();
  sn->add_option("--grid-taus", c.grid_taus, "log-spaced flow times")->capture_default_str();
  sn->add_option("--matrix-file", c.matrix_file, "drift matrix file");
  sn->add_option("--matrix", c.matrix, "inline drift matrix, rows separated by ';'");

  auto* st = app.add_subcommand("steer", "commutator path to (t, x + h, v)");
  add_common(st, c);
  st->add_option("--target", c.h, "displacement, comma separated")->capture_default_str();
  st->add_option("--z", c.z, "start point t,x...,v...");

  auto* cn = app.add_subcommand("connect", "connection solver for a drift matrix");
  add_common(cn, c);
  cn->add_option("--target", c.h, "displacement, comma separated")->capture_default_str();
  cn->add_option("--z", c.z, "start point t,x...,v...");
  cn->add_option("--matrix-file", c.matrix_file, "drift matrix file");
  cn->add_option("--matrix", c.matrix, "inline drift matrix, rows separated by ';'");

  auto* op = app.add_subcommand("operator", "pointwise non-local operator evaluation (CSV)");
  add_common(op, c);
  op->add_option("--s", c.s, "fractional order")->capture_default_str();
  op->add_option("--p", c.p, "p-Laplacian exponent")->capture_default_str();
  op->add_option("--func", c.func, "corpus function id")->capture_default_str();
  op->add_option("--mode", c.mode, "symbol | eval | p-laplacian | p2-check")->capture_default_str();
  op->add_option("--points", c.points, "number of seeded evaluation points")->capture_default_str();
  op->add_option("--xi", c.xi, "reference frequency for symbol mode")->capture_default_str();
  op->add_option("--far-radius", c.far_radius, "quadrature truncation radius")->capture_default_str();

  auto* dl = app.add_subcommand("delta", "admissible flow time delta_z in a box");
  add_common(dl, c);
  dl->add_option("--z", c.z, "point t,x...,v...");
  dl->add_option("--box-lower", c.box_lower, "lower corner of Omega")->capture_default_str();
  dl->add_option("--box-upper", c.box_upper, "upper corner of Omega")->capture_default_str();
  dl->add_option("--omega0-lower", c.omega0_lower, "lower corner of Omega_0");
  dl->add_option("--omega0-upper", c.omega0_upper, "upper corner of Omega_0");
  dl->add_option("--matrix-file", c.matrix_file, "drift matrix file");
  dl->add_option("--matrix", c.matrix, "inline drift matrix, rows separated by ';'");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*vg) return cmd_verify_group(c);
    if (*ts) return cmd_taylor_scaling(c);
    if (*sn) return cmd_seminorm(c);
    if (*st) return cmd_steer(c);
    if (*cn) return cmd_connect(c);
    if (*op) return cmd_operator(c);
    if (*dl) return cmd_delta(c);
  } catch (const kh::Error& e) {
    json j{{"schema_version", kh::kSchemaVersion},
           {"error", std::string(kh::to_string(e.code()))},
           {"message", e.what()},
           {"detail", e.detail()},
           {"pass", false}};
    std::cerr << j.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
