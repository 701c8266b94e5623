// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "kh/harness.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

namespace {

using kh::json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20240611;

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int n, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double max_of(const json& arr, const char* key) {
  double m = 0.0;
  for (const auto& r : arr) m = std::max(m, r.at(key).get<double>());
  return m;
}

}  // namespace

int main() {

  {
    const auto t0 = Clock::now();
    bool pass = true;
    double worst = 0.0;
    for (double th : {1.0 / 3.0, 4.0 / 3.0, 2.0}) {
      for (int d : {1, 2}) {
        const json r = kh::verify_group(kh::Anisotropy(d, th), kSeed, 10000);
        pass = pass && r["pass"].get<bool>();
        worst = std::max(worst, max_of(r["checks"], "max_error"));
      }
    }
    const double secs = seconds_since(t0) / 6.0;
    report(1, pass && secs < 5.0,
           fmt("group axioms on 1e4 samples, max rel error %.2e (tol 1e-10), %.2f s per run (limit 5 s)",
               worst, secs));
  }

  {
    const json r = kh::index_examples();
    report(2, r["pass"].get<bool>(),
           "index enumeration matches " + std::to_string(r["cases"].size()) + " interval probes exactly");
  }

  const double triples[3][2] = {{1.0 / 3.0, 1.2}, {4.0 / 3.0, 2.6}, {2.0, 2.9}};

  {
    bool pass = true;
    double worst = 0.0, slowest = 0.0;
    for (const auto& t : triples) {
      const auto t0 = Clock::now();
      const json r = kh::taylor_exactness(t[0], t[1], kSeed);
      slowest = std::max(slowest, seconds_since(t0));
      pass = pass && r["pass"].get<bool>();
      worst = std::max(worst, r["max_remainder"].get<double>());
    }
    report(3, pass && slowest < 10.0,
           fmt("Taylor exactness, max remainder %.2e (tol 1e-10), slowest run %.2f s (limit 10 s)",
               worst, slowest));
  }

  {
    bool pass = true;
    double min_margin = 1e300, min_r2 = 1.0;
    for (const auto& t : triples) {
      const json r = kh::taylor_scaling(t[0], t[1], 1, "sin-mix", kSeed);
      pass = pass && r["pass"].get<bool>();
      for (const auto& c : r["centers"])
        for (const auto& rec : c["records"]) {
          if (rec["status"] != "fitted") continue;
          min_margin = std::min(min_margin, rec["slope"].get<double>() - t[1]);
          min_r2 = std::min(min_r2, rec["r2"].get<double>());
        }
    }
    report(4, pass,
           fmt("remainder slopes, min(slope - alpha) = %.3f (need >= -0.1), min r2 = %.5f (need >= 0.99)",
               min_margin, min_r2));
  }

  {
    bool pass = true;
    double min_margin = 1e300;
    for (const auto& t : triples) {
      const json r = kh::holder_x_exponent(t[0], t[1], kSeed);
      pass = pass && r["pass"].get<bool>();
      const double need = r["exponent"].get<double>();
      min_margin = std::min({min_margin, r["kink"]["slope"].get<double>() - need,
                             r["smooth"]["slope"].get<double>() - need});
    }
    report(5, pass, fmt("pure-x increment exponents, min(slope - exponent) = %.4f (need >= -0.05)",
                        min_margin));
  }

  {
    bool pass = true;
    double four_flow = 0.0;
    for (const auto& t : triples)
      for (int d : {1, 2}) {
        const json r = kh::four_flow_identity(t[0], d, kSeed, 1000);
        pass = pass && r["pass"].get<bool>();
        four_flow = std::max(four_flow, r["max_error"].get<double>());
      }
    const json c = kh::connect_suite(2.0, 2, kSeed, 100, 1e-3);
    pass = pass && c["pass"].get<bool>();
    const double conn = c["runs"].empty() ? 0.0 : max_of(c["runs"], "endpoint_error");
    double tau_ratio = 0.0;
    for (const auto& r : c["runs"])
      tau_ratio = std::max(tau_ratio, r["tau"].get<double>() / r["tau_bound"].get<double>());
    for (const auto& f : c["failures"])
      std::printf("  connect failure %d: %s\n", f["index"].get<int>(), f["error"].get<std::string>().c_str());
    report(6, pass,
           fmt("four-flow error %.2e (tol 1e-12); connect error %.2e (tol 1e-10), max tau/bound %.3f",
               four_flow, conn, tau_ratio) +
               fmt(", convergence %.0f%%", 100.0 * c["convergence_rate"].get<double>()));
  }

  {
    const json r = kh::operator_suite(kSeed);
    const double sym = max_of(r["symbol"], "rel_error");
    report(7, r["pass"].get<bool>(),
           fmt("symbol rel error %.2e (tol 1e-3), Galilean %.2e (tol 1e-6), p=2 %.2e (tol 1e-10)", sym,
               r["galilean_max_error"].get<double>(), r["p2_max_error"].get<double>()));
  }

  {
    const json r = kh::seminorm_consistency(4.0 / 3.0, 2.6);
    double worst = 0.0;
    for (const auto& f : r["functions"]) worst = std::max(worst, max_of(f["terms"], "ratio"));
    report(8, r["pass"].get<bool>(), fmt("max derivative/base seminorm ratio %.4f (limit 1.05)", worst));
  }

  {
    const std::string a = kh::full_suite(kSeed).dump();
    const std::string b = kh::full_suite(kSeed).dump();
    bool all = true;
    const json parsed = json::parse(a);
    for (int n = 1; n <= 8; ++n) all = all && parsed["criterion_" + std::to_string(n)]["pass"].get<bool>();
    report(9, a == b, "two full-suite runs with seed " + std::to_string(kSeed) + " give identical reports (" +
                          std::to_string(a.size()) + " bytes)" + (all ? "" : "; suite reports a failure"));
  }

  std::printf("%s: %d criterion failure(s)\n", failures ? "FAILED" : "OK", failures);
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
