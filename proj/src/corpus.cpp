#include "kh/corpus.hpp"

#include "kh/error.hpp"
#include "kh/flows.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace kh {

namespace {

std::array<double, SymbolicField::kMaxVars> uniform_gauss(int d, double q, bool include_t) {
  std::array<double, SymbolicField::kMaxVars> g{};
  for (int j = include_t ? 0 : 1; j < 1 + 2 * d; ++j) g[j] = q;
  return g;
}

std::string var_name(int d, int var) {
  if (var == 0) return "t";
  if (var <= d) return "x" + std::to_string(var);
  return "v" + std::to_string(var - d);
}

std::string index_str(const MultiIndex& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s;
}

// All multi-indices of length d with |m| == n.
void compositions(int d, int n, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == d - 1) {
    cur[pos] = n;
    out.push_back(cur);
    return;
  }
  for (int k = n; k >= 0; --k) {
    cur[pos] = k;
    compositions(d, n - k, cur, pos + 1, out);
  }
}

std::vector<MultiIndex> indices_of_length(int d, int n) {
  std::vector<MultiIndex> out;
  MultiIndex cur(d, 0);
  compositions(d, n, cur, 0, out);
  return out;
}

}  // namespace

SymbolicField sin_mix(int d) {
  SymbolicField f = SymbolicField::sine(d, 0, 1.0);
  for (int var = 1; var < 1 + 2 * d; ++var) f = f + SymbolicField::sine(d, var, 1.0);
  return f;
}

SymbolicField gauss_window_cos(int d) {
  return SymbolicField::sine(d, 1 + d, 1.0, 0.5 * std::numbers::pi) *
         SymbolicField::gaussian(d, uniform_gauss(d, 0.25, true));
}

std::vector<std::pair<std::string, SymbolicField>> weighted_monomials(const Anisotropy& a,
                                                                     double max_weight) {
  const int d = a.d();
  const double th = a.theta();
  const double tol = 1e-12 * std::max(1.0, max_weight);
  std::vector<std::pair<std::string, SymbolicField>> out;
  for (int k = 0; th * k <= max_weight + tol; ++k) {
    for (int n = 0; th * k + (1.0 + th) * n <= max_weight + tol; ++n) {
      for (int m = 0; th * k + (1.0 + th) * n + m <= max_weight + tol; ++m) {
        for (const auto& g : indices_of_length(d, n)) {
          for (const auto& b : indices_of_length(d, m)) {
            const std::string id = "mono[" + std::to_string(k) + ";" + index_str(g) + ";" +
                                   index_str(b) + "]";
            out.emplace_back(id, SymbolicField::monomial(d, 1.0, k, g, b));
          }
        }
      }
    }
  }
  return out;
}

FunctionHandle holder_x_profile(int d, double e) {
  if (!(e > 0.0)) throw Error(ErrorCode::InvalidArgument, "Hoelder exponent must be positive");
  return make_handle(
      [e](const Point& z) {
        const double r2 = z.x.squaredNorm() + z.v.squaredNorm();
        return std::pow(std::abs(z.x(0)), e) * std::exp(-r2);
      },
      "holder-x[" + std::to_string(e) + "," + std::to_string(d) + "]");
}

void cross_validate(const FunctionHandle& u, const Anisotropy& a, unsigned seed) {
  if (!u.has_oracle()) return;
  const int d = a.d();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double step = 1e-5;
  for (int n = 0; n < 10; ++n) {
    Point z = Point::identity(d);
    z.t = unif(rng);
    for (int i = 0; i < d; ++i) {
      z.x(i) = unif(rng);
      z.v(i) = unif(rng);
    }
    auto check = [&](const TermIndex& ti, double fd) {
      const double exact = u.oracle(ti, z);
      if (std::abs(exact - fd) > 1e-6 * std::max(1.0, std::abs(exact))) {
        throw Error(ErrorCode::InvalidArgument, "oracle disagrees with finite differences",
                    u.label + " " + ti.str() + " at " + z.str());
      }
    };
    MultiIndex zero(d, 0);
    check(TermIndex::make(1, zero, zero, a), lie_derivative(u, FieldSpec::y(), z, step));
    for (int i = 0; i < d; ++i) {
      MultiIndex e = zero;
      e[i] = 1;
      check(TermIndex::make(0, zero, e, a), lie_derivative(u, FieldSpec::z_axis(d, i), z, step));
      Point p = z, m = z;
      p.x(i) += step;
      m.x(i) -= step;
      check(TermIndex::make(0, e, zero, a), (u(p) - u(m)) / (2.0 * step));
    }
  }
}

void Corpus::add(CorpusEntry e) {
  if (e.exact_oracle) cross_validate(e.handle, a_);
  const std::string id = e.id;
  entries_[id] = std::move(e);
}

void Corpus::add_symbolic(const std::string& id, const SymbolicField& f, std::string regularity) {
  add(CorpusEntry{id, f.handle(id), std::move(regularity), true});
}

const CorpusEntry& Corpus::get(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw Error(ErrorCode::InvalidArgument, "unknown corpus function", id);
  return it->second;
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : entries_) out.push_back(id);
  return out;
}

Corpus Corpus::standard(const Anisotropy& a) {
  const int d = a.d();
  Corpus c(a);
  c.add_symbolic("const", SymbolicField::constant(d, 1.5), "constant");
  for (auto& [id, f] : weighted_monomials(a, 4.0)) c.add_symbolic(id, f, "polynomial");
  for (int var = 0; var < 1 + 2 * d; ++var) {
    c.add_symbolic("sin-" + var_name(d, var), SymbolicField::sine(d, var, 1.0), "smooth");
    c.add_symbolic("cos-" + var_name(d, var),
                   SymbolicField::sine(d, var, 1.0, 0.5 * std::numbers::pi), "smooth");
  }
  c.add_symbolic("sin-mix", sin_mix(d), "smooth");
  c.add_symbolic("gauss-window", gauss_window_cos(d), "smooth, Gaussian decay");
  c.add_symbolic("cos-probe", SymbolicField::sine(d, 1 + d, 1.0, 0.5 * std::numbers::pi),
                 "smooth, bounded");
  c.add(CorpusEntry{"abs-v-half",
                    make_handle([](const Point& z) { return std::sqrt(std::abs(z.v(0))); },
                                "abs-v-half"),
                    "C^{1/2} in v_1", false});
  c.add(CorpusEntry{"abs-v",
                    make_handle([](const Point& z) { return std::abs(z.v(0)); }, "abs-v"),
                    "Lipschitz in v_1", false});
  return c;
}

}  // namespace kh
