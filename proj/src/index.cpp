#include "kh/index.hpp"

#include "kh/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <tuple>

namespace kh {

namespace {

bool same_value(double a, double b) {
  return std::abs(a - b) <= kWeightTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::vector<double> dedup_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double w : values) {
    if (out.empty() || !same_value(out.back(), w)) out.push_back(w);
  }
  return out;
}

/// All multi-indices of dimension d with |m| == order, lexicographic.
void multi_indices(int d, int order, std::vector<MultiIndex>& out) {
  MultiIndex cur(d, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int i = left; i >= 0; --i) {
      cur[pos] = i;
      rec(pos + 1, left - i);
    }
  };
  rec(0, order);
}

}  // namespace

int length(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), 0); }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double factorial(const MultiIndex& m) {
  double f = 1.0;
  for (int e : m) f *= factorial(e);
  return f;
}

TermIndex TermIndex::make(int k, MultiIndex gamma, MultiIndex beta, const Anisotropy& a) {
  if (static_cast<int>(gamma.size()) != a.d() || static_cast<int>(beta.size()) != a.d()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length must equal d");
  }
  if (k < 0 || std::any_of(gamma.begin(), gamma.end(), [](int e) { return e < 0; }) ||
      std::any_of(beta.begin(), beta.end(), [](int e) { return e < 0; })) {
    throw Error(ErrorCode::InvalidArgument, "term orders must be nonnegative");
  }
  TermIndex ti{k, std::move(gamma), std::move(beta), 0.0};
  ti.weight = ti.compute_weight(a.theta());
  return ti;
}

TermIndex TermIndex::zero(int d) { return TermIndex{0, MultiIndex(d, 0), MultiIndex(d, 0), 0.0}; }

double TermIndex::compute_weight(double theta) const {
  return theta * k + (1.0 + theta) * length(gamma) + length(beta);
}

double TermIndex::factorial_coefficient() const {
  return factorial(k) * factorial(gamma) * factorial(beta);
}

std::string TermIndex::str() const {
  std::ostringstream os;
  os << "(k=" << k << ", gamma=[";
  for (std::size_t i = 0; i < gamma.size(); ++i) os << (i ? "," : "") << gamma[i];
  os << "], beta=[";
  for (std::size_t i = 0; i < beta.size(); ++i) os << (i ? "," : "") << beta[i];
  os << "])";
  return os.str();
}

bool operator==(const TermIndex& a, const TermIndex& b) {
  return a.k == b.k && a.gamma == b.gamma && a.beta == b.beta;
}

bool below_cutoff(double weight, double cutoff) {
  return weight < cutoff - kWeightTol * std::max(1.0, std::abs(cutoff));
}

std::vector<double> index_set(const Anisotropy& a, double cutoff) {
  if (!(cutoff > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cutoff must be positive", std::to_string(cutoff));
  }
  const double th = a.theta();
  std::vector<double> values;
  for (int j = 0; j * th < cutoff + 1.0; ++j) {
    for (int k = 0; k + j * th < cutoff + 1.0; ++k) {
      const double val = k + j * th;
      if (below_cutoff(val, cutoff)) values.push_back(val);
    }
  }
  return dedup_sorted(std::move(values));
}

std::vector<double> achievable_weights(const Anisotropy& a, double cutoff) {
  const double th = a.theta();
  std::vector<double> values;
  for (int k = 0; k * th < cutoff; ++k)
    for (int n = 0; k * th + n * (1.0 + th) < cutoff; ++n)
      for (int m = 0; k * th + n * (1.0 + th) + m < cutoff; ++m) values.push_back(k * th + n * (1.0 + th) + m);
  return dedup_sorted(std::move(values));
}

double next_weight(const Anisotropy& a, double alpha) {
  for (double w : achievable_weights(a, alpha + 2.0 + a.theta())) {
    if (!below_cutoff(w, alpha)) return w;
  }
  return alpha;
}

std::vector<TermIndex> enumerate_terms(const Anisotropy& a, double alpha) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive", std::to_string(alpha));
  }
  const int d = a.d();
  const double th = a.theta();
  std::vector<TermIndex> terms;
  for (int k = 0; below_cutoff(th * k, alpha); ++k) {
    for (int g = 0; below_cutoff(th * k + (1.0 + th) * g, alpha); ++g) {
      for (int b = 0; below_cutoff(th * k + (1.0 + th) * g + b, alpha); ++b) {
        std::vector<MultiIndex> gammas, betas;
        multi_indices(d, g, gammas);
        multi_indices(d, b, betas);
        for (const auto& gm : gammas)
          for (const auto& bt : betas) terms.push_back(TermIndex::make(k, gm, bt, a));
      }
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const TermIndex& p, const TermIndex& q) {
    if (!same_value(p.weight, q.weight)) return p.weight < q.weight;
    return std::tie(p.k, p.gamma, p.beta) < std::tie(q.k, q.gamma, q.beta);
  });
  return terms;
}

}  // namespace kh
