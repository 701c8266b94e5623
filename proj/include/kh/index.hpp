#pragma once

// Jump indices {k + j theta} and the Taylor terms (k, gamma, beta) whose
// anisotropic weight theta*k + (1+theta)|gamma| + |beta| lies below a cutoff.

#include "kh/group.hpp"

#include <string>
#include <vector>

namespace kh {

using MultiIndex = std::vector<int>;

int length(const MultiIndex& m);
double factorial(const MultiIndex& m);
double factorial(int n);

struct TermIndex {
  int k = 0;          // order of Y (outermost)
  MultiIndex gamma;   // x-derivative orders
  MultiIndex beta;    // v-derivative orders
  double weight = 0.0;

  static TermIndex make(int k, MultiIndex gamma, MultiIndex beta, const Anisotropy& a);
  static TermIndex zero(int d);

  double compute_weight(double theta) const;
  /// k! gamma! beta!
  double factorial_coefficient() const;
  std::string str() const;
};

bool operator==(const TermIndex& a, const TermIndex& b);

/// Relative tolerance for weight/cutoff comparisons and deduplication.
inline constexpr double kWeightTol = 1e-12;

/// True iff weight < cutoff once the relative tolerance is applied.
bool below_cutoff(double weight, double cutoff);

/// Values k + j theta < cutoff, ascending and deduplicated.
std::vector<double> index_set(const Anisotropy& a, double cutoff);

/// Every TermIndex with weight < alpha, ordered by (weight, k, gamma, beta).
std::vector<TermIndex> enumerate_terms(const Anisotropy& a, double alpha);

/// Distinct achievable weights theta k + (1+theta) n + m (k,n,m >= 0) below `cutoff`.
std::vector<double> achievable_weights(const Anisotropy& a, double cutoff);

/// Smallest achievable weight >= alpha (first weight excluded from T_alpha).
double next_weight(const Anisotropy& a, double alpha);

}  // namespace kh
