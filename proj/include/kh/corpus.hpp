#pragma once

// Closed-form test functions. Entries backed by SymbolicField carry exact
// derivative oracles; those are checked against central differences at
// registration.

#include "kh/field.hpp"
#include "kh/group.hpp"

#include <map>
#include <string>
#include <vector>

namespace kh {

struct CorpusEntry {
  std::string id;
  FunctionHandle handle;
  std::string regularity;  // documented class, e.g. "smooth", "C^{1/2} in v"
  bool exact_oracle = false;
};

/// sin(t) + sum_i sin(x_i) + sum_i sin(v_i)
SymbolicField sin_mix(int d);
/// cos(v_1) exp(-(t^2 + |x|^2 + |v|^2) / 4)
SymbolicField gauss_window_cos(int d);
/// t^a x^gamma v^beta for every exponent with theta a + (1+theta)|gamma| + |beta| <= max_weight.
std::vector<std::pair<std::string, SymbolicField>> weighted_monomials(const Anisotropy& a,
                                                                     double max_weight);
/// |x_1|^e exp(-(|x|^2 + |v|^2)): Hoelder of order e in x at x_1 = 0.
FunctionHandle holder_x_profile(int d, double e);

class Corpus {
 public:
  /// const, monomials of weight <= 4, sin/cos in each variable, sin-mix,
  /// gauss-window, cos-probe and |v_1|^{1/2}, |v_1| kinks.
  static Corpus standard(const Anisotropy& a);

  /// Registers an entry; symbolic entries are cross-validated first.
  void add(CorpusEntry e);
  void add_symbolic(const std::string& id, const SymbolicField& f, std::string regularity);

  const CorpusEntry& get(const std::string& id) const;
  bool contains(const std::string& id) const { return entries_.count(id) > 0; }
  std::vector<std::string> ids() const;

 private:
  explicit Corpus(const Anisotropy& a) : a_(a) {}
  Anisotropy a_;
  std::map<std::string, CorpusEntry> entries_;
};

/// Compares first-order oracles (Y, Z_i, d_{x_i}) with central differences
/// at 10 seeded points of the unit box; throws on mismatch.
void cross_validate(const FunctionHandle& u, const Anisotropy& a, unsigned seed = 7);

}  // namespace kh
