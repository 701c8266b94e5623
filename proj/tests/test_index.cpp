#include "kh/error.hpp"
#include "kh/index.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <tuple>
#include <vector>

using namespace kh;
using Catch::Approx;

namespace {

std::vector<std::tuple<int, int, int>> triples(const Anisotropy& a, double alpha) {
  std::vector<std::tuple<int, int, int>> out;
  for (const auto& t : enumerate_terms(a, alpha)) out.emplace_back(t.k, t.gamma[0], t.beta[0]);
  return out;
}

void check_values(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == Approx(want[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("index set examples", "[index]") {
  check_values(index_set(Anisotropy(1, 1.0 / 3.0), 1.01), {0, 1.0 / 3, 2.0 / 3, 1});
  check_values(index_set(Anisotropy(1, 4.0 / 3.0), 2.7), {0, 1, 4.0 / 3, 2, 7.0 / 3, 8.0 / 3});
  check_values(index_set(Anisotropy(1, 1.0), 3.5), {0, 1, 2, 3});
}

TEST_CASE("term enumeration examples", "[index]") {
  for (double th : {0.25, 1.0, 3.0}) {
    const Anisotropy a(2, th);
    const auto terms = enumerate_terms(a, std::min(1.0, th));
    REQUIRE(terms.size() == 1);
    CHECK(terms[0] == TermIndex::zero(2));
  }
  const Anisotropy a(1, 4.0 / 3.0);
  using T = std::tuple<int, int, int>;
  CHECK(triples(a, 2.6) == std::vector<T>{{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 2}, {0, 1, 0}, {1, 0, 1}});
  CHECK(triples(a, 2.0) == std::vector<T>{{0, 0, 0}, {0, 0, 1}, {1, 0, 0}});
}

TEST_CASE("term weights and coefficients", "[index]") {
  const Anisotropy a(2, 2.0);
  const TermIndex t = TermIndex::make(2, {1, 0}, {2, 1}, a);
  CHECK(t.weight == Approx(2 * 2.0 + 3.0 + 3.0));
  CHECK(t.factorial_coefficient() == Approx(2.0 * 1.0 * 2.0));
  CHECK_THROWS_AS(TermIndex::make(-1, {0, 0}, {0, 0}, a), Error);
  CHECK_THROWS_AS(TermIndex::make(0, {0}, {0, 0}, a), Error);
}

TEST_CASE("enumeration is ordered and complete", "[index][property]") {
  for (double th : {1.0 / 3.0, 0.7, 1.0, 4.0 / 3.0, 2.0}) {
    for (int d : {1, 2}) {
      const Anisotropy a(d, th);
      for (double alpha : {0.5, 1.7, 3.1}) {
        const auto terms = enumerate_terms(a, alpha);
        for (std::size_t i = 0; i < terms.size(); ++i) {
          CHECK(below_cutoff(terms[i].weight, alpha));
          if (i > 0) CHECK(terms[i - 1].weight <= terms[i].weight + 1e-12);
        }
        // Brute force count.
        std::size_t count = 0;
        for (int k = 0; k < 20; ++k)
          for (int g0 = 0; g0 < 6; ++g0)
            for (int g1 = 0; g1 < (d > 1 ? 6 : 1); ++g1)
              for (int b0 = 0; b0 < 8; ++b0)
                for (int b1 = 0; b1 < (d > 1 ? 8 : 1); ++b1)
                  if (below_cutoff(th * k + (1 + th) * (g0 + g1) + b0 + b1, alpha)) ++count;
        CHECK(terms.size() == count);
      }
    }
  }
}

TEST_CASE("enumeration is constant inside a gap between weights", "[index][property]") {
  const Anisotropy a(1, 4.0 / 3.0);
  const auto w = achievable_weights(a, 4.0);
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double lo = w[i - 1], hi = w[i];
    CHECK(triples(a, lo + 1e-9) == triples(a, 0.5 * (lo + hi)));
    CHECK(triples(a, hi) == triples(a, 0.5 * (lo + hi)));
  }
  CHECK(next_weight(a, 2.6) == Approx(8.0 / 3.0));
  CHECK(next_weight(a, 8.0 / 3.0) == Approx(8.0 / 3.0));
}

TEST_CASE("bad cutoffs are rejected", "[index]") {
  CHECK_THROWS_AS(enumerate_terms(Anisotropy(1, 1.0), 0.0), Error);
  CHECK_THROWS_AS(enumerate_terms(Anisotropy(1, 1.0), -1.0), Error);
}
