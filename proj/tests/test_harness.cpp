#include "kh/harness.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace kh;

TEST_CASE("group verification and the mutation hook", "[harness]") {
  const Anisotropy a(2, 1.5);
  const json good = verify_group(a, 1, 500);
  CHECK(good["pass"].get<bool>());
  CHECK(good["failed"].empty());
  const json bad = verify_group(a, 1, 500, broken_compose);
  CHECK_FALSE(bad["pass"].get<bool>());
  bool assoc = false;
  for (const auto& f : bad["failed"]) assoc |= f == "associativity";
  CHECK(assoc);
}

TEST_CASE("index examples", "[harness]") {
  const json r = index_examples();
  CHECK(r["pass"].get<bool>());
  std::vector<std::size_t> sizes;
  for (const auto& c : r["cases"])
    if (c["theta"].get<double>() > 1.0) sizes.push_back(c["size"]);
  REQUIRE(sizes.size() == 12);
  CHECK(sizes[0] == 2);
  CHECK(sizes[3] == 3);
  CHECK(sizes[6] == 4);
  CHECK(sizes[9] == 6);
}

TEST_CASE("random drifts", "[harness]") {
  for (int d : {1, 2, 3}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const DriftMatrix b = random_drift(d, seed);
      CHECK(b.norm() <= 1.0 + 1e-12);
      CHECK(b.b12_full_rank());
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.block(1, 2));
      CHECK(svd.singularValues().minCoeff() >= 0.2);
    }
  }
}

TEST_CASE("suites are deterministic", "[harness]") {
  CHECK(taylor_exactness(4.0 / 3.0, 2.6, 3, 5).dump() == taylor_exactness(4.0 / 3.0, 2.6, 3, 5).dump());
  CHECK(connect_suite(2.0, 2, 3, 5).dump() == connect_suite(2.0, 2, 3, 5).dump());
  CHECK(taylor_exactness(2.0, 2.9, 3, 5)["pass"].get<bool>());
  CHECK(four_flow_identity(1.0 / 3.0, 2, 3, 100)["pass"].get<bool>());
  const json s = taylor_scaling(1.0 / 3.0, 1.2, 1, "sin-mix", 3);
  CHECK(s["pass"].get<bool>());
  CHECK(s.contains("generic_centers"));
}
