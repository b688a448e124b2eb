#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "infbin/be_graph.hpp"
#include "infbin/simulator.hpp"
#include "oracle.hpp"

using namespace infbin;

TEST_CASE("extreme edge probabilities") {
  CHECK(longest_path(10, 1.0, 1).longest == 9);
  CHECK(longest_path(10, 0.0, 1).longest == 0);
  CHECK(longest_path(1, 0.5, 1).longest == 0);
  const auto full = estimate_C(1.0, 1000, 5, 2);
  CHECK(full.estimate == 1.0 - 1.0 / 1000);
  CHECK(full.stderr_ == 0.0);
  CHECK_THROWS_AS(longest_path(0, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(longest_path(5, 1.5, 1), InvalidArgument);
  CHECK_THROWS_AS(estimate_C(0.5, 10, 0, 1), InvalidArgument);
}

TEST_CASE("two vertices") {
  double sum = 0;
  const int runs = 100000;
  for (int r = 0; r < runs; ++r) sum += static_cast<double>(longest_path(2, 0.5, 4, false, r).longest);
  CHECK(std::abs(sum / runs - 0.5) <= 0.005);
}

TEST_CASE("fast longest path matches the pairwise recursion") {
  for (double p : {0.05, 0.3, 0.5, 0.9}) {
    for (std::uint64_t stream = 0; stream < 5; ++stream) {
      const auto run = longest_path(300, p, 17, true, stream);
      const auto expect = oracle::naive_longest(300, p, EdgeUniforms(17, stream));
      CHECK(run.per_vertex == expect);
      CHECK(run.longest == *std::max_element(expect.begin(), expect.end()));
    }
  }
}

TEST_CASE("longest path is monotone in p on shared randomness") {
  for (std::uint64_t stream = 0; stream < 10; ++stream) {
    std::int64_t prev = 0;
    for (double p = 0.0; p <= 1.0; p += 0.05) {
      const auto l = longest_path(500, p, 3, false, stream).longest;
      CHECK(l >= prev);
      prev = l;
    }
  }
}

TEST_CASE("front trajectory") {
  const auto full = fk_coupling_trajectory(20, 1.0, 1);
  for (std::size_t j = 0; j < full.size(); ++j) CHECK(full[j] == static_cast<std::int64_t>(j));
  const auto traj = fk_coupling_trajectory(5000, 0.4, 8, 2);
  REQUIRE(traj.size() == 5000);
  CHECK(traj.front() == 0);
  for (std::size_t j = 1; j < traj.size(); ++j) {
    const auto step = traj[j] - traj[j - 1];
    CHECK((step == 0 || step == 1));
  }
  CHECK(traj.back() == longest_path(5000, 0.4, 8, false, 2).longest);

  // After j vertices the value multiset is a configuration of j balls whose
  // bins left of the front are all occupied.
  const auto run = longest_path(2000, 0.3, 5, true, 1);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(run.longest + 1), 0);
  for (auto v : run.per_vertex) ++counts[static_cast<std::size_t>(v)];
  CHECK(std::all_of(counts.begin(), counts.end(), [](std::int64_t c) { return c >= 1; }));
}

TEST_CASE("estimates") {
  const auto small = estimate_C(0.05, 20000, 10, 1);
  CHECK(small.estimate / 0.05 > 1.0);
  CHECK(small.estimate / 0.05 < std::exp(1.0));

  // Superadditivity signature.
  const auto n1 = estimate_C(0.5, 2000, 40, 2);
  const auto n2 = estimate_C(0.5, 4000, 40, 3);
  CHECK(n2.estimate >= n1.estimate - 2 * std::hypot(n1.stderr_, n2.stderr_));

  CHECK(estimate_C(0.5, 3000, 12, 4, 1).estimate == estimate_C(0.5, 3000, 12, 4, 3).estimate);
}
