#include <doctest.h>

#include <cmath>

#include "infbin/series.hpp"
#include "infbin/simulator.hpp"

using namespace infbin;

namespace {

std::size_t exact_tau(const LetterStream& letters, std::size_t K, std::int64_t time) {
  for (std::int64_t n = 0;; ++n)
    if (coupling_number(letters.window(time - n, time)) >= K) return static_cast<std::size_t>(n);
}

}  // namespace

TEST_CASE("forward runs of degenerate laws") {
  const auto one = run_forward(MoveDistribution::dirac(1), Configuration::minimal(), 1000, 7);
  CHECK(one.speed_estimate == 1.0);
  CHECK(one.front_final == 1000);
  const auto two = run_forward(MoveDistribution::dirac(2), Configuration::minimal(), 100000, 7);
  CHECK(std::abs(two.speed_estimate - 0.5) <= 0.01);
  const auto three = run_forward(MoveDistribution::dirac(3), Configuration(0, {4, 1, 2}), 60000, 7);
  CHECK(std::abs(three.speed_estimate - 1.0 / 3.0) <= 0.01);
  CHECK_THROWS_AS(run_forward(MoveDistribution::dirac(1), Configuration::minimal(), 0, 1), InvalidArgument);
}

TEST_CASE("forward runs are reproducible and thread independent") {
  const auto mu = MoveDistribution::geometric(0.5);
  const auto a = run_forward(mu, Configuration::minimal(), 5000, 3, 2);
  const auto b = run_forward(mu, Configuration::minimal(), 5000, 3, 2);
  CHECK(a.front_final == b.front_final);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.speed_estimate >= 0.0);
  CHECK(a.speed_estimate <= 1.0);
  const auto e1 = forward_ensemble(mu, Configuration::minimal(), 2000, 16, 9, 1);
  const auto e4 = forward_ensemble(mu, Configuration::minimal(), 2000, 16, 9, 4);
  CHECK(e1.estimate == e4.estimate);
  CHECK(e1.stderr_ == e4.stderr_);
}

TEST_CASE("perfect samples of the Dirac(1) chain") {
  const LetterStream ones(MoveDistribution::dirac(1), 1);
  const auto s = perfect_sample_at(ones, 3, 0);
  CHECK(s.scenery == std::vector<BallCount>{1, 1, 1});
  CHECK(s.tau <= 4);
  CHECK(static_cast<std::size_t>(s.tau) == exact_tau(ones, 3, 0));
  CHECK_THROWS_AS(perfect_sample(MoveDistribution::dirac(2), 1, 1), InvalidArgument);
  CHECK_THROWS_AS(perfect_sample(MoveDistribution::uniform(2), 0, 1), InvalidArgument);
}

TEST_CASE("certified suffixes couple every start configuration") {
  const auto mu = MoveDistribution::uniform(3);
  const std::vector<Configuration> starts{Configuration::minimal(), Configuration(0, {3, 1, 2}),
                                          Configuration(0, {1, 5}), Configuration(2, {2, 2, 2, 2})};
  for (std::uint64_t r = 0; r < 60; ++r) {
    const LetterStream letters(mu, 5, r);
    for (std::size_t K : {1, 2, 3}) {
      const auto s = perfect_sample_at(letters, K, 0);
      REQUIRE(s.scenery.size() == K);
      const Word suffix = letters.window(-s.tau, 0);
      for (const auto& x : starts) CHECK(apply_word(x, suffix).scenery(K) == s.scenery);
      CHECK(static_cast<std::size_t>(s.tau) >= exact_tau(letters, K, 0));
      PerfectOptions later;
      later.start_horizon = 64;
      const auto again = perfect_sample_at(letters, K, 0, later);
      CHECK(again.scenery == s.scenery);
      CHECK(again.tau == s.tau);
    }
    CHECK(perfect_sample_at(letters, 1, 0).tau <= perfect_sample_at(letters, 2, 0).tau);
  }
}

TEST_CASE("horizon limit") {
  PerfectOptions tight;
  tight.max_horizon = 2;
  CHECK_THROWS_AS(perfect_sample(MoveDistribution::uniform(3), 6, 1, 0, tight), HorizonError);
  try {
    perfect_sample(MoveDistribution::uniform(3), 6, 1, 0, tight);
  } catch (const HorizonError& e) {
    CHECK(e.horizon == 2);
    CHECK(e.depth_reached < 6);
  }
}

TEST_CASE("stationary speed estimator") {
  const auto one = stationary_speed(MoveDistribution::geometric(1.0), 500, 1);
  CHECK(one.estimate == 1.0);

  const auto u2 = MoveDistribution::uniform(2);
  const auto st = stationary_speed(u2, 100000, 2);
  const auto b = uniform_speed_terms(2, 12);
  CHECK(st.estimate >= b.lower - 3 * st.stderr_);
  CHECK(st.estimate <= b.upper + 3 * st.stderr_);

  const auto g3 = MoveDistribution::geometric(0.3);
  const auto s3 = stationary_speed(g3, 100000, 3);
  const auto f3 = forward_ensemble(g3, Configuration::minimal(), 100000, 30, 3);
  CHECK(std::abs(s3.estimate - f3.estimate) <= 3 * std::hypot(s3.stderr_, f3.stderr_));

  CHECK(stationary_speed(u2, 3000, 4, 1).estimate == stationary_speed(u2, 3000, 4, 3).estimate);
}

TEST_CASE("stationary front bin matches the long-run forward average") {
  const auto mu = MoveDistribution::uniform(2);
  const auto ens = perfect_ensemble(mu, 2, 40000, 6);
  Configuration x = Configuration::minimal();
  const LetterStream letters(mu, 6, 999);
  double sum = 0;
  const std::int64_t steps = 400000;
  for (std::int64_t t = 1; t <= steps; ++t) {
    x.advance(letters.at(t));
    sum += static_cast<double>(x.count(x.front()));
  }
  CHECK(std::abs(ens.mean_scenery.back() - sum / steps) < 0.02);
  CHECK(ens.tau.taus.size() == 40000);
}

TEST_CASE("coupling convergence") {
  const auto c = coupling_convergence_check(MoveDistribution::dirac(1), Configuration::minimal(), 2, 50, 1);
  REQUIRE(c.coupled_at.has_value());
  CHECK(*c.coupled_at <= 2);
  CHECK(c.stationary_front == 50);

  const auto mu = MoveDistribution::uniform(2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = coupling_convergence_check(mu, Configuration(0, {5, 5, 5}), 2, 10000, seed);
    CHECK(r.coupled_at.has_value());
    CHECK(r.first_agreement.has_value());
  }
}

TEST_CASE("tau tail statistics") {
  const auto t = tau_tail(MoveDistribution::geometric(0.9), 1, 10000, 1);
  CHECK(t.median() <= 8);
  double prev = 1.0;
  for (std::int64_t n = 0; n <= 40; ++n) {
    CHECK(t.survival(n) <= prev);
    prev = t.survival(n);
  }
  std::uint64_t total = 0;
  for (const auto& [tau, count] : t.histogram) total += count;
  CHECK(total == 10000);
  const auto t3 = tau_tail(MoveDistribution::geometric(0.9), 1, 10000, 1, 3);
  CHECK(t3.taus == t.taus);
}
