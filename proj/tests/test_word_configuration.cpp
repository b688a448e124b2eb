#include <doctest.h>

#include <random>

#include "infbin/configuration.hpp"
#include "infbin/rng.hpp"
#include "infbin/word.hpp"
#include "oracle.hpp"

using namespace infbin;

TEST_CASE("word parsing and slicing") {
  const Word w = Word::parse(" 2, 3 ,2,2");
  CHECK(w == Word{2, 3, 2, 2});
  CHECK(w.to_string() == "2,3,2,2");
  CHECK(w.max_letter() == 3);
  CHECK(w.suffix(1) == Word{3, 2, 2});
  CHECK(w.suffix(4).empty());
  CHECK(w.prefix(2) == Word{2, 3});
  CHECK(w.prepended(5) == Word{5, 2, 3, 2, 2});
  CHECK(w.appended(1) == Word{2, 3, 2, 2, 1});
  CHECK(Word{1} + Word{2} == Word{1, 2});
  CHECK(Word::parse("").empty());
  CHECK(Word{1, 2} < Word{1, 3});
}

TEST_CASE("word rejects bad letters") {
  CHECK_THROWS_AS(Word({0}), InvalidArgument);
  CHECK_THROWS_AS(Word({-3}), InvalidArgument);
  CHECK_THROWS_AS(Word::parse("1,,2"), InvalidArgument);
  CHECK_THROWS_AS(Word::parse("1,x"), InvalidArgument);
  CHECK_THROWS_AS(Word::parse("0"), InvalidArgument);
}

TEST_CASE("configuration basics") {
  const auto x = Configuration::minimal(0);
  CHECK(x.front() == 0);
  CHECK(x.count(0) == 1);
  CHECK(x.count(-40) == 1);
  CHECK(x.count(1) == 0);
  CHECK(x.count_at_or_right(-2) == 3);
  CHECK(x.bin_of_kth_rightmost(1) == 0);
  CHECK(x.bin_of_kth_rightmost(7) == -6);
  CHECK_THROWS_AS(Configuration(0, {}), InvalidArgument);
  CHECK_THROWS_AS(Configuration(0, {1, 0}), InvalidArgument);
  CHECK_THROWS_AS(x.bin_of_kth_rightmost(0), InvalidArgument);
}

TEST_CASE("moves on a small configuration") {
  // bins ... 1 | 2 3 1 (front at 4)
  Configuration x(4, {2, 3, 1});
  CHECK(x.count_at_or_right(3) == 4);
  CHECK(x.bin_of_kth_rightmost(1) == 4);
  CHECK(x.bin_of_kth_rightmost(2) == 3);
  CHECK(x.bin_of_kth_rightmost(4) == 3);
  CHECK(x.bin_of_kth_rightmost(5) == 2);
  CHECK(x.bin_of_kth_rightmost(7) == 1);
  CHECK(x.bin_of_kth_rightmost(8) == 0);

  CHECK_FALSE(x.advance(2));  // ball after bin 3 -> bin 4
  CHECK(x.scenery(3) == std::vector<BallCount>{2, 3, 2});
  CHECK(x.advance(1));
  CHECK(x.front() == 5);
  CHECK(x.scenery(2) == std::vector<BallCount>{2, 1});
  CHECK_FALSE(x.advance(20));  // reaches into the tail
  CHECK(x.scenery(20).size() == 20);
}

TEST_CASE("shift and scenery commute with moves") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<BallCount> window(1 + rng() % 5);
    for (auto& c : window) c = 1 + static_cast<BallCount>(rng() % 3);
    const Configuration x(static_cast<BinIndex>(rng() % 7), window);
    const BinIndex r = static_cast<BinIndex>(rng() % 5);
    const Letter k = 1 + static_cast<Letter>(rng() % 9);
    CHECK(apply_move(shift(x, r), k) == shift(apply_move(x, k), r));
    CHECK(scenery(shift(x, r), 6) == scenery(x, 6));
    CHECK(shift(x, r).front() == x.front() - r);
  }
}

TEST_CASE("tail handling matches a materialized configuration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<BallCount> window(1 + rng() % 4);
    for (auto& c : window) c = 1 + static_cast<BallCount>(rng() % 3);
    Configuration x(0, window);
    auto ref = oracle::NaiveConfig::make(0, window);
    for (int step = 0; step < 30; ++step) {
      const Letter k = 1 + static_cast<Letter>(rng() % 12);
      CHECK(x.bin_of_kth_rightmost(k) == ref.bin_of(k));
      CHECK(x.advance(k) == ref.move(k));
    }
    CHECK(x.front() == ref.front);
    CHECK(x.scenery(25) == ref.scenery(25));
    for (BinIndex b = x.front() - 30; b <= x.front() + 1; ++b) CHECK(x.count(b) == ref.count(b));
  }
}

TEST_CASE("advance guarantee: a word of a's moves the front within a(a-1)/2 + 1 steps") {
  for (Letter a = 1; a <= 6; ++a) {
    for (const auto& window : {std::vector<BallCount>{1}, std::vector<BallCount>{3, 1, 4}, std::vector<BallCount>{2, 2}}) {
      Configuration x(0, window);
      bool advanced = false;
      for (Letter t = 0; t < a * (a - 1) / 2 + 1 && !advanced; ++t) advanced = x.advance(a);
      CHECK(advanced);
    }
  }
}

TEST_CASE("normalization, equality and JSON") {
  const Configuration x(3, {1, 1, 2, 1});
  const auto n = x.normalized();
  CHECK(n.depth() == 2);
  CHECK(n == x);
  CHECK_FALSE(Configuration(3, {2, 1}) == Configuration(3, {1, 1}));
  const auto back = Configuration::from_json(x.to_json());
  CHECK(back == x);
  CHECK(back.window() == x.window());
  CHECK_THROWS_AS(Configuration::from_json("{\"front\":0}"), InvalidArgument);
  CHECK_THROWS_AS(Configuration::from_json("not json"), InvalidArgument);
}

TEST_CASE("counter-based stream is random access") {
  IndexedStream s(42, 3);
  CounterRng seq(42, 3);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(seq() == s.bits(i));
  CHECK(IndexedStream(42, 4).bits(0) != s.bits(0));
  CHECK(IndexedStream(43, 3).bits(0) != s.bits(0));
  CHECK(s.uniform_at(-1) == s.uniform(~std::uint64_t{0}));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = s.uniform(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
