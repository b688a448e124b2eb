#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "infbin/configuration.hpp"
#include "infbin/word.hpp"

namespace infbin {

enum class Verdict { Good, Bad, Neither };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

struct Classification {
  Verdict verdict = Verdict::Neither;
  /// Set iff verdict != Neither: no strict suffix shares the verdict.
  std::optional<bool> minimal;

  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Largest letter accepted by the exhaustive classifiers (2^(h-1) start patterns).
inline constexpr Letter kMaxExactLetter = 30;

/// max_i (1 + alpha_i - i), clamped below at 1. Throws on the empty word.
Letter horizon(const Word& alpha);

/// All 2^(h-1) placements of the rightmost h balls with the front at 0: ball 1
/// sits in bin 0 and each next ball is in the same bin as its predecessor or
/// one bin further left. Bit i of the enumeration index selects "further left"
/// for ball i + 2. The window starts at the deepest placed ball.
std::vector<Configuration> test_set(Letter h);

/// Whether the last move of alpha, started from x, makes the front advance.
bool is_x_good(const Word& alpha, const Configuration& x);

/// 1[alpha in P_X] - 1[alpha_2.. in P_X]; the empty suffix is never X-good.
int epsilon(const Word& alpha, const Configuration& x);

/// Verdict store shared by classifications; safe for concurrent use.
class VerdictCache {
 public:
  std::optional<Verdict> find(const Word& w) const;
  void insert(const Word& w, Verdict v);
  std::size_t size() const;
  /// Snapshot in key order.
  std::vector<std::pair<Word, Verdict>> entries() const;

 private:
  mutable std::mutex mutex_;
  std::map<Word, Verdict> verdicts_;
};

/// Good / Bad / Neither by testing against test_set(horizon(alpha)).
Verdict verdict_of(const Word& alpha, VerdictCache* cache = nullptr);

/// Verdict plus minimality (each strict suffix is classified as well).
Classification classify(const Word& alpha, VerdictCache* cache = nullptr);

/// Same as classify() but with an explicit test-set depth (>= horizon) for
/// cross-checking the horizon rule.
Verdict verdict_with_depth(const Word& alpha, Letter depth);

/// Exact coupling number: the largest K such that the K-scenery after gamma
/// does not depend on the start configuration.
///
/// A start configuration matters only through its rightmost h = max letter
/// balls, so gamma is run from every placement in test_set(h) and from a twin
/// of each with one extra ball in its deepest placed bin; that bin (and all
/// bins left of it) is the first place where unseen start data shows through.
std::size_t coupling_number(const Word& gamma);

/// Bins of the front scenery that are identical for every start
/// configuration, maintained letter by letter.
struct TrackerState {
  /// Counts of the rightmost D bins, left to right; back() is the front bin.
  std::deque<BallCount> determined;
  /// Front advances seen while tracking.
  std::int64_t front_shift = 0;
  BallCount balls = 0;

  std::size_t depth() const noexcept { return determined.size(); }

  /// In-place tracker_step(); returns true iff the front advanced.
  bool step(Letter a);

  friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

TrackerState tracker_init();

/// One letter of the update rule:
///  - a <= M: the a-th ball is in a known bin; the new ball lands in the next
///    bin (a new front bin if it was the front).
///  - a == M + 1: the a-th ball is the rightmost ball of the first unknown bin,
///    which is never empty, so the new ball lands in the deepest known bin (or
///    opens a new front bin when nothing is known yet).
///  - a > M + 1: the deepest known bin may or may not receive the ball; it is
///    forgotten.
TrackerState tracker_step(TrackerState s, Letter a);

/// Fold of tracker_step over gamma from tracker_init().
TrackerState tracker_run(const Word& gamma);

/// Front-advance truth table of a word over placements of the rightmost
/// `depth` balls (same bit encoding as test_set). Prepending a letter maps one
/// table to the next without replaying the word, and tables that coincide have
/// identical subtrees of left extensions.
class AdvanceTable {
 public:
  /// Table of the one-letter word (a).
  static AdvanceTable single(Letter a);

  /// Table of a . alpha given this table for alpha.
  AdvanceTable prepend(Letter a) const;

  Verdict verdict() const noexcept;
  Letter depth() const noexcept { return depth_; }
  std::size_t patterns() const noexcept { return std::size_t{1} << (depth_ - 1); }
  bool advances(std::uint64_t pattern) const noexcept {
    return (bits_[pattern >> 6] >> (pattern & 63)) & 1U;
  }

  friend bool operator==(const AdvanceTable&, const AdvanceTable&) = default;
  friend auto operator<=>(const AdvanceTable&, const AdvanceTable&) = default;

  /// Ball-gap pattern of the rightmost balls after the move of type a, when
  /// the start pattern covers at least a balls.
  static std::uint64_t move_pattern(std::uint64_t pattern, Letter a) noexcept;

 private:
  AdvanceTable(Letter depth, std::vector<std::uint64_t> bits);
  /// Drops top gap bits the table does not depend on.
  void reduce();

  Letter depth_ = 1;
  std::vector<std::uint64_t> bits_;
};

/// Verdict via the table recursion (same answer as verdict_of()).
Verdict table_verdict(const Word& alpha);

}  // namespace infbin
