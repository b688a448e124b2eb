#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infbin/word.hpp"

namespace infbin {

using BallCount = std::int64_t;

/// How bins left of the explicit window are filled.
enum class TailPolicy { OneBallPerBin };

/// An infinite-bin configuration: every bin at or left of the front is
/// non-empty, every bin right of it is empty.
///
/// Only the rightmost `depth()` bins are stored; they cover the bin indices
/// `front - depth + 1 .. front` and `window().back()` is the front bin. All
/// bins further left hold exactly one ball. The window is extended lazily when
/// a move reaches into the tail, so every operation is exact.
class Configuration {
 public:
  /// Smallest configuration with the given front: one ball in every bin <= front.
  static Configuration minimal(BinIndex front = 0);

  /// Throws InvalidArgument if the window is empty or holds a count < 1.
  Configuration(BinIndex front, std::vector<BallCount> window, TailPolicy tail = TailPolicy::OneBallPerBin);

  BinIndex front() const noexcept { return front_; }
  const std::vector<BallCount>& window() const noexcept { return window_; }
  std::size_t depth() const noexcept { return window_.size(); }
  TailPolicy tail() const noexcept { return tail_; }
  /// Balls held by the window.
  BallCount window_balls() const noexcept { return window_balls_; }
  /// Leftmost bin index covered by the window.
  BinIndex window_start() const noexcept { return front_ - static_cast<BinIndex>(window_.size()) + 1; }

  /// Balls in bin `bin`.
  BallCount count(BinIndex bin) const noexcept;

  /// Number of balls in or right of bin k.
  BallCount count_at_or_right(BinIndex k) const noexcept;

  /// Index of the bin holding the k-th rightmost ball (k >= 1).
  BinIndex bin_of_kth_rightmost(Letter k) const;

  /// Applies the move of type k in place; returns true iff the front advanced.
  bool advance(Letter k);

  /// Counts of bins front-K+1 .. front, read from the tail when K > depth().
  std::vector<BallCount> scenery(std::size_t K) const;

  /// Drops leading window entries that coincide with the tail (keeps >= 1 entry).
  Configuration normalized() const;

  /// Same configuration translated r bins to the left.
  Configuration shifted(BinIndex r) const;

  std::string to_json() const;
  static Configuration from_json(const std::string& text);

  /// Equality of the represented configurations, independent of window depth.
  friend bool operator==(const Configuration& a, const Configuration& b);

 private:
  void extend_left_to(BinIndex bin);

  BinIndex front_ = 0;
  std::vector<BallCount> window_;
  TailPolicy tail_ = TailPolicy::OneBallPerBin;
  BallCount window_balls_ = 0;
};

/// N(X, k).
BallCount count_at_or_right(const Configuration& x, BinIndex k);
/// B(X, k).
BinIndex bin_of_kth_rightmost(const Configuration& x, Letter k);
/// Phi_k(X).
Configuration apply_move(Configuration x, Letter k);
/// Phi_alpha(X): moves alpha_1, ..., alpha_n in order.
Configuration apply_word(Configuration x, const Word& word);
/// Psi_r(X).
Configuration shift(const Configuration& x, BinIndex r);
/// Pi_K(X).
std::vector<BallCount> scenery(const Configuration& x, std::size_t K);

}  // namespace infbin
