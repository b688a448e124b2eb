#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace infbin {

/// Move type: the rank (from the right) of the ball a new ball is placed after.
using Letter = std::int64_t;

/// Bin index on the integer line.
using BinIndex = std::int64_t;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exact computation would exceed its enumeration budget.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite sequence of moves, applied left to right.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters);
  explicit Word(std::vector<Letter> letters);

  /// Parses "1,2,3" (whitespace tolerated). The empty string is the empty word.
  static Word parse(std::string_view text);

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }
  std::span<const Letter> letters() const noexcept { return letters_; }

  Letter max_letter() const noexcept;

  /// Letters [from, size()); `suffix(1)` drops the first letter.
  Word suffix(std::size_t from) const;
  /// First n letters.
  Word prefix(std::size_t n) const;
  Word prepended(Letter a) const;
  Word appended(Letter a) const;

  std::string to_string() const;

  friend Word operator+(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

}  // namespace infbin
