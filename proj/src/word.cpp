#include "infbin/word.hpp"

#include <algorithm>
#include <charconv>

namespace infbin {

namespace {

void check_letters(const std::vector<Letter>& letters) {
  for (Letter a : letters) {
    if (a < 1) throw InvalidArgument("letters must be positive integers, got " + std::to_string(a));
  }
}

}  // namespace

Word::Word(std::initializer_list<Letter> letters) : letters_(letters) { check_letters(letters_); }

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) { check_letters(letters_); }

Word Word::parse(std::string_view text) {
  std::vector<Letter> letters;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return Word{};
  while (true) {
    const auto comma = text.find(',');
    const auto token = trim(text.substr(0, comma));
    Letter value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
      throw InvalidArgument("cannot parse letter '" + std::string(token) + "'");
    letters.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Word(std::move(letters));
}

Letter Word::max_letter() const noexcept {
  return letters_.empty() ? 0 : *std::max_element(letters_.begin(), letters_.end());
}

Word Word::suffix(std::size_t from) const {
  Word w;
  if (from < letters_.size()) w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(from), letters_.end());
  return w;
}

Word Word::prefix(std::size_t n) const {
  Word w;
  w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, letters_.size())));
  return w;
}

Word Word::prepended(Letter a) const {
  std::vector<Letter> letters;
  letters.reserve(letters_.size() + 1);
  letters.push_back(a);
  letters.insert(letters.end(), letters_.begin(), letters_.end());
  return Word(std::move(letters));
}

Word Word::appended(Letter a) const {
  auto letters = letters_;
  letters.push_back(a);
  return Word(std::move(letters));
}

std::string Word::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(letters_[i]);
  }
  return out;
}

Word operator+(const Word& a, const Word& b) {
  Word w = a;
  w.letters_.insert(w.letters_.end(), b.letters_.begin(), b.letters_.end());
  return w;
}

}  // namespace infbin
