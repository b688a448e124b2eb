#include "infbin/word_lab.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace infbin {

namespace {

void require_non_empty(const Word& w, const char* what) {
  if (w.empty()) throw InvalidArgument(std::string(what) + ": empty word");
}

void require_exact_size(Letter h) {
  if (h > kMaxExactLetter)
    throw SizeLimitError("exhaustive test set of depth " + std::to_string(h) + " exceeds the limit of " +
                         std::to_string(kMaxExactLetter));
}

/// Whether the last move advances the front, without copying x twice.
bool last_move_advances(const Word& alpha, Configuration x) {
  for (std::size_t i = 0; i + 1 < alpha.size(); ++i) x.advance(alpha[i]);
  return x.advance(alpha.back());
}

constexpr std::uint64_t low_mask(Letter bits) noexcept {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Good: return "good";
    case Verdict::Bad: return "bad";
    case Verdict::Neither: return "neither";
  }
  return "neither";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "good") return Verdict::Good;
  if (s == "bad") return Verdict::Bad;
  if (s == "neither") return Verdict::Neither;
  throw InvalidArgument("unknown verdict '" + std::string(s) + "'");
}

Letter horizon(const Word& alpha) {
  if (alpha.empty()) throw InvalidArgument("empty word has no horizon");
  Letter h = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) h = std::max(h, alpha[i] - static_cast<Letter>(i));
  return h;
}

std::vector<Configuration> test_set(Letter h) {
  if (h < 1) throw InvalidArgument("test set depth must be >= 1");
  require_exact_size(h);
  const std::uint64_t count = std::uint64_t{1} << (h - 1);
  std::vector<Configuration> out;
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const auto left_steps = static_cast<std::size_t>(std::popcount(mask));
    std::vector<BallCount> window(left_steps + 1, 0);
    std::size_t pos = left_steps;
    ++window[pos];
    for (Letter i = 0; i + 1 < h; ++i) {
      if ((mask >> i) & 1U) --pos;
      ++window[pos];
    }
    out.emplace_back(0, std::move(window));
  }
  return out;
}

bool is_x_good(const Word& alpha, const Configuration& x) {
  require_non_empty(alpha, "is_x_good");
  return last_move_advances(alpha, x);
}

int epsilon(const Word& alpha, const Configuration& x) {
  require_non_empty(alpha, "epsilon");
  const int whole = is_x_good(alpha, x) ? 1 : 0;
  const int tail = alpha.size() >= 2 && is_x_good(alpha.suffix(1), x) ? 1 : 0;
  return whole - tail;
}

std::optional<Verdict> VerdictCache::find(const Word& w) const {
  std::lock_guard lock(mutex_);
  auto it = verdicts_.find(w);
  if (it == verdicts_.end()) return std::nullopt;
  return it->second;
}

void VerdictCache::insert(const Word& w, Verdict v) {
  std::lock_guard lock(mutex_);
  verdicts_.emplace(w, v);
}

std::size_t VerdictCache::size() const {
  std::lock_guard lock(mutex_);
  return verdicts_.size();
}

std::vector<std::pair<Word, Verdict>> VerdictCache::entries() const {
  std::lock_guard lock(mutex_);
  return {verdicts_.begin(), verdicts_.end()};
}

Verdict verdict_with_depth(const Word& alpha, Letter depth) {
  require_non_empty(alpha, "classify");
  bool any_good = false;
  bool any_bad = false;
  for (const auto& x : test_set(depth)) {
    (last_move_advances(alpha, x) ? any_good : any_bad) = true;
    if (any_good && any_bad) return Verdict::Neither;
  }
  return any_good ? Verdict::Good : Verdict::Bad;
}

Verdict verdict_of(const Word& alpha, VerdictCache* cache) {
  if (cache) {
    if (auto v = cache->find(alpha)) return *v;
  }
  const Verdict v = verdict_with_depth(alpha, horizon(alpha));
  if (cache) cache->insert(alpha, v);
  return v;
}

Classification classify(const Word& alpha, VerdictCache* cache) {
  Classification c;
  c.verdict = verdict_of(alpha, cache);
  if (c.verdict == Verdict::Neither) return c;
  c.minimal = true;
  for (std::size_t k = 1; k < alpha.size(); ++k) {
    if (verdict_of(alpha.suffix(k), cache) == c.verdict) {
      c.minimal = false;
      break;
    }
  }
  return c;
}

std::size_t coupling_number(const Word& gamma) {
  if (gamma.empty()) return 0;
  const Letter h = gamma.max_letter();
  require_exact_size(h);
  std::vector<Configuration> finals;
  for (auto x : test_set(h)) {
    auto window = x.window();
    ++window.front();
    finals.push_back(apply_word(Configuration(x.front(), std::move(window)), gamma));
    finals.push_back(apply_word(std::move(x), gamma));
  }
  std::size_t K = 0;
  while (true) {
    const auto offset = static_cast<BinIndex>(K);
    const BallCount ref = finals.front().count(finals.front().front() - offset);
    const bool agree = std::all_of(finals.begin(), finals.end(),
                                   [&](const Configuration& y) { return y.count(y.front() - offset) == ref; });
    if (!agree) return K;
    ++K;
  }
}

bool TrackerState::step(Letter a) {
  if (a <= balls) {
    BallCount seen = 0;
    auto i = determined.size();
    while (i > 0) {
      --i;
      seen += determined[i];
      if (seen >= a) break;
    }
    ++balls;
    if (i + 1 == determined.size()) {
      determined.push_back(1);
      ++front_shift;
      return true;
    }
    ++determined[i + 1];
    return false;
  }
  if (a == balls + 1) {
    ++balls;
    if (determined.empty()) {
      determined.push_back(1);
      ++front_shift;
      return true;
    }
    ++determined.front();
    return false;
  }
  if (!determined.empty()) {
    balls -= determined.front();
    determined.pop_front();
  }
  return false;
}

TrackerState tracker_init() { return TrackerState{}; }

TrackerState tracker_step(TrackerState s, Letter a) {
  if (a < 1) throw InvalidArgument("letters must be positive");
  s.step(a);
  return s;
}

TrackerState tracker_run(const Word& gamma) {
  TrackerState s;
  for (Letter a : gamma) s.step(a);
  return s;
}

AdvanceTable::AdvanceTable(Letter depth, std::vector<std::uint64_t> bits) : depth_(depth), bits_(std::move(bits)) {}

AdvanceTable AdvanceTable::single(Letter a) {
  if (a < 1) throw InvalidArgument("letters must be positive");
  require_exact_size(a);
  const std::size_t n = std::size_t{1} << (a - 1);
  std::vector<std::uint64_t> bits((n + 63) / 64, 0);
  bits[0] = 1;  // only the pattern with the first a balls all in the front bin advances
  AdvanceTable t(a, std::move(bits));
  t.reduce();
  return t;
}

std::uint64_t AdvanceTable::move_pattern(std::uint64_t pattern, Letter a) noexcept {
  const int left = std::popcount(pattern & low_mask(a - 1));
  if (left == 0) return (pattern << 1) | 1U;
  // The new ball joins the bin (left - 1) steps below the front; c is the
  // index of that bin's rightmost ball, and a "same bin" gap is inserted there.
  std::size_t c = 0;
  if (left > 1) {
    std::uint64_t rest = pattern;
    for (int k = 1; k < left - 1; ++k) rest &= rest - 1;
    c = static_cast<std::size_t>(std::countr_zero(rest)) + 1;
  }
  const std::uint64_t low = c == 0 ? 0 : pattern & low_mask(static_cast<Letter>(c));
  return low | ((pattern >> c) << (c + 1));
}

AdvanceTable AdvanceTable::prepend(Letter a) const {
  if (a < 1) throw InvalidArgument("letters must be positive");
  const Letter depth = std::max<Letter>({a, depth_ - 1, 1});
  require_exact_size(depth);
  const std::uint64_t n = std::uint64_t{1} << (depth - 1);
  const std::uint64_t keep = low_mask(depth_ - 1);
  std::vector<std::uint64_t> bits((n + 63) / 64, 0);
  for (std::uint64_t m = 0; m < n; ++m) {
    if (advances(move_pattern(m, a) & keep)) bits[m >> 6] |= std::uint64_t{1} << (m & 63);
  }
  AdvanceTable t(depth, std::move(bits));
  t.reduce();
  return t;
}

void AdvanceTable::reduce() {
  while (depth_ > 1) {
    const std::uint64_t half = std::uint64_t{1} << (depth_ - 2);
    bool independent = true;
    if (half >= 64) {
      const std::size_t words = half / 64;
      independent = std::equal(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(words),
                               bits_.begin() + static_cast<std::ptrdiff_t>(words));
    } else {
      const std::uint64_t lo = bits_[0] & low_mask(static_cast<Letter>(half));
      const std::uint64_t hi = (bits_[0] >> half) & low_mask(static_cast<Letter>(half));
      independent = lo == hi;
    }
    if (!independent) break;
    --depth_;
    const std::uint64_t n = std::uint64_t{1} << (depth_ - 1);
    bits_.resize((n + 63) / 64);
    if (n < 64) bits_[0] &= low_mask(static_cast<Letter>(n));
  }
}

Verdict AdvanceTable::verdict() const noexcept {
  const std::uint64_t n = patterns();
  if (n < 64) {
    const std::uint64_t v = bits_[0] & low_mask(static_cast<Letter>(n));
    if (v == 0) return Verdict::Bad;
    if (v == low_mask(static_cast<Letter>(n))) return Verdict::Good;
    return Verdict::Neither;
  }
  const bool all_zero = std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
  if (all_zero) return Verdict::Bad;
  const bool all_one = std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == ~std::uint64_t{0}; });
  return all_one ? Verdict::Good : Verdict::Neither;
}

Verdict table_verdict(const Word& alpha) {
  require_non_empty(alpha, "table_verdict");
  auto table = AdvanceTable::single(alpha.back());
  for (std::size_t i = alpha.size() - 1; i-- > 0;) table = table.prepend(alpha[i]);
  return table.verdict();
}

}  // namespace infbin
