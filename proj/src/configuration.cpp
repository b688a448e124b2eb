#include "infbin/configuration.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace infbin {

Configuration Configuration::minimal(BinIndex front) { return Configuration(front, {1}); }

Configuration::Configuration(BinIndex front, std::vector<BallCount> window, TailPolicy tail)
    : front_(front), window_(std::move(window)), tail_(tail) {
  if (window_.empty()) throw InvalidArgument("configuration window must be non-empty");
  for (BallCount c : window_) {
    if (c < 1) throw InvalidArgument("bins at or left of the front must be non-empty");
  }
  window_balls_ = std::accumulate(window_.begin(), window_.end(), BallCount{0});
}

BallCount Configuration::count(BinIndex bin) const noexcept {
  if (bin > front_) return 0;
  const BinIndex start = window_start();
  if (bin < start) return 1;
  return window_[static_cast<std::size_t>(bin - start)];
}

BallCount Configuration::count_at_or_right(BinIndex k) const noexcept {
  if (k > front_) return 0;
  const BinIndex start = window_start();
  if (k < start) return window_balls_ + (start - k);
  BallCount total = 0;
  for (auto i = static_cast<std::size_t>(k - start); i < window_.size(); ++i) total += window_[i];
  return total;
}

BinIndex Configuration::bin_of_kth_rightmost(Letter k) const {
  if (k < 1) throw InvalidArgument("ball rank must be >= 1");
  BallCount seen = 0;
  BinIndex bin = front_;
  for (auto it = window_.rbegin(); it != window_.rend(); ++it, --bin) {
    seen += *it;
    if (seen >= k) return bin;
  }
  // Tail: one ball per bin starting right below the window.
  return window_start() - 1 - (k - window_balls_ - 1);
}

void Configuration::extend_left_to(BinIndex bin) {
  const BinIndex start = window_start();
  if (bin >= start) return;
  const auto extra = static_cast<std::size_t>(start - bin);
  window_.insert(window_.begin(), extra, BallCount{1});
  window_balls_ += static_cast<BallCount>(extra);
}

bool Configuration::advance(Letter k) {
  const BinIndex target = bin_of_kth_rightmost(k) + 1;
  if (target > front_) {
    window_.push_back(1);
    ++window_balls_;
    ++front_;
    return true;
  }
  extend_left_to(target);
  ++window_[static_cast<std::size_t>(target - window_start())];
  ++window_balls_;
  return false;
}

std::vector<BallCount> Configuration::scenery(std::size_t K) const {
  std::vector<BallCount> out(K, BallCount{1});
  const std::size_t from_window = std::min(K, window_.size());
  std::copy(window_.end() - static_cast<std::ptrdiff_t>(from_window), window_.end(),
            out.end() - static_cast<std::ptrdiff_t>(from_window));
  return out;
}

Configuration Configuration::normalized() const {
  auto first = window_.begin();
  while (first + 1 != window_.end() && *first == 1) ++first;
  return Configuration(front_, std::vector<BallCount>(first, window_.end()), tail_);
}

Configuration Configuration::shifted(BinIndex r) const {
  Configuration out = *this;
  out.front_ -= r;
  return out;
}

bool operator==(const Configuration& a, const Configuration& b) {
  if (a.front_ != b.front_ || a.tail_ != b.tail_) return false;
  const auto depth = std::max(a.depth(), b.depth());
  return a.scenery(depth) == b.scenery(depth);
}

std::string Configuration::to_json() const {
  nlohmann::json j;
  j["front"] = front_;
  j["window"] = window_;
  j["tail"] = "one_per_bin";
  return j.dump();
}

Configuration Configuration::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("tail", std::string("one_per_bin")) != "one_per_bin")
      throw InvalidArgument("unsupported tail policy");
    return Configuration(j.at("front").get<BinIndex>(), j.at("window").get<std::vector<BallCount>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad configuration JSON: ") + e.what());
  }
}

BallCount count_at_or_right(const Configuration& x, BinIndex k) { return x.count_at_or_right(k); }

BinIndex bin_of_kth_rightmost(const Configuration& x, Letter k) { return x.bin_of_kth_rightmost(k); }

Configuration apply_move(Configuration x, Letter k) {
  x.advance(k);
  return x;
}

Configuration apply_word(Configuration x, const Word& word) {
  for (Letter a : word) x.advance(a);
  return x;
}

Configuration shift(const Configuration& x, BinIndex r) { return x.shifted(r); }

std::vector<BallCount> scenery(const Configuration& x, std::size_t K) { return x.scenery(K); }

}  // namespace infbin
