#pragma once

#include <cstdint>
#include <limits>

namespace infbin {

/// Counter-based random bits.
///
/// The stream identified by (seed, stream) is the SplitMix64 sequence started
/// from the key `mix64(seed ^ mix64(stream))`; element `index` is therefore
/// `mix64(key + (index + 1) * golden_gamma)` and can be read in O(1) without
/// touching earlier elements. Coupling from the past relies on this: the letter
/// at a given time is re-read, never re-drawn.
inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + golden_gamma));
}

constexpr std::uint64_t random_bits(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(key + (index + 1) * golden_gamma);
}

/// Uniform double in [0, 1) built from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Random access into one (seed, stream) sequence.
class IndexedStream {
 public:
  constexpr IndexedStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(stream_key(seed, stream)) {}

  constexpr std::uint64_t bits(std::uint64_t index) const noexcept { return random_bits(key_, index); }
  constexpr double uniform(std::uint64_t index) const noexcept { return to_unit(bits(index)); }

  /// Time indices may be negative (the past of a two-sided process); the
  /// two's-complement image keeps every time slot distinct.
  constexpr double uniform_at(std::int64_t time) const noexcept {
    return uniform(static_cast<std::uint64_t>(time));
  }

 private:
  std::uint64_t key_;
};

/// Sequential view of an indexed stream; satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : stream_(seed, stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return stream_.bits(counter_++); }
  constexpr double uniform() noexcept { return to_unit((*this)()); }
  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  IndexedStream stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace infbin
