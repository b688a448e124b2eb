#pragma once

#include <cstdint>
#include <vector>

#include "infbin/rng.hpp"
#include "infbin/simulator.hpp"

namespace infbin {

/// Edge randomness of one Barak-Erdos graph: pair (i, j), 1 <= i < j, gets a
/// fixed uniform U(i, j), and the edge i -> j is present iff U(i, j) < p. Every
/// p shares the same uniforms, so graphs are nested in p.
class EdgeUniforms {
 public:
  EdgeUniforms(std::uint64_t seed, std::uint64_t stream) : bits_(seed, stream) {}

  double operator()(std::int64_t i, std::int64_t j) const noexcept {
    const auto jj = static_cast<std::uint64_t>(j);
    return bits_.uniform((jj - 1) * (jj - 2) / 2 + static_cast<std::uint64_t>(i - 1));
  }

 private:
  IndexedStream bits_;
};

struct LongestPathRun {
  std::int64_t n = 0;
  double p = 0.0;
  /// L_n: number of edges on the longest directed path.
  std::int64_t longest = 0;
  /// Longest path ending at vertex j (index j - 1), when requested.
  std::vector<std::int64_t> per_vertex;
  std::uint64_t seed = 0;
};

/// Longest path in G_{n,p}. Vertex j takes 1 + the largest value among its
/// in-neighbours; candidates are scanned in decreasing value order and the
/// first present edge settles the value, so the expected work is O(n / p).
LongestPathRun longest_path(std::int64_t n, double p, std::uint64_t seed, bool keep_per_vertex = false,
                            std::uint64_t stream = 0);

/// Mean of L_n / n over replicas (stream = replica index).
Estimate estimate_C(double p, std::int64_t n, std::uint64_t replicas, std::uint64_t seed, unsigned threads = 1);

/// Running maximum of the per-vertex longest-path values after each added
/// vertex: the front of the infinite-bin configuration whose balls are the
/// vertices, placed in the bin given by their value.
std::vector<std::int64_t> fk_coupling_trajectory(std::int64_t n, double p, std::uint64_t seed,
                                                 std::uint64_t stream = 0);

}  // namespace infbin
