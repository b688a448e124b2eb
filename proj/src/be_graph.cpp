#include "infbin/be_graph.hpp"

#include <cmath>

#include "infbin/parallel.hpp"

namespace infbin {

namespace {

void check_graph_args(std::int64_t n, double p) {
  if (n < 1) throw InvalidArgument("graph needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
}

/// Grows the graph vertex by vertex; `on_vertex(j, value, front)` after each.
template <class OnVertex>
void grow(std::int64_t n, double p, const EdgeUniforms& u, OnVertex&& on_vertex) {
  std::vector<std::vector<std::int64_t>> by_value;  // vertices grouped by longest-path value
  std::int64_t front = -1;
  for (std::int64_t j = 1; j <= n; ++j) {
    std::int64_t value = 0;
    if (p > 0.0) {
      bool found = false;
      for (std::int64_t v = front; v >= 0 && !found; --v) {
        for (std::int64_t i : by_value[static_cast<std::size_t>(v)]) {
          if (u(i, j) < p) {
            value = v + 1;
            found = true;
            break;
          }
        }
      }
    }
    if (value > front) {
      front = value;
      by_value.resize(static_cast<std::size_t>(front + 1));
    }
    by_value[static_cast<std::size_t>(value)].push_back(j);
    on_vertex(j, value, front);
  }
}

}  // namespace

LongestPathRun longest_path(std::int64_t n, double p, std::uint64_t seed, bool keep_per_vertex, std::uint64_t stream) {
  check_graph_args(n, p);
  LongestPathRun run;
  run.n = n;
  run.p = p;
  run.seed = seed;
  if (keep_per_vertex) run.per_vertex.reserve(static_cast<std::size_t>(n));
  grow(n, p, EdgeUniforms(seed, stream), [&](std::int64_t, std::int64_t value, std::int64_t front) {
    if (keep_per_vertex) run.per_vertex.push_back(value);
    run.longest = front;
  });
  return run;
}

Estimate estimate_C(double p, std::int64_t n, std::uint64_t replicas, std::uint64_t seed, unsigned threads) {
  check_graph_args(n, p);
  if (replicas < 1) throw InvalidArgument("estimate_C needs replicas >= 1");
  std::vector<std::int64_t> lengths(replicas);
  parallel_for(static_cast<std::size_t>(replicas), threads,
               [&](std::size_t r) { lengths[r] = longest_path(n, p, seed, false, r).longest; });
  std::int64_t total = 0;
  for (auto l : lengths) total += l;
  const double dn = static_cast<double>(n);
  Estimate e;
  e.samples = replicas;
  e.estimate = static_cast<double>(total) / (dn * static_cast<double>(replicas));
  double var = 0;
  for (auto l : lengths) {
    const double d = static_cast<double>(l) / dn - e.estimate;
    var += d * d;
  }
  e.stderr_ = replicas > 1
                  ? std::sqrt(var / static_cast<double>(replicas - 1) / static_cast<double>(replicas))
                  : 0.0;
  return e;
}

std::vector<std::int64_t> fk_coupling_trajectory(std::int64_t n, double p, std::uint64_t seed, std::uint64_t stream) {
  check_graph_args(n, p);
  std::vector<std::int64_t> fronts;
  fronts.reserve(static_cast<std::size_t>(n));
  grow(n, p, EdgeUniforms(seed, stream),
       [&](std::int64_t, std::int64_t, std::int64_t front) { fronts.push_back(front); });
  return fronts;
}

}  // namespace infbin
