#include "infbin/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "infbin/parallel.hpp"
#include "infbin/summation.hpp"

namespace infbin {

namespace {

constexpr std::int64_t kBatches = 20;

void require_perfect_law(const MoveDistribution& mu) {
  if (!mu.non_degenerate() && mu.min_support() != 1)
    throw InvalidArgument("perfect simulation needs a non-degenerate law (or the Dirac mass at 1), got " +
                          mu.describe());
}

TrackerState track(const LetterStream& letters, std::int64_t first, std::int64_t last) {
  TrackerState s;
  for (std::int64_t t = first; t <= last; ++t) s.step(letters.at(t));
  return s;
}

/// Chunked parallel map over replicas; results land in index order.
template <class T, class Fn>
std::vector<T> map_replicas(std::uint64_t count, unsigned threads, Fn&& fn) {
  std::vector<T> out(count);
  constexpr std::uint64_t chunk = 256;
  const std::uint64_t chunks = (count + chunk - 1) / chunk;
  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min(count, lo + chunk);
    for (std::uint64_t r = lo; r < hi; ++r) out[r] = fn(r);
  });
  return out;
}

}  // namespace

Word LetterStream::window(std::int64_t first, std::int64_t last) const {
  std::vector<Letter> letters;
  if (last >= first) letters.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t t = first; t <= last; ++t) letters.push_back(at(t));
  return Word(std::move(letters));
}

RunStats run_forward(const MoveDistribution& mu, const Configuration& x0, std::int64_t steps, std::uint64_t seed,
                     std::uint64_t stream) {
  if (steps < 1) throw InvalidArgument("run_forward needs steps >= 1");
  const LetterStream letters(mu, seed, stream);
  Configuration x = x0;
  const std::int64_t batch = steps >= kBatches ? steps / kBatches : 0;
  std::vector<double> batch_speed;
  std::int64_t in_batch = 0;
  std::int64_t batch_advances = 0;
  for (std::int64_t t = 1; t <= steps; ++t) {
    const bool advanced = x.advance(letters.at(t));
    if (batch > 0 && static_cast<std::int64_t>(batch_speed.size()) < kBatches) {
      batch_advances += advanced ? 1 : 0;
      if (++in_batch == batch) {
        batch_speed.push_back(static_cast<double>(batch_advances) / static_cast<double>(batch));
        in_batch = 0;
        batch_advances = 0;
      }
    }
  }
  RunStats stats;
  stats.steps = steps;
  stats.front_final = x.front();
  stats.speed_estimate = static_cast<double>(x.front() - x0.front()) / static_cast<double>(steps);
  stats.seed = seed;
  if (batch_speed.size() >= 2) {
    double mean = 0;
    for (double b : batch_speed) mean += b;
    mean /= static_cast<double>(batch_speed.size());
    double var = 0;
    for (double b : batch_speed) var += (b - mean) * (b - mean);
    var /= static_cast<double>(batch_speed.size() - 1);
    stats.stderr_ = std::sqrt(var / static_cast<double>(batch_speed.size()));
  }
  return stats;
}

Estimate forward_ensemble(const MoveDistribution& mu, const Configuration& x0, std::int64_t steps, std::uint64_t runs,
                          std::uint64_t seed, unsigned threads) {
  if (runs < 1) throw InvalidArgument("forward_ensemble needs runs >= 1");
  std::vector<double> speeds(runs);
  parallel_for(static_cast<std::size_t>(runs), threads,
               [&](std::size_t r) { speeds[r] = run_forward(mu, x0, steps, seed, r).speed_estimate; });
  CompensatedSum sum;
  for (double s : speeds) sum += s;
  const double mean = sum.value() / static_cast<double>(runs);
  double var = 0;
  for (double s : speeds) var += (s - mean) * (s - mean);
  Estimate e;
  e.estimate = mean;
  e.samples = runs;
  e.stderr_ = runs > 1 ? std::sqrt(var / static_cast<double>(runs - 1) / static_cast<double>(runs)) : 0.0;
  return e;
}

PerfectSample perfect_sample_at(const LetterStream& letters, std::size_t K, std::int64_t time,
                                const PerfectOptions& options) {
  if (K < 1) throw InvalidArgument("perfect_sample needs K >= 1");
  require_perfect_law(letters.mu());
  std::int64_t n = std::max<std::int64_t>(1, options.start_horizon);
  std::int64_t failed = 0;  // longest horizon known not to certify depth K
  std::size_t best_depth = 0;
  while (true) {
    if (n > options.max_horizon) {
      throw HorizonError("no " + std::to_string(K) + "-coupling detected within " +
                             std::to_string(options.max_horizon) + " letters",
                         options.max_horizon, best_depth);
    }
    TrackerState s = track(letters, time - n + 1, time);
    if (s.depth() >= K) {
      // Certified depth is monotone in the suffix length; locate the shortest one.
      std::int64_t lo = failed;
      std::int64_t hi = n;
      while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (track(letters, time - mid + 1, time).depth() >= K) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      PerfectSample out;
      out.scenery.assign(s.determined.end() - static_cast<std::ptrdiff_t>(K), s.determined.end());
      out.tau = hi - 1;
      out.K = K;
      out.horizon = n;
      return out;
    }
    best_depth = std::max(best_depth, s.depth());
    failed = n;
    n *= 2;
  }
}

PerfectSample perfect_sample(const MoveDistribution& mu, std::size_t K, std::uint64_t seed, std::uint64_t stream,
                             const PerfectOptions& options) {
  return perfect_sample_at(LetterStream(mu, seed, stream), K, 0, options);
}

Estimate stationary_speed(const MoveDistribution& mu, std::uint64_t samples, std::uint64_t seed, unsigned threads,
                          const PerfectOptions& options) {
  if (samples < 1) throw InvalidArgument("stationary_speed needs samples >= 1");
  const auto hits = map_replicas<std::uint8_t>(samples, threads, [&](std::uint64_t r) -> std::uint8_t {
    const LetterStream letters(mu, seed, r);
    const auto y = perfect_sample_at(letters, 1, 0, options);
    return letters.at(1) <= y.scenery.back() ? 1 : 0;
  });
  std::uint64_t successes = 0;
  for (auto h : hits) successes += h;
  Estimate e;
  e.samples = samples;
  e.estimate = static_cast<double>(successes) / static_cast<double>(samples);
  e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples));
  return e;
}

CouplingCheck coupling_convergence_check(const MoveDistribution& mu, const Configuration& x0, std::size_t K,
                                         std::int64_t n_max, std::uint64_t seed, std::uint64_t stream,
                                         const PerfectOptions& options) {
  if (K < 1) throw InvalidArgument("coupling check needs K >= 1");
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  const LetterStream letters(mu, seed, stream);

  // Tracker over a certified suffix ending at the current time; its rightmost
  // K bins are Pi_K(Y_t).
  auto certify = [&](std::int64_t t) {
    const auto sample = perfect_sample_at(letters, K, t, options);
    return track(letters, t - sample.tau, t);
  };
  TrackerState y = certify(0);
  Configuration x = x0;

  auto agree = [&] {
    const auto xs = x.scenery(K);
    return std::equal(xs.begin(), xs.end(), y.determined.end() - static_cast<std::ptrdiff_t>(K));
  };

  CouplingCheck out;
  std::optional<std::int64_t> run_start;
  auto observe = [&](std::int64_t t) {
    if (agree()) {
      if (!run_start) run_start = t;
      if (!out.first_agreement) out.first_agreement = t;
    } else if (run_start) {
      ++out.relapses;
      run_start.reset();
    }
  };

  observe(0);
  for (std::int64_t t = 1; t <= n_max; ++t) {
    const Letter a = letters.at(t);
    x.advance(a);
    // depth >= K >= 1 before the step, so the front move of Y is determined.
    if (y.step(a)) ++out.stationary_front;
    if (y.depth() < K) y = certify(t);
    observe(t);
  }
  out.coupled_at = run_start;
  out.forward_front = x.front();
  return out;
}

double TauTail::survival(std::int64_t n) const {
  if (replicas == 0) return 0.0;
  std::uint64_t above = 0;
  for (auto it = histogram.upper_bound(n); it != histogram.end(); ++it) above += it->second;
  return static_cast<double>(above) / static_cast<double>(replicas);
}

std::int64_t TauTail::median() const {
  if (taus.empty()) return 0;
  std::uint64_t seen = 0;
  for (const auto& [tau, count] : histogram) {
    seen += count;
    if (2 * seen >= replicas) return tau;
  }
  return histogram.rbegin()->first;
}

TauTail tau_tail(const MoveDistribution& mu, std::size_t K, std::uint64_t replicas, std::uint64_t seed,
                 unsigned threads, const PerfectOptions& options) {
  if (replicas < 1) throw InvalidArgument("tau_tail needs replicas >= 1");
  TauTail out;
  out.K = K;
  out.replicas = replicas;
  out.taus = map_replicas<std::int64_t>(
      replicas, threads, [&](std::uint64_t r) { return perfect_sample(mu, K, seed, r, options).tau; });
  for (auto t : out.taus) ++out.histogram[t];
  return out;
}

PerfectEnsemble perfect_ensemble(const MoveDistribution& mu, std::size_t K, std::uint64_t replicas,
                                 std::uint64_t seed, unsigned threads, const PerfectOptions& options) {
  if (replicas < 1) throw InvalidArgument("perfect_ensemble needs replicas >= 1");
  struct Draw {
    PerfectSample sample;
    bool advanced = false;
  };
  const auto draws = map_replicas<Draw>(replicas, threads, [&](std::uint64_t r) {
    const LetterStream letters(mu, seed, r);
    Draw d;
    d.sample = perfect_sample_at(letters, K, 0, options);
    d.advanced = letters.at(1) <= d.sample.scenery.back();
    return d;
  });
  PerfectEnsemble out;
  out.tau.K = K;
  out.tau.replicas = replicas;
  out.tau.taus.reserve(replicas);
  std::vector<CompensatedSum> sums(K);
  std::uint64_t successes = 0;
  for (const auto& d : draws) {
    out.tau.taus.push_back(d.sample.tau);
    ++out.tau.histogram[d.sample.tau];
    successes += d.advanced ? 1 : 0;
    for (std::size_t i = 0; i < K; ++i) sums[i] += static_cast<double>(d.sample.scenery[i]);
  }
  const double n = static_cast<double>(replicas);
  out.speed.samples = replicas;
  out.speed.estimate = static_cast<double>(successes) / n;
  out.speed.stderr_ = std::sqrt(out.speed.estimate * (1.0 - out.speed.estimate) / n);
  for (const auto& s : sums) out.mean_scenery.push_back(s.value() / n);
  return out;
}

}  // namespace infbin
