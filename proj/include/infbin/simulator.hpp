#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infbin/configuration.hpp"
#include "infbin/distribution.hpp"
#include "infbin/rng.hpp"
#include "infbin/word_lab.hpp"

namespace infbin {

/// The i.i.d. letters xi_t, t in Z, of one replica: xi_t is the inverse-CDF
/// image of element t of the (seed, stream) counter sequence.
class LetterStream {
 public:
  LetterStream(MoveDistribution mu, std::uint64_t seed, std::uint64_t stream = 0)
      : mu_(std::move(mu)), bits_(seed, stream) {}

  Letter at(std::int64_t time) const { return mu_.sample(bits_.uniform_at(time)); }
  /// Letters at times first, first + 1, ..., last.
  Word window(std::int64_t first, std::int64_t last) const;
  const MoveDistribution& mu() const noexcept { return mu_; }

 private:
  MoveDistribution mu_;
  IndexedStream bits_;
};

struct RunStats {
  std::int64_t steps = 0;
  BinIndex front_final = 0;
  /// (front_final - initial front) / steps.
  double speed_estimate = 0.0;
  /// Batch-means standard error of the speed estimate (20 batches).
  double stderr_ = 0.0;
  std::uint64_t seed = 0;
};

/// X_{t} = Phi_{xi_t}(X_{t-1}) for t = 1..steps.
RunStats run_forward(const MoveDistribution& mu, const Configuration& x0, std::int64_t steps, std::uint64_t seed,
                     std::uint64_t stream = 0);

struct Estimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

/// Mean speed over `runs` independent forward runs (stream = run index).
Estimate forward_ensemble(const MoveDistribution& mu, const Configuration& x0, std::int64_t steps, std::uint64_t runs,
                          std::uint64_t seed, unsigned threads = 1);

/// No K-coupling suffix was detected within the horizon limit. This says the
/// tracker did not certify coupling, not that no coupling word exists.
class HorizonError : public std::runtime_error {
 public:
  HorizonError(const std::string& what, std::int64_t horizon, std::size_t depth_reached)
      : std::runtime_error(what), horizon(horizon), depth_reached(depth_reached) {}
  std::int64_t horizon;
  std::size_t depth_reached;
};

struct PerfectOptions {
  std::int64_t max_horizon = std::int64_t{1} << 24;
  std::int64_t start_horizon = 1;
};

struct PerfectSample {
  /// Pi_K(Y_t), left to right; back() is the front bin.
  std::vector<BallCount> scenery;
  /// Tracker-certified tau: the shortest suffix xi_{t-tau}^t with certified
  /// depth >= K. An upper bound on the exact tau_K.
  std::int64_t tau = 0;
  std::size_t K = 0;
  /// Horizon (letters) of the doubling step that first succeeded.
  std::int64_t horizon = 0;
};

/// Coupling from the past for the K-scenery of the stationary process at time
/// `time`: horizons double until tracker_run over xi_{time-n+1}^{time}
/// certifies depth >= K.
PerfectSample perfect_sample_at(const LetterStream& letters, std::size_t K, std::int64_t time,
                                const PerfectOptions& options = {});

PerfectSample perfect_sample(const MoveDistribution& mu, std::size_t K, std::uint64_t seed, std::uint64_t stream = 0,
                             const PerfectOptions& options = {});

/// Fraction of replicas with xi_1 <= Y_0(0) (front bin count), each replica
/// using its own stream. Unbiased for v_mu.
Estimate stationary_speed(const MoveDistribution& mu, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1,
                          const PerfectOptions& options = {});

struct CouplingCheck {
  /// Start of the final run of agreeing K-sceneries, if it reaches n_max.
  std::optional<std::int64_t> coupled_at;
  std::optional<std::int64_t> first_agreement;
  /// Agreement runs that ended before n_max.
  std::int64_t relapses = 0;
  /// F(Y_{n_max}) with F(Y_0) = 0.
  BinIndex stationary_front = 0;
  BinIndex forward_front = 0;
};

/// Runs X from x0 and the stationary chain Y on the same letters and compares
/// Pi_K(X_t) with Pi_K(Y_t) for t = 0..n_max.
CouplingCheck coupling_convergence_check(const MoveDistribution& mu, const Configuration& x0, std::size_t K,
                                         std::int64_t n_max, std::uint64_t seed, std::uint64_t stream = 0,
                                         const PerfectOptions& options = {});

struct TauTail {
  std::size_t K = 0;
  std::uint64_t replicas = 0;
  /// tau value -> number of replicas.
  std::map<std::int64_t, std::uint64_t> histogram;
  /// Per-replica tau, in replica order.
  std::vector<std::int64_t> taus;

  /// Empirical P(tau > n).
  double survival(std::int64_t n) const;
  std::int64_t median() const;
};

TauTail tau_tail(const MoveDistribution& mu, std::size_t K, std::uint64_t replicas, std::uint64_t seed,
                 unsigned threads = 1, const PerfectOptions& options = {});

struct PerfectEnsemble {
  TauTail tau;
  /// Fraction of replicas with xi_1 <= Y_0(0), read off the same K-samples.
  Estimate speed;
  /// Mean of Pi_K(Y_0) entries, left to right.
  std::vector<double> mean_scenery;
};

/// tau_tail() and stationary_speed() from one set of K-samples.
PerfectEnsemble perfect_ensemble(const MoveDistribution& mu, std::size_t K, std::uint64_t replicas,
                                 std::uint64_t seed, unsigned threads = 1, const PerfectOptions& options = {});

}  // namespace infbin
