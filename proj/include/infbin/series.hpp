#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "infbin/configuration.hpp"
#include "infbin/distribution.hpp"
#include "infbin/word.hpp"
#include "infbin/word_lab.hpp"

namespace infbin {

/// Multiplicative per-letter weights used by the enumerations: letters 1..A
/// carry `factor[a - 1]`, and all letters above A together carry `tail`.
struct LetterWeights {
  std::vector<double> factor;
  double tail = 0.0;

  static LetterWeights from(const MoveDistribution& mu, Letter max_letter);
  /// p * q^(j - 1); the tail diverges to +inf when q >= 1 and p > 0.
  static LetterWeights monomial(double p, double q, Letter max_letter);
};

struct EnumerationOptions {
  /// Subtrees whose weight falls below this bound (for every weight model) are
  /// not explored; their mass is booked as frontier. 0 explores everything.
  double min_weight = 0.0;
  unsigned threads = 1;
};

struct BracketParams {
  std::string mu;
  Letter max_len = 0;
  Letter max_letter = 0;
  double min_weight = 0.0;
};

struct SpeedBracket {
  double lower = 0.0;
  double upper = 1.0;
  double good_mass = 0.0;
  double bad_mass = 0.0;
  double frontier_mass = 1.0;
  /// Bound on the accumulated floating-point error of each mass.
  double rounding_bound = 0.0;
  BracketParams params;
  /// Words classified (DFS) or distinct tables expanded (aggregated route).
  std::uint64_t nodes = 0;
};

struct LeafRecord {
  Word word;
  Verdict verdict;
  double weight;
};

using LeafSink = std::function<void(const LeafRecord&)>;

/// w_mu(alpha): product of mu(alpha_j).
double weight(const Word& alpha, const MoveDistribution& mu);

/// Depth-first walk of the backward stopping-time tree: words grow by
/// prepending letters 1..A (increasing order) and a branch stops at its first
/// Good or Bad verdict, which makes every stopped word minimal. Leaves are
/// passed to `emit` (if set) in deterministic order; unresolved mass at length
/// L, mass needing a letter > A, and pruned mass form the frontier.
SpeedBracket enumerate_minimal(const MoveDistribution& mu, Letter max_len, Letter max_letter,
                               const LeafSink& emit = {}, const EnumerationOptions& options = {});

/// Mass totals of the same stopping-time tree, for several weight models at once.
struct TreeMasses {
  double good = 0.0;
  double bad = 0.0;
  double frontier = 0.0;
};

struct TreeSummary {
  std::vector<TreeMasses> masses;  // one per weight model
  double rounding_bound = 0.0;     // relative to the total mass of each model
  std::uint64_t nodes = 0;
};

/// Same masses as enumerate_minimal(), computed level by level with all words
/// sharing an AdvanceTable merged into one state.
TreeSummary tree_masses(std::span<const LetterWeights> models, Letter max_len, Letter max_letter,
                        const EnumerationOptions& options = {});

/// Bracket on v_mu via tree_masses(); no leaf stream.
SpeedBracket speed_bracket(const MoveDistribution& mu, Letter max_len, Letter max_letter,
                           const EnumerationOptions& options = {});

struct BivariateBound {
  double lower = 0.0;     // partial sum over resolved minimal good words
  double frontier = 0.0;  // monomial mass of unresolved branches
  double rounding_bound = 0.0;
};

/// Partial sum of D(p, q) = sum over minimal good words of p^|a| q^(sum(a_j - 1)).
BivariateBound bivariate_D(double p, double q, Letter max_len, Letter max_letter,
                           const EnumerationOptions& options = {});

struct CurveRow {
  double p;
  double lower;
  double upper;
  Letter max_len;
  Letter max_letter;
  double rounding_bound;
};

/// Brackets on C(p) = v_{geom(p)} for every grid point, from a single tree walk.
std::vector<CurveRow> curve(std::span<const double> p_grid, Letter max_len, Letter max_letter,
                            const EnumerationOptions& options = {});

/// Header `p,lower,upper,L,A,rounding_bound`, shortest round-trip numbers, LF.
void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows);

/// Bracket on the speed w_k of the uniform law on {1..k}.
SpeedBracket uniform_speed_terms(Letter k, Letter max_len, const EnumerationOptions& options = {});

/// Partial sum of eps_X(alpha) w_mu(alpha) over words of length <= L with
/// letters <= A (terms below min_weight skipped). No error certificate.
double old_series_partial(const MoveDistribution& mu, const Configuration& x, Letter max_len, Letter max_letter,
                          const EnumerationOptions& options = {});

}  // namespace infbin
