#include "infbin/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>

#include "infbin/parallel.hpp"
#include "infbin/summation.hpp"

namespace infbin {

namespace {

void check_truncation(Letter max_len, Letter max_letter) {
  if (max_len < 1) throw InvalidArgument("max_len must be >= 1");
  if (max_letter < 1) throw InvalidArgument("max_letter must be >= 1");
  if (max_letter > kMaxExactLetter)
    throw SizeLimitError("max_letter above " + std::to_string(kMaxExactLetter) + " is not supported");
}

/// Error bound per unit of mass: each weight is a product of at most L letter
/// factors (each within 8u of exact), every state or mass accumulator is a
/// compensated sum (2u), and the final reductions add a few more roundings.
double rounding_bound_for(Letter max_len) {
  return (12.0 * static_cast<double>(max_len) + 8.0) * kUnitRoundoff;
}

struct Masses {
  CompensatedSum good;
  CompensatedSum bad;
  CompensatedSum frontier;
  std::uint64_t nodes = 0;

  Masses& operator+=(const Masses& o) {
    good += o.good;
    bad += o.bad;
    frontier += o.frontier;
    nodes += o.nodes;
    return *this;
  }
};

class DepthFirstWalk {
 public:
  DepthFirstWalk(const LetterWeights& weights, Letter max_len, Letter max_letter, double min_weight,
                 std::vector<LeafRecord>* leaves)
      : weights_(weights), max_len_(max_len), max_letter_(max_letter), min_weight_(min_weight), leaves_(leaves) {}

  /// Handles the child `a` of the node (table, weight) at word length `len`.
  void child(const AdvanceTable* table, double w, Letter a, Letter len) {
    const double cw = w * weights_.factor[static_cast<std::size_t>(a - 1)];
    if (cw == 0.0) return;
    if (cw < min_weight_) {
      masses.frontier += cw;
      return;
    }
    rev_.push_back(a);
    const AdvanceTable next = table ? table->prepend(a) : AdvanceTable::single(a);
    ++masses.nodes;
    switch (next.verdict()) {
      case Verdict::Good:
        masses.good += cw;
        record(Verdict::Good, cw);
        break;
      case Verdict::Bad:
        masses.bad += cw;
        record(Verdict::Bad, cw);
        break;
      case Verdict::Neither:
        if (len + 1 >= max_len_) {
          masses.frontier += cw;
        } else {
          expand(next, cw, len + 1);
        }
        break;
    }
    rev_.pop_back();
  }

  void expand(const AdvanceTable& table, double w, Letter len) {
    for (Letter a = 1; a <= max_letter_; ++a) child(&table, w, a, len);
    masses.frontier += w * weights_.tail;
  }

  Masses masses;

 private:
  void record(Verdict v, double w) {
    if (!leaves_) return;
    leaves_->push_back(LeafRecord{Word(std::vector<Letter>(rev_.rbegin(), rev_.rend())), v, w});
  }

  const LetterWeights& weights_;
  Letter max_len_;
  Letter max_letter_;
  double min_weight_;
  std::vector<LeafRecord>* leaves_;
  std::vector<Letter> rev_;  // newest (leftmost) letter at the back
};

SpeedBracket make_bracket(double good, double bad, double frontier, double rounding, std::uint64_t nodes,
                          const MoveDistribution& mu, Letter max_len, Letter max_letter, double min_weight) {
  SpeedBracket b;
  b.good_mass = good;
  b.bad_mass = bad;
  b.frontier_mass = frontier;
  b.lower = std::clamp(good, 0.0, 1.0);
  b.upper = std::clamp(1.0 - bad, 0.0, 1.0);
  b.rounding_bound = rounding;
  b.nodes = nodes;
  b.params = BracketParams{mu.describe(), max_len, max_letter, min_weight};
  return b;
}

struct TableHash {
  std::size_t operator()(const AdvanceTable& t) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(t.depth()) * 0x9E3779B97F4A7C15ULL;
    const std::uint64_t n = t.patterns();
    for (std::uint64_t m = 0; m < n; m += 64) {
      std::uint64_t word = 0;
      for (std::uint64_t b = 0; b < 64 && m + b < n; ++b) word |= std::uint64_t{t.advances(m + b)} << b;
      h = (h ^ word) * 0xBF58476D1CE4E5B9ULL;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
  }
};

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

LetterWeights LetterWeights::from(const MoveDistribution& mu, Letter max_letter) {
  LetterWeights w;
  w.factor.reserve(static_cast<std::size_t>(max_letter));
  for (Letter a = 1; a <= max_letter; ++a) w.factor.push_back(mu.pmf(a));
  w.tail = mu.tail_mass(max_letter);
  return w;
}

LetterWeights LetterWeights::monomial(double p, double q, Letter max_letter) {
  if (!(p >= 0) || !(q >= 0)) throw InvalidArgument("p and q must be non-negative");
  LetterWeights w;
  double f = p;
  for (Letter a = 1; a <= max_letter; ++a) {
    w.factor.push_back(f);
    f *= q;
  }
  if (p == 0.0) {
    w.tail = 0.0;
  } else if (q >= 1.0) {
    w.tail = std::numeric_limits<double>::infinity();
  } else {
    w.tail = p * std::pow(q, static_cast<double>(max_letter)) / (1.0 - q);
  }
  return w;
}

double weight(const Word& alpha, const MoveDistribution& mu) {
  if (alpha.empty()) throw InvalidArgument("weight: empty word");
  double w = 1.0;
  for (Letter a : alpha) w *= mu.pmf(a);
  return w;
}

SpeedBracket enumerate_minimal(const MoveDistribution& mu, Letter max_len, Letter max_letter, const LeafSink& emit,
                               const EnumerationOptions& options) {
  check_truncation(max_len, max_letter);
  const auto weights = LetterWeights::from(mu, max_letter);

  // Fixed partition by the last letter of the word (the tree's first level).
  const auto tasks = static_cast<std::size_t>(max_letter);
  std::vector<Masses> partial(tasks);
  std::vector<std::vector<LeafRecord>> leaves(emit ? tasks : 0);
  parallel_for(tasks, options.threads, [&](std::size_t i) {
    DepthFirstWalk walk(weights, max_len, max_letter, options.min_weight, emit ? &leaves[i] : nullptr);
    walk.child(nullptr, 1.0, static_cast<Letter>(i + 1), 0);
    partial[i] = walk.masses;
  });

  Masses total;
  for (std::size_t i = 0; i < tasks; ++i) {
    total += partial[i];
    if (emit) {
      for (const auto& leaf : leaves[i]) emit(leaf);
    }
  }
  total.frontier += weights.tail;
  return make_bracket(total.good.value(), total.bad.value(), total.frontier.value(), rounding_bound_for(max_len),
                      total.nodes, mu, max_len, max_letter, options.min_weight);
}

TreeSummary tree_masses(std::span<const LetterWeights> models, Letter max_len, Letter max_letter,
                        const EnumerationOptions& options) {
  check_truncation(max_len, max_letter);
  const std::size_t n_models = models.size();
  if (n_models == 0) throw InvalidArgument("tree_masses needs at least one weight model");
  for (const auto& m : models) {
    if (m.factor.size() != static_cast<std::size_t>(max_letter))
      throw InvalidArgument("weight model does not cover letters 1..max_letter");
  }
  const auto A = static_cast<std::size_t>(max_letter);

  std::vector<CompensatedSum> good(n_models), bad(n_models), frontier(n_models);

  // Interned tables and their (lazily computed) children; -1 = not computed.
  std::vector<AdvanceTable> tables;
  std::unordered_map<AdvanceTable, int, TableHash> ids;
  std::vector<std::vector<int>> children;
  auto intern = [&](AdvanceTable&& t) {
    auto [it, inserted] = ids.try_emplace(std::move(t), static_cast<int>(tables.size()));
    if (inserted) {
      tables.push_back(it->first);
      children.emplace_back();
    }
    return it->second;
  };

  std::vector<bool> letter_used(A, false);
  for (std::size_t a = 0; a < A; ++a) {
    for (const auto& m : models) letter_used[a] = letter_used[a] || m.factor[a] != 0.0;
  }

  struct State {
    int id;
    std::vector<CompensatedSum> w;
  };
  std::vector<State> level;

  auto book = [&](int child_id, std::span<const double> w, Letter len, std::vector<State>& next,
                  std::unordered_map<int, std::size_t>& slot) {
    switch (tables[static_cast<std::size_t>(child_id)].verdict()) {
      case Verdict::Good:
        for (std::size_t k = 0; k < n_models; ++k) good[k] += w[k];
        return;
      case Verdict::Bad:
        for (std::size_t k = 0; k < n_models; ++k) bad[k] += w[k];
        return;
      case Verdict::Neither:
        break;
    }
    if (len >= max_len) {
      for (std::size_t k = 0; k < n_models; ++k) frontier[k] += w[k];
      return;
    }
    auto [it, inserted] = slot.try_emplace(child_id, next.size());
    if (inserted) next.push_back(State{child_id, std::vector<CompensatedSum>(n_models)});
    auto& dst = next[it->second].w;
    for (std::size_t k = 0; k < n_models; ++k) dst[k] += w[k];
  };

  std::uint64_t nodes = 0;
  std::vector<double> w(n_models);
  {
    std::vector<State> next;
    std::unordered_map<int, std::size_t> slot;
    for (std::size_t a = 0; a < A; ++a) {
      if (!letter_used[a]) continue;
      for (std::size_t k = 0; k < n_models; ++k) w[k] = models[k].factor[a];
      const int id = intern(AdvanceTable::single(static_cast<Letter>(a + 1)));
      ++nodes;
      book(id, w, 1, next, slot);
    }
    for (std::size_t k = 0; k < n_models; ++k) frontier[k] += models[k].tail;
    level = std::move(next);
  }

  for (Letter len = 1; len < max_len && !level.empty(); ++len) {
    // Prune, then compute missing transitions in parallel; interning and mass
    // booking stay sequential in level order.
    std::vector<State> live;
    live.reserve(level.size());
    for (auto& s : level) {
      bool keep = false;
      for (std::size_t k = 0; k < n_models; ++k) keep = keep || s.w[k].value() >= options.min_weight;
      if (keep) {
        live.push_back(std::move(s));
      } else {
        for (std::size_t k = 0; k < n_models; ++k) frontier[k] += s.w[k];
      }
    }

    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (children[static_cast<std::size_t>(live[i].id)].empty()) missing.push_back(i);
    }
    std::vector<std::vector<std::optional<AdvanceTable>>> fresh(missing.size());
    parallel_for(missing.size(), options.threads, [&](std::size_t j) {
      const auto& table = tables[static_cast<std::size_t>(live[missing[j]].id)];
      auto& out = fresh[j];
      out.resize(A);
      for (std::size_t a = 0; a < A; ++a) {
        if (letter_used[a]) out[a] = table.prepend(static_cast<Letter>(a + 1));
      }
    });
    for (std::size_t j = 0; j < missing.size(); ++j) {
      std::vector<int> ch(A, -1);
      for (std::size_t a = 0; a < A; ++a) {
        if (fresh[j][a]) ch[a] = intern(std::move(*fresh[j][a]));
      }
      children[static_cast<std::size_t>(live[missing[j]].id)] = std::move(ch);
    }
    fresh.clear();

    std::vector<State> next;
    std::unordered_map<int, std::size_t> slot;
    for (const auto& s : live) {
      const auto& ch = children[static_cast<std::size_t>(s.id)];
      for (std::size_t a = 0; a < A; ++a) {
        if (!letter_used[a]) continue;
        bool any = false;
        for (std::size_t k = 0; k < n_models; ++k) {
          w[k] = s.w[k].value() * models[k].factor[a];
          any = any || w[k] != 0.0;
        }
        if (!any) continue;
        ++nodes;
        book(ch[a], w, len + 1, next, slot);
      }
      for (std::size_t k = 0; k < n_models; ++k) frontier[k] += s.w[k].value() * models[k].tail;
    }
    level = std::move(next);
  }
  // Anything still pending here was booked as frontier in book() at max_len.
  for (auto& s : level) {
    for (std::size_t k = 0; k < n_models; ++k) frontier[k] += s.w[k];
  }

  TreeSummary summary;
  summary.nodes = nodes;
  summary.rounding_bound = rounding_bound_for(max_len);
  for (std::size_t k = 0; k < n_models; ++k)
    summary.masses.push_back(TreeMasses{good[k].value(), bad[k].value(), frontier[k].value()});
  return summary;
}

SpeedBracket speed_bracket(const MoveDistribution& mu, Letter max_len, Letter max_letter,
                           const EnumerationOptions& options) {
  const LetterWeights weights[] = {LetterWeights::from(mu, max_letter)};
  const auto summary = tree_masses(weights, max_len, max_letter, options);
  const auto& m = summary.masses.front();
  return make_bracket(m.good, m.bad, m.frontier, summary.rounding_bound, summary.nodes, mu, max_len, max_letter,
                      options.min_weight);
}

BivariateBound bivariate_D(double p, double q, Letter max_len, Letter max_letter, const EnumerationOptions& options) {
  const LetterWeights weights[] = {LetterWeights::monomial(p, q, max_letter)};
  const auto summary = tree_masses(weights, max_len, max_letter, options);
  const auto& m = summary.masses.front();
  // Relative rounding bound scaled by the total monomial mass that was touched.
  const double touched = m.good + m.bad + (std::isfinite(m.frontier) ? m.frontier : 0.0);
  return BivariateBound{m.good, m.frontier, summary.rounding_bound * std::max(1.0, touched)};
}

std::vector<CurveRow> curve(std::span<const double> p_grid, Letter max_len, Letter max_letter,
                            const EnumerationOptions& options) {
  std::vector<LetterWeights> models;
  models.reserve(p_grid.size());
  for (double p : p_grid) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("curve grid points must lie in (0, 1]");
    models.push_back(LetterWeights::from(MoveDistribution::geometric(p), max_letter));
  }
  if (models.empty()) return {};
  const auto summary = tree_masses(models, max_len, max_letter, options);
  std::vector<CurveRow> rows;
  rows.reserve(p_grid.size());
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const auto& m = summary.masses[i];
    rows.push_back(CurveRow{p_grid[i], std::clamp(m.good, 0.0, 1.0), std::clamp(1.0 - m.bad, 0.0, 1.0), max_len,
                            max_letter, summary.rounding_bound});
  }
  return rows;
}

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
  out << "p,lower,upper,L,A,rounding_bound\n";
  for (const auto& r : rows) {
    out << shortest(r.p) << ',' << shortest(r.lower) << ',' << shortest(r.upper) << ',' << r.max_len << ','
        << r.max_letter << ',' << shortest(r.rounding_bound) << '\n';
  }
}

SpeedBracket uniform_speed_terms(Letter k, Letter max_len, const EnumerationOptions& options) {
  if (k < 2) throw InvalidArgument("uniform_speed_terms needs k >= 2");
  return speed_bracket(MoveDistribution::uniform(k), max_len, k, options);
}

namespace {

class SignedSeriesWalk {
 public:
  SignedSeriesWalk(const LetterWeights& weights, Letter max_len, Letter max_letter, double min_weight)
      : weights_(weights), max_len_(max_len), max_letter_(max_letter), min_weight_(min_weight) {}

  /// `whole` has seen the full word, `rest` the word without its first letter.
  void extend(const Configuration& whole, const Configuration& rest, double w, Letter len) {
    if (len >= max_len_) return;
    for (Letter a = 1; a <= max_letter_; ++a) {
      const double cw = w * weights_.factor[static_cast<std::size_t>(a - 1)];
      if (cw == 0.0 || cw < min_weight_) continue;
      Configuration x = whole;
      Configuration y = rest;
      const int eps = (x.advance(a) ? 1 : 0) - (y.advance(a) ? 1 : 0);
      if (eps != 0) sum.add(eps * cw);
      extend(x, y, cw, len + 1);
    }
  }

  CompensatedSum sum;

 private:
  const LetterWeights& weights_;
  Letter max_len_;
  Letter max_letter_;
  double min_weight_;
};

}  // namespace

double old_series_partial(const MoveDistribution& mu, const Configuration& x, Letter max_len, Letter max_letter,
                          const EnumerationOptions& options) {
  check_truncation(max_len, max_letter);
  const auto weights = LetterWeights::from(mu, max_letter);
  const auto tasks = static_cast<std::size_t>(max_letter);
  std::vector<CompensatedSum> partial(tasks);
  parallel_for(tasks, options.threads, [&](std::size_t i) {
    const auto a = static_cast<Letter>(i + 1);
    const double w = weights.factor[i];
    if (w == 0.0 || w < options.min_weight) return;
    SignedSeriesWalk walk(weights, max_len, max_letter, options.min_weight);
    Configuration whole = x;
    if (whole.advance(a)) walk.sum.add(w);
    walk.extend(whole, x, w, 1);
    partial[i] = walk.sum;
  });
  CompensatedSum total;
  for (const auto& s : partial) total += s;
  return total.value();
}

}  // namespace infbin
