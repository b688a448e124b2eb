#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "infbin/word.hpp"

namespace infbin {

struct FiniteSupport {
  std::map<Letter, double> probs;
};
struct Geometric {
  double p;
};
struct Uniform {
  Letter k;
};
struct Dirac {
  Letter k;
};

/// Move distribution mu on the positive integers.
class MoveDistribution {
 public:
  using Kind = std::variant<FiniteSupport, Geometric, Uniform, Dirac>;

  static MoveDistribution finite(std::map<Letter, double> probs);
  /// p(1-p)^(j-1) for j >= 1, p in (0, 1].
  static MoveDistribution geometric(double p);
  /// Uniform on {1, ..., k}.
  static MoveDistribution uniform(Letter k);
  static MoveDistribution dirac(Letter k);

  /// Parses `geom:p`, `unif:k`, `dirac:k` or `finite:p1,p2,...` (p_i = mu(i)).
  /// Finite weights summing to within 1e-3 of one are renormalized and a note
  /// is appended to `warnings` (when given); anything further off is rejected.
  static MoveDistribution parse(std::string_view spec, std::vector<std::string>* warnings = nullptr);

  const Kind& kind() const noexcept { return kind_; }

  double pmf(Letter j) const;
  /// mu((A, infinity)).
  double tail_mass(Letter A) const;
  Letter min_support() const;
  /// Largest support point, or 0 when the support is unbounded.
  Letter max_support() const;
  bool non_degenerate() const;

  /// Inverse-CDF sample from u in [0, 1).
  Letter sample(double u) const;

  template <class Rng>
  Letter sample(Rng& rng) const {
    return sample(rng.uniform());
  }

  /// Canonical spec string, e.g. "geom:0.5".
  std::string describe() const;

 private:
  explicit MoveDistribution(Kind kind);

  Kind kind_;
  std::vector<double> cdf_;  // finite support only, indexed by letter - 1
};

}  // namespace infbin
