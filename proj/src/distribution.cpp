#include "infbin/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace infbin {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kFiniteTolerance = 1e-12;

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidArgument("cannot parse number '" + std::string(s) + "'");
  return v;
}

Letter parse_letter(std::string_view s) {
  Letter v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidArgument("cannot parse integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

MoveDistribution::MoveDistribution(Kind kind) : kind_(std::move(kind)) {}

MoveDistribution MoveDistribution::finite(std::map<Letter, double> probs) {
  double total = 0;
  for (const auto& [letter, prob] : probs) {
    if (letter < 1) throw InvalidArgument("support must be positive integers");
    if (!(prob >= 0)) throw InvalidArgument("probabilities must be non-negative");
    total += prob;
  }
  if (std::abs(total - 1.0) > kFiniteTolerance)
    throw InvalidArgument("finite-support probabilities must sum to 1 (got " + shortest(total) + ")");
  std::erase_if(probs, [](const auto& kv) { return kv.second == 0.0; });
  if (probs.empty()) throw InvalidArgument("empty support");
  MoveDistribution mu(FiniteSupport{std::move(probs)});
  const auto& support = std::get<FiniteSupport>(mu.kind_).probs;
  mu.cdf_.assign(static_cast<std::size_t>(support.rbegin()->first), 0.0);
  double acc = 0;
  for (Letter j = 1; j <= support.rbegin()->first; ++j) {
    if (auto it = support.find(j); it != support.end()) acc += it->second;
    mu.cdf_[static_cast<std::size_t>(j - 1)] = acc;
  }
  return mu;
}

MoveDistribution MoveDistribution::geometric(double p) {
  if (!(p > 0 && p <= 1)) throw InvalidArgument("geometric parameter must lie in (0, 1]");
  return MoveDistribution(Geometric{p});
}

MoveDistribution MoveDistribution::uniform(Letter k) {
  if (k < 1) throw InvalidArgument("uniform range must be >= 1");
  return MoveDistribution(Uniform{k});
}

MoveDistribution MoveDistribution::dirac(Letter k) {
  if (k < 1) throw InvalidArgument("Dirac atom must be >= 1");
  return MoveDistribution(Dirac{k});
}

MoveDistribution MoveDistribution::parse(std::string_view spec, std::vector<std::string>* warnings) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw InvalidArgument("move distribution must look like geom:p, unif:k, dirac:k or finite:p1,p2,...");
  const auto kind = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  if (kind == "geom") return geometric(parse_double(arg));
  if (kind == "unif") return uniform(parse_letter(arg));
  if (kind == "dirac") return dirac(parse_letter(arg));
  if (kind == "finite") {
    std::vector<double> weights;
    std::string_view rest = arg;
    while (true) {
      const auto comma = rest.find(',');
      weights.push_back(parse_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    double total = 0;
    for (double w : weights) total += w;
    if (std::abs(total - 1.0) > 1e-3)
      throw InvalidArgument("finite weights sum to " + shortest(total) + ", expected 1");
    if (std::abs(total - 1.0) > kFiniteTolerance && warnings)
      warnings->push_back("finite weights sum to " + shortest(total) + "; renormalized");
    std::map<Letter, double> probs;
    for (std::size_t i = 0; i < weights.size(); ++i) probs[static_cast<Letter>(i + 1)] = weights[i] / total;
    // Renormalizing by total leaves a residual of a few ulps at most.
    double sum = 0;
    for (const auto& [j, w] : probs) sum += w;
    if (std::abs(sum - 1.0) > kFiniteTolerance) throw InvalidArgument("cannot renormalize finite weights");
    return finite(std::move(probs));
  }
  throw InvalidArgument("unknown distribution kind '" + std::string(kind) + "'");
}

double MoveDistribution::pmf(Letter j) const {
  if (j < 1) return 0.0;
  return std::visit(overloaded{
                        [j](const FiniteSupport& f) {
                          auto it = f.probs.find(j);
                          return it == f.probs.end() ? 0.0 : it->second;
                        },
                        [j](const Geometric& g) {
                          if (g.p == 1.0) return j == 1 ? 1.0 : 0.0;
                          return g.p * std::pow(1.0 - g.p, static_cast<double>(j - 1));
                        },
                        [j](const Uniform& u) { return j <= u.k ? 1.0 / static_cast<double>(u.k) : 0.0; },
                        [j](const Dirac& d) { return j == d.k ? 1.0 : 0.0; },
                    },
                    kind_);
}

double MoveDistribution::tail_mass(Letter A) const {
  if (A < 0) A = 0;
  return std::visit(overloaded{
                        [A](const FiniteSupport& f) {
                          double t = 0;
                          for (auto it = f.probs.upper_bound(A); it != f.probs.end(); ++it) t += it->second;
                          return t;
                        },
                        [A](const Geometric& g) {
                          if (g.p == 1.0) return A >= 1 ? 0.0 : 1.0;
                          return std::pow(1.0 - g.p, static_cast<double>(A));
                        },
                        [A](const Uniform& u) {
                          return A >= u.k ? 0.0 : static_cast<double>(u.k - A) / static_cast<double>(u.k);
                        },
                        [A](const Dirac& d) { return d.k > A ? 1.0 : 0.0; },
                    },
                    kind_);
}

Letter MoveDistribution::min_support() const {
  return std::visit(overloaded{
                        [](const FiniteSupport& f) { return f.probs.begin()->first; },
                        [](const Geometric&) { return Letter{1}; },
                        [](const Uniform&) { return Letter{1}; },
                        [](const Dirac& d) { return d.k; },
                    },
                    kind_);
}

Letter MoveDistribution::max_support() const {
  return std::visit(overloaded{
                        [](const FiniteSupport& f) { return f.probs.rbegin()->first; },
                        [](const Geometric& g) { return g.p == 1.0 ? Letter{1} : Letter{0}; },
                        [](const Uniform& u) { return u.k; },
                        [](const Dirac& d) { return d.k; },
                    },
                    kind_);
}

bool MoveDistribution::non_degenerate() const {
  return std::visit(overloaded{
                        [](const FiniteSupport& f) { return f.probs.size() >= 2; },
                        [](const Geometric& g) { return g.p < 1.0; },
                        [](const Uniform& u) { return u.k >= 2; },
                        [](const Dirac&) { return false; },
                    },
                    kind_);
}

Letter MoveDistribution::sample(double u) const {
  return std::visit(overloaded{
                        [this, u](const FiniteSupport& f) {
                          auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
                          if (it == cdf_.end()) return f.probs.rbegin()->first;
                          return static_cast<Letter>(it - cdf_.begin()) + 1;
                        },
                        [u](const Geometric& g) {
                          if (g.p == 1.0) return Letter{1};
                          const double x = std::floor(std::log1p(-u) / std::log1p(-g.p));
                          constexpr double cap = 0x1.0p62;
                          return x >= cap ? static_cast<Letter>(cap) : static_cast<Letter>(x) + 1;
                        },
                        [u](const Uniform& un) {
                          const auto j = static_cast<Letter>(u * static_cast<double>(un.k)) + 1;
                          return std::min(j, un.k);
                        },
                        [](const Dirac& d) { return d.k; },
                    },
                    kind_);
}

std::string MoveDistribution::describe() const {
  return std::visit(overloaded{
                        [](const FiniteSupport& f) {
                          std::string s = "finite:";
                          for (Letter j = 1; j <= f.probs.rbegin()->first; ++j) {
                            if (j > 1) s += ',';
                            auto it = f.probs.find(j);
                            s += shortest(it == f.probs.end() ? 0.0 : it->second);
                          }
                          return s;
                        },
                        [](const Geometric& g) { return "geom:" + shortest(g.p); },
                        [](const Uniform& u) { return "unif:" + std::to_string(u.k); },
                        [](const Dirac& d) { return "dirac:" + std::to_string(d.k); },
                    },
                    kind_);
}

}  // namespace infbin
