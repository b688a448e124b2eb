#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "infbin/be_graph.hpp"
#include "infbin/configuration.hpp"
#include "infbin/distribution.hpp"
#include "infbin/series.hpp"
#include "infbin/simulator.hpp"
#include "infbin/word_lab.hpp"
#include "word_store.hpp"

namespace infbin::cli {

using ordered_json = nlohmann::ordered_json;

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_budget(const std::string& text) {
  if (text.empty()) throw InvalidArgument("empty budget");
  double scale = 1.0;
  std::string number = text;
  switch (text.back()) {
    case 's': number.pop_back(); break;
    case 'm': scale = 60.0; number.pop_back(); break;
    case 'h': scale = 3600.0; number.pop_back(); break;
    default: break;
  }
  double value = 0;
  auto res = std::from_chars(number.data(), number.data() + number.size(), value);
  if (res.ec != std::errc{} || res.ptr != number.data() + number.size() || !(value > 0))
    throw InvalidArgument("bad budget '" + text + "' (expected e.g. 60s, 5m, 1h)");
  return value * scale;
}

namespace {

double parse_double(std::string_view s, const char* what) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InvalidArgument(std::string("bad ") + what + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const auto colon = split(text, ':');
  if (colon.size() == 3) {
    const double a = parse_double(colon[0], "grid start");
    const double b = parse_double(colon[1], "grid end");
    const double step = parse_double(colon[2], "grid step");
    if (!(step > 0) || b < a) throw InvalidArgument("grid needs start <= end and step > 0");
    const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::int64_t i = 0; i < count; ++i)
      grid.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
  } else if (colon.size() == 1) {
    for (auto part : split(text, ',')) grid.push_back(parse_double(part, "grid point"));
  } else {
    throw InvalidArgument("grid must be a:b:step or a comma list");
  }
  return grid;
}

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  std::string store;
};

std::unique_ptr<WordStore> open_store(const Globals& g) {
  if (!g.store.empty()) return std::make_unique<WordStore>(g.store);
  if (auto path = default_store_path()) return std::make_unique<WordStore>(*path);
  return nullptr;
}

std::string fixed6(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const Globals& g, const std::string& text, std::ostream& out) {
  const Word w = Word::parse(text);
  if (w.empty()) throw InvalidArgument("classify needs a non-empty word");
  if (w.max_letter() > kMaxExactLetter)
    throw SizeLimitError("letters above " + std::to_string(kMaxExactLetter) + " are not classified exactly");
  auto store = open_store(g);
  VerdictCache cache;
  Classification c;
  const auto stored = store ? store->find(w) : std::nullopt;
  if (stored && stored->minimal) {
    c.verdict = stored->verdict;
    c.minimal = stored->minimal;
  } else {
    if (store) store->fill(cache);
    c = classify(w, &cache);
  }
  if (store) {
    store->put({w, c.verdict, c.minimal});
    for (const auto& [word, verdict] : cache.entries())
      if (word != w) store->put({word, verdict, std::nullopt});
  }

  out << to_string(c.verdict);
  if (c.minimal) out << (*c.minimal ? ", minimal" : ", not minimal");
  out << '\n';
  out << "word=" << w.to_string() << '\n';
  out << "horizon=" << horizon(w) << '\n';
  out << "coupling_lower_bound=" << tracker_run(w).depth() << '\n';
  if (w.max_letter() <= 12) out << "coupling_number=" << coupling_number(w) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- speed

struct SpeedArgs {
  std::string mu;
  Letter len = 12;
  Letter max_letter = 0;
  double min_weight = -1;
  bool leaves = false;
  bool json = false;
};

Letter default_max_letter(const MoveDistribution& mu, Letter len) {
  const Letter top = mu.max_support();
  if (top == 0) return std::min(len, kMaxExactLetter);
  return std::min(top, kMaxExactLetter);
}

int cmd_speed(const Globals& g, const SpeedArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto mu = MoveDistribution::parse(a.mu, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (!mu.non_degenerate() && mu.min_support() != 1) {
    err << "warning: " << mu.describe()
        << " is degenerate; the minimal-word series does not give its speed, so no bracket is computed\n";
    out << "formula suppressed for " << mu.describe() << "; forward Monte Carlo: infbin simulate "
        << mu.describe() << '\n';
    return kOk;
  }
  if (a.len < 1) throw InvalidArgument("--len must be >= 1");
  const Letter A = a.max_letter > 0 ? a.max_letter : default_max_letter(mu, a.len);
  if (A > kMaxExactLetter) throw SizeLimitError("--max-letter above " + std::to_string(kMaxExactLetter));
  EnumerationOptions opts;
  opts.threads = g.threads;
  opts.min_weight = a.min_weight >= 0 ? a.min_weight : 1e-10;

  SpeedBracket b;
  if (a.leaves) {
    auto store = open_store(g);
    if (!store) throw InvalidArgument("--leaves needs --store or INFBIN_WORD_STORE");
    b = enumerate_minimal(mu, a.len, A, [&](const LeafRecord& r) { store->put({r.word, r.verdict, true}); }, opts);
  } else {
    b = speed_bracket(mu, a.len, A, opts);
  }

  if (a.json) {
    ordered_json j;
    j["op"] = "speed";
    j["mu"] = mu.describe();
    j["params"] = {{"L", a.len}, {"A", A}, {"min_weight", opts.min_weight}};
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["good_mass"] = b.good_mass;
    j["bad_mass"] = b.bad_mass;
    j["frontier_mass"] = b.frontier_mass;
    j["rounding_bound"] = b.rounding_bound;
    j["seed"] = g.seed;
    out << j.dump() << '\n';
    return kOk;
  }
  out << '[' << fixed6(b.lower) << ", " << fixed6(b.upper) << "]\n";
  out << "mu=" << mu.describe() << " L=" << a.len << " A=" << A << " min_weight=" << shortest(opts.min_weight)
      << '\n';
  out << "good_mass=" << shortest(b.good_mass) << " bad_mass=" << shortest(b.bad_mass)
      << " frontier_mass=" << shortest(b.frontier_mass) << " rounding_bound=" << shortest(b.rounding_bound) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- curve

struct CurveArgs {
  std::string grid = "0.1:1.0:0.1";
  Letter len = 10;
  Letter max_letter = 10;
  double min_weight = 1e-8;
};

int cmd_curve(const Globals& g, const CurveArgs& a, std::ostream& out) {
  const auto grid = parse_grid(a.grid);
  EnumerationOptions opts;
  opts.threads = g.threads;
  opts.min_weight = a.min_weight;
  const auto rows = curve(grid, a.len, a.max_letter, opts);
  write_curve_csv(out, rows);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string mu;
  std::int64_t steps = 1'000'000;
  std::uint64_t runs = 30;
  std::string start;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto mu = MoveDistribution::parse(a.mu, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  const Configuration x0 = a.start.empty() ? Configuration::minimal() : Configuration::from_json(a.start);
  const auto e = forward_ensemble(mu, x0, a.steps, a.runs, g.seed, g.threads);
  ordered_json j;
  j["op"] = "simulate";
  j["mu"] = mu.describe();
  j["params"] = {{"steps", a.steps}, {"runs", a.runs}, {"start", ordered_json::parse(x0.to_json())}};
  j["estimate"] = e.estimate;
  j["stderr"] = e.stderr_;
  j["seed"] = g.seed;
  j["tau_histogram"] = ordered_json::array();
  out << j.dump() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- perfect

struct PerfectArgs {
  std::string mu;
  std::size_t K = 1;
  std::uint64_t replicas = 1000;
  std::int64_t max_horizon = std::int64_t{1} << 24;
};

int cmd_perfect(const Globals& g, const PerfectArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto mu = MoveDistribution::parse(a.mu, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  PerfectOptions opts;
  opts.max_horizon = a.max_horizon;
  const auto ens = perfect_ensemble(mu, a.K, a.replicas, g.seed, g.threads, opts);
  ordered_json j;
  j["op"] = "perfect";
  j["mu"] = mu.describe();
  j["params"] = {{"K", a.K},
                 {"replicas", a.replicas},
                 {"max_horizon", a.max_horizon},
                 {"tau", "tracker-certified, an upper bound on tau_K"}};
  j["estimate"] = ens.speed.estimate;
  j["stderr"] = ens.speed.stderr_;
  j["seed"] = g.seed;
  auto hist = ordered_json::array();
  for (const auto& [tau, count] : ens.tau.histogram) hist.push_back({tau, count});
  j["tau_histogram"] = hist;
  j["mean_scenery"] = ens.mean_scenery;
  out << j.dump() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- begraph

struct BegraphArgs {
  std::string p = "0.5";
  std::int64_t n = 100'000;
  std::uint64_t replicas = 50;
};

int cmd_begraph(const Globals& g, const BegraphArgs& a, std::ostream& out) {
  std::vector<double> ps;
  for (auto part : split(a.p, ',')) ps.push_back(parse_double(part, "edge probability"));
  out << "p,n,estimate,stderr,replicas,seed\n";
  for (double p : ps) {
    const auto e = estimate_C(p, a.n, a.replicas, g.seed, g.threads);
    out << shortest(p) << ',' << a.n << ',' << shortest(e.estimate) << ',' << shortest(e.stderr_) << ','
        << a.replicas << ',' << g.seed << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

struct Tier {
  const char* name;
  double min_budget;  // seconds
  Letter len;
  double min_weight;
  std::int64_t steps;
  std::uint64_t runs;
  std::uint64_t replicas;
};

// Chosen from the budget alone so the work (and every output byte) never
// depends on machine speed.
constexpr Tier kTiers[] = {
    {"smoke", 0, 8, 1e-9, 20'000, 30, 4'000},
    {"quick", 30, 10, 1e-10, 300'000, 30, 50'000},
    {"standard", 300, 12, 1e-12, 1'000'000, 30, 100'000},
};

const Tier& tier_for(double budget) {
  const Tier* t = &kTiers[0];
  for (const auto& c : kTiers)
    if (budget >= c.min_budget) t = &c;
  return *t;
}

struct VerifyArgs {
  std::string panel = "default";
  std::string budget = "60s";
};

int cmd_verify(const Globals& g, const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.panel != "default") throw InvalidArgument("unknown panel '" + a.panel + "' (known: default)");
  const Tier& tier = tier_for(parse_budget(a.budget));
  const char* panel[] = {"geom:0.5", "geom:0.8", "unif:2", "unif:3"};

  out << "mu,tier,L,A,lower,upper,forward,forward_stderr,stationary,stationary_stderr,status\n";
  bool ok = true;
  for (const char* spec : panel) {
    const auto mu = MoveDistribution::parse(spec);
    const Letter A = default_max_letter(mu, tier.len);
    EnumerationOptions opts;
    opts.threads = g.threads;
    opts.min_weight = mu.max_support() == 0 ? tier.min_weight : 0.0;
    const auto b = speed_bracket(mu, tier.len, A, opts);
    const auto fwd = forward_ensemble(mu, Configuration::minimal(), tier.steps, tier.runs, g.seed, g.threads);
    const auto st = stationary_speed(mu, tier.replicas, g.seed, g.threads);

    const double lo = b.lower - b.rounding_bound;
    const double hi = b.upper + b.rounding_bound;
    auto inside = [&](const Estimate& e) {
      return e.estimate >= lo - 3 * e.stderr_ && e.estimate <= hi + 3 * e.stderr_ && e.estimate >= 0 &&
             e.estimate <= 1;
    };
    const double combined = std::hypot(fwd.stderr_, st.stderr_);
    const bool row_ok = inside(fwd) && inside(st) && std::abs(fwd.estimate - st.estimate) <= 3 * combined;
    ok = ok && row_ok;
    out << spec << ',' << tier.name << ',' << tier.len << ',' << A << ',' << shortest(b.lower) << ','
        << shortest(b.upper) << ',' << shortest(fwd.estimate) << ',' << shortest(fwd.stderr_) << ','
        << shortest(st.estimate) << ',' << shortest(st.stderr_) << ',' << (row_ok ? "ok" : "violation") << '\n';
    err << "verify " << spec << ": bracket [" << fixed6(b.lower) << ", " << fixed6(b.upper) << "], forward "
        << fixed6(fwd.estimate) << ", stationary " << fixed6(st.estimate) << (row_ok ? "" : "  <-- 3 sigma violation")
        << '\n';
  }
  return ok ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinite-bin model: word classification, speed brackets and simulation", "infbin"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Root seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: all cores); never changes output")
      ->capture_default_str();
  app.add_option("--out", g.out, "Write the main output to this file");
  app.add_option("--store", g.store, "Word store file (default: $INFBIN_WORD_STORE)");

  std::string word_text;
  auto* classify_cmd = app.add_subcommand("classify", "Verdict, minimality and coupling data of a word");
  classify_cmd->add_option("word", word_text, "Comma-separated letters, e.g. 2,3,2,2")->required();

  SpeedArgs speed_args;
  auto* speed_cmd = app.add_subcommand("speed", "Certified bracket on the front speed");
  speed_cmd->add_option("mu", speed_args.mu, "geom:p | unif:k | dirac:k | finite:p1,p2,...")->required();
  speed_cmd->add_option("--len,-L", speed_args.len, "Longest word explored")->capture_default_str();
  speed_cmd->add_option("--max-letter,-A", speed_args.max_letter, "Largest letter explored (default: auto)");
  speed_cmd->add_option("--min-weight", speed_args.min_weight,
                        "Prune subtrees lighter than this, booked as frontier (default 1e-10)");
  speed_cmd->add_flag("--leaves", speed_args.leaves, "Append minimal words to the word store");
  speed_cmd->add_flag("--json", speed_args.json, "JSON record instead of text");

  CurveArgs curve_args;
  auto* curve_cmd = app.add_subcommand("curve", "Brackets on the longest-path rate C(p) over a grid");
  curve_cmd->add_option("--grid", curve_args.grid, "a:b:step or p1,p2,...")->capture_default_str();
  curve_cmd->add_option("--len,-L", curve_args.len)->capture_default_str();
  curve_cmd->add_option("--max-letter,-A", curve_args.max_letter)->capture_default_str();
  curve_cmd->add_option("--min-weight", curve_args.min_weight)->capture_default_str();

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Forward Monte Carlo speed estimate");
  sim_cmd->add_option("mu", sim_args.mu)->required();
  sim_cmd->add_option("--steps", sim_args.steps)->capture_default_str();
  sim_cmd->add_option("--runs", sim_args.runs)->capture_default_str();
  sim_cmd->add_option("--start", sim_args.start, "Start configuration as JSON");

  PerfectArgs perfect_args;
  auto* perfect_cmd = app.add_subcommand("perfect", "Perfect samples of the stationary K-scenery");
  perfect_cmd->add_option("mu", perfect_args.mu)->required();
  perfect_cmd->add_option("-K", perfect_args.K)->capture_default_str()->check(CLI::PositiveNumber);
  perfect_cmd->add_option("--replicas", perfect_args.replicas)->capture_default_str();
  perfect_cmd->add_option("--max-horizon", perfect_args.max_horizon)->capture_default_str();

  BegraphArgs be_args;
  auto* be_cmd = app.add_subcommand("begraph", "Monte Carlo of the Barak-Erdos longest-path rate");
  be_cmd->add_option("--p", be_args.p, "Edge probabilities, comma-separated")->capture_default_str();
  be_cmd->add_option("--n", be_args.n)->capture_default_str();
  be_cmd->add_option("--replicas", be_args.replicas)->capture_default_str();

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Series / forward / stationary consistency on a fixed panel");
  verify_cmd->add_option("--panel", verify_args.panel)->capture_default_str();
  verify_cmd->add_option("--budget", verify_args.budget, "Selects the work tier, e.g. 60s")->capture_default_str();

  std::vector<const char*> argv{"infbin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!g.out.empty()) {
    file.open(g.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write " << g.out << '\n';
      return kUsage;
    }
    sink = &file;
  }

  try {
    int code = kOk;
    if (*classify_cmd) code = cmd_classify(g, word_text, *sink);
    else if (*speed_cmd) code = cmd_speed(g, speed_args, *sink, err);
    else if (*curve_cmd) code = cmd_curve(g, curve_args, *sink);
    else if (*sim_cmd) code = cmd_simulate(g, sim_args, *sink, err);
    else if (*perfect_cmd) code = cmd_perfect(g, perfect_args, *sink, err);
    else if (*be_cmd) code = cmd_begraph(g, be_args, *sink);
    else if (*verify_cmd) code = cmd_verify(g, verify_args, *sink, err);
    sink->flush();
    return code;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kLimit;
  } catch (const HorizonError& e) {
    err << "error: " << e.what() << " (deepest certified depth " << e.depth_reached << ")\n";
    return kLimit;
  } catch (const StoreConflict& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace infbin::cli
