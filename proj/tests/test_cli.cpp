#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "word_store.hpp"

using namespace infbin;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "infbin-cli-tests";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("classify") {
  auto r = run({"classify", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("bad, minimal\n", 0) == 0);
  CHECK(r.out.find("horizon=1") != std::string::npos);
  r = run({"classify", "2,2"});
  CHECK(r.out.rfind("neither\n", 0) == 0);
  r = run({"classify", "2,3,2,2"});
  CHECK(r.out.find("coupling_number=1\n") != std::string::npos);
  CHECK(r.out.find("coupling_lower_bound=") != std::string::npos);
  r = run({"classify", "1,1"});
  CHECK(r.out.rfind("good, not minimal\n", 0) == 0);
  r = run({"classify", "20,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("coupling_number") == std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"classify", "1,x"}).code == cli::kUsage);
  CHECK(run({"classify", "1,x"}).err.find("error:") != std::string::npos);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"speed", "geom:2"}).code == cli::kUsage);
  CHECK(run({"classify", "40"}).code == cli::kLimit);
  CHECK(run({"speed", "geom:0.5", "--max-letter", "31"}).code == cli::kLimit);
  CHECK(run({"perfect", "unif:3", "-K", "6", "--max-horizon", "2", "--replicas", "3"}).code == cli::kLimit);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("speed") {
  auto r = run({"speed", "geom:1", "--len", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("[1.000000, 1.000000]\n", 0) == 0);

  r = run({"speed", "dirac:2"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
  CHECK(r.out.find("simulate dirac:2") != std::string::npos);
  CHECK(r.out.find('[') == std::string::npos);

  r = run({"speed", "unif:2", "--len", "12", "--json"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["lower"].get<double>() == 0.66650390625);
  CHECK(j["upper"].get<double>() == 0.666748046875);
  CHECK(j["params"]["A"].get<int>() == 2);

  r = run({"speed", "finite:0.5,0.4995", "--len", "3"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
}

TEST_CASE("curve") {
  const auto r = run({"curve", "--grid", "0.1:1.0:0.1", "--len", "6", "--max-letter", "6"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 11);
  CHECK(rows.front() == "p,lower,upper,L,A,rounding_bound");
  CHECK(rows[1].rfind("0.1,", 0) == 0);
  CHECK(rows[3].rfind("0.3,", 0) == 0);
  CHECK(rows.back().rfind("1,1,1,6,6,", 0) == 0);
  CHECK(cli::parse_grid("0.25,0.5") == std::vector<double>{0.25, 0.5});
  CHECK_THROWS_AS(cli::parse_grid("1:0:0.1"), InvalidArgument);
}

TEST_CASE("simulate, perfect and begraph records") {
  auto r = run({"--seed", "5", "simulate", "dirac:1", "--steps", "100", "--runs", "3"});
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["op"] == "simulate");
  CHECK(j["estimate"].get<double>() == 1.0);
  CHECK(j["seed"].get<std::uint64_t>() == 5);

  r = run({"perfect", "geom:0.5", "-K", "2", "--replicas", "1000"});
  CHECK(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["op"] == "perfect");
  CHECK(j["mu"] == "geom:0.5");
  std::uint64_t total = 0;
  for (const auto& bin : j["tau_histogram"]) total += bin[1].get<std::uint64_t>();
  CHECK(total == 1000);
  for (const char* key : {"params", "estimate", "stderr", "seed"}) CHECK(j.contains(key));

  r = run({"begraph", "--p", "1,0.5", "--n", "100", "--replicas", "4"});
  CHECK(r.out.rfind("p,n,estimate,stderr,replicas,seed\n1,100,0.99,0,4,1\n0.5,100,", 0) == 0);
}

TEST_CASE("thread count does not change output bytes") {
  for (const std::vector<std::string>& cmd :
       {std::vector<std::string>{"perfect", "unif:3", "-K", "2", "--replicas", "700"},
        std::vector<std::string>{"curve", "--grid", "0.3,0.6", "--len", "6", "--max-letter", "6"},
        std::vector<std::string>{"simulate", "geom:0.4", "--steps", "2000", "--runs", "9"},
        std::vector<std::string>{"verify", "--budget", "5s"}}) {
    auto one = cmd;
    one.insert(one.begin(), {"--threads", "1"});
    auto four = cmd;
    four.insert(four.begin(), {"--threads", "4"});
    const auto a = run(one);
    const auto b = run(four);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("verify writes a report") {
  const auto path = temp_path("verify.csv");
  const auto r = run({"--out", path.string(), "verify", "--panel", "default", "--budget", "5s"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto text = slurp(path);
  CHECK(text.rfind("mu,tier,", 0) == 0);
  CHECK(text.find("violation") == std::string::npos);
  CHECK(run({"verify", "--panel", "other"}).code == cli::kUsage);
  CHECK(cli::parse_budget("60s") == 60.0);
  CHECK(cli::parse_budget("2m") == 120.0);
  CHECK(cli::parse_budget("90") == 90.0);
  CHECK_THROWS_AS(cli::parse_budget("fast"), InvalidArgument);
}

TEST_CASE("word store") {
  const auto path = temp_path("store.jsonl");
  auto r = run({"--store", path.string(), "classify", "2,1,2"});
  CHECK(r.code == 0);
  const auto first = slurp(path);
  CHECK(first.find("{\"word\":[2,1,2],\"verdict\":\"bad\",\"minimal\":false}\n") != std::string::npos);
  CHECK(first.find("{\"word\":[1,2],\"verdict\":\"bad\",\"minimal\":null}\n") != std::string::npos);

  r = run({"--store", path.string(), "classify", "2,1,2"});
  CHECK(r.out.rfind("bad, not minimal\n", 0) == 0);
  CHECK(slurp(path) == first);  // nothing new to append

  r = run({"--store", path.string(), "classify", "1,2"});
  CHECK(r.out.rfind("bad, minimal\n", 0) == 0);
  const auto second = slurp(path);
  CHECK(second.rfind(first, 0) == 0);  // append-only
  CHECK(second.size() > first.size());

  cli::WordStore store(path);
  CHECK(store.find(Word{1, 2})->minimal == true);
  CHECK_THROWS_AS(store.put({Word{1, 2}, Verdict::Good, true}), cli::StoreConflict);

  const auto leaves = temp_path("leaves.jsonl");
  r = run({"--store", leaves.string(), "speed", "unif:2", "--len", "4", "--leaves"});
  CHECK(r.code == 0);
  cli::WordStore leaf_store(leaves);
  CHECK(leaf_store.find(Word{1})->verdict == Verdict::Good);
  CHECK(leaf_store.find(Word{1, 2})->verdict == Verdict::Bad);
  CHECK(run({"speed", "unif:2", "--leaves"}).code == cli::kUsage);

  const cli::WordStoreRecord rec{Word{3, 1}, Verdict::Good, std::nullopt};
  CHECK(cli::record_from_json(cli::to_json_line(rec)) == rec);
  CHECK_THROWS_AS(cli::record_from_json("{\"word\":[1]}"), InvalidArgument);
}
