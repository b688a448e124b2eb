#include "word_store.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace infbin::cli {

using ordered_json = nlohmann::ordered_json;

std::string to_json_line(const WordStoreRecord& record) {
  ordered_json j;
  j["word"] = std::vector<Letter>(record.word.begin(), record.word.end());
  j["verdict"] = std::string(to_string(record.verdict));
  if (record.minimal) {
    j["minimal"] = *record.minimal;
  } else {
    j["minimal"] = nullptr;
  }
  return j.dump();
}

WordStoreRecord record_from_json(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw InvalidArgument(std::string("word store: bad record: ") + e.what());
  }
  if (!j.is_object() || !j.contains("word") || !j.contains("verdict"))
    throw InvalidArgument("word store: record needs \"word\" and \"verdict\"");
  WordStoreRecord r;
  r.word = Word(j.at("word").get<std::vector<Letter>>());
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  if (j.contains("minimal") && !j.at("minimal").is_null()) r.minimal = j.at("minimal").get<bool>();
  return r;
}

WordStore::WordStore(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    WordStoreRecord r;
    try {
      r = record_from_json(line);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    auto [it, inserted] = index_.try_emplace(r.word, r);
    if (!inserted && !it->second.minimal) it->second.minimal = r.minimal;
  }
}

std::optional<WordStoreRecord> WordStore::find(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool WordStore::put(const WordStoreRecord& record) {
  auto it = index_.find(record.word);
  if (it != index_.end()) {
    const auto& old = it->second;
    if (old.verdict != record.verdict)
      throw StoreConflict("word store holds " + std::string(to_string(old.verdict)) + " for " +
                          record.word.to_string() + ", new verdict is " + std::string(to_string(record.verdict)));
    if (old.minimal && record.minimal && *old.minimal != *record.minimal)
      throw StoreConflict("word store disagrees on minimality of " + record.word.to_string());
    if (old.minimal || !record.minimal) return false;
  }
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot append to word store " + path_.string());
  out << to_json_line(record) << '\n';
  if (!out) throw std::runtime_error("write to word store " + path_.string() + " failed");
  index_[record.word] = record;
  return true;
}

void WordStore::fill(VerdictCache& cache) const {
  for (const auto& [w, r] : index_) cache.insert(w, r.verdict);
}

std::optional<std::filesystem::path> default_store_path() {
  const char* env = std::getenv("INFBIN_WORD_STORE");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::filesystem::path(env);
}

}  // namespace infbin::cli
