#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "infbin/word.hpp"
#include "infbin/word_lab.hpp"

namespace infbin::cli {

struct WordStoreRecord {
  Word word;
  Verdict verdict = Verdict::Neither;
  std::optional<bool> minimal;

  friend bool operator==(const WordStoreRecord&, const WordStoreRecord&) = default;
};

/// `{"word":[...],"verdict":"...","minimal":...}` on one line, no newline.
std::string to_json_line(const WordStoreRecord& record);
WordStoreRecord record_from_json(std::string_view line);

/// Thrown when a new record disagrees with what the store already holds.
class StoreConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Append-only file of classified words, one JSON record per line. A later
/// line may only fill in a minimality flag that an earlier line left null.
class WordStore {
 public:
  /// Reads `path` if it exists; the file is created on the first append.
  explicit WordStore(std::filesystem::path path);

  const std::filesystem::path& path() const noexcept { return path_; }
  std::optional<WordStoreRecord> find(const Word& w) const;
  std::size_t size() const noexcept { return index_.size(); }

  /// Appends `record` unless it adds nothing; returns whether a line was written.
  bool put(const WordStoreRecord& record);

  /// Copies every stored verdict into `cache`.
  void fill(VerdictCache& cache) const;

 private:
  std::filesystem::path path_;
  std::map<Word, WordStoreRecord> index_;
};

/// Store path from INFBIN_WORD_STORE, if set and non-empty.
std::optional<std::filesystem::path> default_store_path();

}  // namespace infbin::cli
