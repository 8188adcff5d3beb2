#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/corpus.hpp"

namespace bitext::testing {

inline const std::filesystem::path kFixtureDir{BITEXT_FIXTURE_DIR};

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag = "bitext") {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (std::string(tag) + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Pairs with ids 0..n-1 and the given origin.
inline Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>& texts,
                          Origin origin = Origin::kOther) {
  std::vector<SentencePair> pairs;
  PairId id = 0;
  for (const auto& [s, t] : texts) pairs.push_back({id++, s, t, origin});
  return Corpus(std::move(pairs));
}

inline std::vector<PairId> ids_of(const Corpus& corpus) {
  std::vector<PairId> ids;
  for (const auto& p : corpus) ids.push_back(p.id);
  return ids;
}

/// N pairs with distinct texts; origins cycle through the given strata sizes.
inline Corpus synthetic_corpus(const std::vector<std::pair<Origin, std::size_t>>& strata) {
  std::vector<SentencePair> pairs;
  PairId id = 0;
  for (const auto& [origin, n] : strata)
    for (std::size_t i = 0; i < n; ++i, ++id)
      pairs.push_back({id, "source sentence " + std::to_string(id), "zdanie docelowe " + std::to_string(id), origin});
  return Corpus(std::move(pairs));
}

}  // namespace bitext::testing
