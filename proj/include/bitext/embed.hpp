#pragma once

// Sentence vectors from word-embedding dictionaries (mean pooling) and the
// vector math shared by every scoring backend.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitext/error.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

/// Fixed-dimension vector of finite 32-bit components, dim >= 1.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(std::vector<float> components) : components_(std::move(components)) {
    if (components_.empty()) throw Error(ErrorCode::kDimensionMismatch, "embedding vector needs dim >= 1");
    for (float c : components_)
      if (!std::isfinite(c)) throw Error(ErrorCode::kInvalidNumber, "non-finite embedding component");
  }

  std::size_t dim() const noexcept { return components_.size(); }
  std::span<const float> components() const noexcept { return components_; }
  float operator[](std::size_t i) const { return components_[i]; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<float> components_;
};

/// dot(u, v) / (|u| |v|), accumulated in double and clamped to [-1, 1].
inline double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size())
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine of dim " + std::to_string(u.size()) + " and dim " + std::to_string(v.size()));
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of an all-zero vector");
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

inline double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  return cosine_similarity(u.components(), v.components());
}

/// Case fold, split on whitespace, then peel leading and trailing punctuation
/// (one token per punctuation character).
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const std::u32string folded = unicode::decode(unicode::nfc(unicode::case_fold(text)));
  std::size_t i = 0;
  while (i < folded.size()) {
    while (i < folded.size() && unicode::is_white_space(folded[i])) ++i;
    std::size_t j = i;
    while (j < folded.size() && !unicode::is_white_space(folded[j])) ++j;
    if (i == j) break;
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi && unicode::is_punctuation(folded[lo]))
      tokens.push_back(unicode::encode(folded.substr(lo++, 1)));
    std::size_t trail = hi;
    while (trail > lo && unicode::is_punctuation(folded[trail - 1])) --trail;
    if (lo < trail) tokens.push_back(unicode::encode(std::u32string_view(folded).substr(lo, trail - lo)));
    for (std::size_t k = trail; k < hi; ++k) tokens.push_back(unicode::encode(folded.substr(k, 1)));
    i = j;
  }
  return tokens;
}

/// Word -> vector dictionary with one shared dimension. Rows live in a flat
/// buffer; lookups hand out views into it.
class WordEmbeddingTable {
 public:
  explicit WordEmbeddingTable(std::size_t dim, std::string language = {})
      : dim_(dim), language_(std::move(language)) {
    if (dim_ == 0) throw Error(ErrorCode::kMalformedHeader, "word table dim must be >= 1");
  }

  /// Returns false (and stores nothing) when the word is already present.
  bool add(std::string word, std::span<const float> vector) {
    if (vector.size() != dim_)
      throw Error(ErrorCode::kDimensionMismatch, "vector for '" + word + "' has dim " +
                                                     std::to_string(vector.size()) + ", table dim " +
                                                     std::to_string(dim_));
    for (float c : vector)
      if (!std::isfinite(c)) throw Error(ErrorCode::kInvalidNumber, "non-finite component for '" + word + "'");
    const auto [it, inserted] = index_.try_emplace(std::move(word), index_.size());
    if (!inserted) return false;
    data_.insert(data_.end(), vector.begin(), vector.end());
    return true;
  }

  std::optional<std::size_t> row_of(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const float> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }

  std::optional<std::span<const float>> find(std::string_view word) const {
    if (auto r = row_of(word)) return row(*r);
    return std::nullopt;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return index_.size(); }
  const std::string& language() const noexcept { return language_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::size_t dim_;
  std::string language_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<float> data_;
};

struct WordTableLoad {
  WordEmbeddingTable table;
  std::size_t duplicates = 0;
};

namespace detail {

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace detail

/// Loads the word-vector text format: a "<count> <dim>" header line, then
/// "word v1 ... vdim" rows. The first occurrence of a repeated word wins.
inline WordTableLoad load_word_table(const std::filesystem::path& path, std::string language = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kMalformedHeader, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_spaces(line);
  std::size_t declared = 0;
  std::size_t dim = 0;
  auto parse_count = [](std::string_view f, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
    return ec == std::errc{} && ptr == f.data() + f.size();
  };
  if (header.size() != 2 || !parse_count(header[0], declared) || !parse_count(header[1], dim) || dim == 0)
    throw Error(ErrorCode::kMalformedHeader, path.string() + ": expected '<count> <dim>', got '" + line + "'");

  WordTableLoad result{WordEmbeddingTable(dim, std::move(language)), 0};
  std::vector<float> values(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = detail::split_spaces(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1)
      throw Error(ErrorCode::kDimensionMismatch, path.string() + " line " + std::to_string(line_no) +
                                                     ": " + std::to_string(fields.size() - 1) +
                                                     " values, header dim " + std::to_string(dim));
    for (std::size_t k = 0; k < dim; ++k) {
      const auto f = fields[k + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[k]);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(values[k]))
        throw Error(ErrorCode::kInvalidNumber, path.string() + " line " + std::to_string(line_no) +
                                                   ": bad value '" + std::string(f) + "'");
    }
    if (!result.table.add(std::string(fields[0]), values)) ++result.duplicates;
  }
  return result;
}

/// Componentwise mean of in-vocabulary token vectors; nullopt when no token is
/// covered. Rows are summed in table order, so token order never matters.
inline std::optional<EmbeddingVector> embed_sentence_mean(std::span<const std::string> tokens,
                                                          const WordEmbeddingTable& table) {
  std::vector<std::size_t> rows;
  rows.reserve(tokens.size());
  for (const auto& t : tokens)
    if (auto r = table.row_of(t)) rows.push_back(*r);
  if (rows.empty()) return std::nullopt;
  std::sort(rows.begin(), rows.end());
  std::vector<double> sum(table.dim(), 0.0);
  for (std::size_t r : rows) {
    const auto v = table.row(r);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
  }
  std::vector<float> mean(sum.size());
  const double n = static_cast<double>(rows.size());
  for (std::size_t k = 0; k < sum.size(); ++k) mean[k] = static_cast<float>(sum[k] / n);
  return EmbeddingVector(std::move(mean));
}

}  // namespace bitext
