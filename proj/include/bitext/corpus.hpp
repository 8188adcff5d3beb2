#pragma once

// Bilingual corpus model and the preprocessing cascade:
// exact dedup -> untranslated removal -> length bounds -> script check.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bitext/error.hpp"
#include "bitext/parallel.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

using PairId = std::uint64_t;

enum class Origin : std::uint8_t { kEcdc, kEmea, kSubtitles, kOther };

inline constexpr std::array<Origin, 4> kAllOrigins = {Origin::kEcdc, Origin::kEmea,
                                                      Origin::kSubtitles, Origin::kOther};

constexpr std::string_view origin_name(Origin origin) {
  switch (origin) {
    case Origin::kEcdc: return "ECDC";
    case Origin::kEmea: return "EMEA";
    case Origin::kSubtitles: return "SUBTITLES";
    case Origin::kOther: return "OTHER";
  }
  return "OTHER";
}

/// Case-insensitive; nullopt for unknown tags.
inline std::optional<Origin> parse_origin(std::string_view text) {
  std::string upper(text);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (Origin o : kAllOrigins)
    if (origin_name(o) == upper) return o;
  return std::nullopt;
}

struct SentencePair {
  PairId id = 0;
  std::string source;
  std::string target;
  Origin origin = Origin::kOther;

  bool operator==(const SentencePair&) const = default;
};

/// Ordered, immutable sequence of pairs with unique ids and non-empty sides.
class Corpus {
 public:
  Corpus() = default;

  explicit Corpus(std::vector<SentencePair> pairs, std::string provenance = {})
      : pairs_(std::move(pairs)), provenance_(std::move(provenance)) {
    std::unordered_set<PairId> seen;
    seen.reserve(pairs_.size());
    for (const auto& p : pairs_) {
      if (!seen.insert(p.id).second)
        throw Error(ErrorCode::kMalformedRecord, "duplicate pair_id " + std::to_string(p.id));
      if (p.source.empty() || p.target.empty())
        throw Error(ErrorCode::kMalformedRecord, "pair " + std::to_string(p.id) + " has an empty side");
    }
  }

  const std::vector<SentencePair>& pairs() const noexcept { return pairs_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  const SentencePair& operator[](std::size_t i) const { return pairs_[i]; }
  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }

  /// One past the largest id, or 0 for an empty corpus.
  PairId next_id() const noexcept {
    PairId next = 0;
    for (const auto& p : pairs_) next = std::max(next, p.id + 1);
    return next;
  }

  /// Survivors of a filter: pairs whose mask entry is true, in order.
  Corpus select(const std::vector<bool>& keep) const {
    Corpus out;
    out.provenance_ = provenance_;
    std::size_t n = 0;
    for (bool k : keep) n += k;
    out.pairs_.reserve(n);
    for (std::size_t i = 0; i < pairs_.size(); ++i)
      if (keep[i]) out.pairs_.push_back(pairs_[i]);
    return out;
  }

  bool operator==(const Corpus& other) const { return pairs_ == other.pairs_; }

 private:
  std::vector<SentencePair> pairs_;
  std::string provenance_;
};

/// Concatenates corpora in argument order; ids must stay unique.
inline Corpus concat(const std::vector<Corpus>& parts) {
  std::vector<SentencePair> pairs;
  std::string provenance;
  for (const auto& part : parts) {
    pairs.insert(pairs.end(), part.begin(), part.end());
    if (!part.provenance().empty()) {
      if (!provenance.empty()) provenance += "; ";
      provenance += part.provenance();
    }
  }
  return Corpus(std::move(pairs), std::move(provenance));
}

struct LengthSummary {
  std::size_t min = 0;
  double mean = 0.0;
  std::size_t max = 0;
};

inline constexpr std::array<std::string_view, 4> kPreprocessRules = {"dedup", "untranslated",
                                                                     "length", "charset"};

struct CorpusStats {
  std::size_t total_pairs = 0;
  std::map<Origin, std::size_t> per_origin_counts;
  std::map<std::string, std::size_t, std::less<>> removed_by_rule;
  LengthSummary source_chars;
  LengthSummary target_chars;

  std::size_t removed_total() const {
    std::size_t n = 0;
    for (const auto& [rule, count] : removed_by_rule) n += count;
    return n;
  }
};

inline CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.total_pairs = corpus.size();
  if (corpus.empty()) return stats;
  auto summarize = [&](auto side) {
    LengthSummary s{std::numeric_limits<std::size_t>::max(), 0.0, 0};
    double sum = 0.0;
    for (const auto& p : corpus) {
      const std::size_t len = unicode::length(side(p));
      s.min = std::min(s.min, len);
      s.max = std::max(s.max, len);
      sum += static_cast<double>(len);
    }
    s.mean = sum / static_cast<double>(corpus.size());
    return s;
  };
  for (const auto& p : corpus) ++stats.per_origin_counts[p.origin];
  stats.source_chars = summarize([](const SentencePair& p) -> const std::string& { return p.source; });
  stats.target_chars = summarize([](const SentencePair& p) -> const std::string& { return p.target; });
  return stats;
}

namespace detail {

template <class Pred>
Corpus keep_if(const Corpus& corpus, Parallelism par, Pred&& pred) {
  std::vector<char> keep(corpus.size());
  parallel_for(corpus.size(), par, [&](std::size_t i) { keep[i] = pred(corpus[i]) ? 1 : 0; });
  return corpus.select(std::vector<bool>(keep.begin(), keep.end()));
}

}  // namespace detail

/// Removes repeated (source, target) tuples compared after NFC, case-sensitive.
/// The lowest pair_id of each class survives.
inline Corpus dedup_exact(const Corpus& corpus, Parallelism par = {}) {
  std::vector<std::pair<std::string, std::string>> keys(corpus.size());
  parallel_for(corpus.size(), par, [&](std::size_t i) {
    keys[i] = {unicode::nfc(corpus[i].source), unicode::nfc(corpus[i].target)};
  });
  // visit in id order so the minimal id wins regardless of corpus order
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return corpus[a].id < corpus[b].id; });

  struct KeyHash {
    std::size_t operator()(const std::pair<std::string, std::string>* k) const {
      const std::size_t h = std::hash<std::string>{}(k->first);
      return h ^ (std::hash<std::string>{}(k->second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
  };
  struct KeyEq {
    bool operator()(const std::pair<std::string, std::string>* a,
                    const std::pair<std::string, std::string>* b) const {
      return *a == *b;
    }
  };
  std::unordered_set<const std::pair<std::string, std::string>*, KeyHash, KeyEq> seen;
  seen.reserve(corpus.size());
  std::vector<bool> keep(corpus.size(), false);
  for (std::size_t i : order) keep[i] = seen.insert(&keys[i]).second;
  return corpus.select(keep);
}

/// NFC, full case fold, whitespace runs collapsed, trimmed.
inline std::string normalize_for_comparison(std::string_view text) {
  return unicode::collapse_white_space(unicode::case_fold(unicode::nfc(text)));
}

/// Drops pairs whose sides are equal after normalize_for_comparison.
inline Corpus filter_untranslated(const Corpus& corpus, Parallelism par = {}) {
  return detail::keep_if(corpus, par, [](const SentencePair& p) {
    return normalize_for_comparison(p.source) != normalize_for_comparison(p.target);
  });
}

inline constexpr std::size_t kDefaultMinChars = 15;
inline constexpr std::size_t kDefaultMaxChars = 200;

/// Keeps a pair iff both sides have min_chars <= scalar count <= max_chars.
inline Corpus filter_by_length(const Corpus& corpus, std::size_t min_chars = kDefaultMinChars,
                               std::size_t max_chars = kDefaultMaxChars, Parallelism par = {}) {
  if (min_chars > max_chars)
    throw Error(ErrorCode::kInvalidArgument, "min_chars must not exceed max_chars");
  return detail::keep_if(corpus, par, [&](const SentencePair& p) {
    const std::size_t s = unicode::length(p.source);
    const std::size_t t = unicode::length(p.target);
    return s >= min_chars && s <= max_chars && t >= min_chars && t <= max_chars;
  });
}

/// True when every letter in the text belongs to the Latin script.
inline bool letters_are_latin(std::string_view text) {
  for (char32_t c : unicode::decode(text))
    if (unicode::is_letter(c) && !unicode::is_latin_script(c)) return false;
  return true;
}

/// Drops pairs with a non-Latin letter on either side. Digits, punctuation,
/// symbols and whitespace never trigger removal.
inline Corpus filter_charset(const Corpus& corpus, Parallelism par = {}) {
  return detail::keep_if(corpus, par, [](const SentencePair& p) {
    return letters_are_latin(p.source) && letters_are_latin(p.target);
  });
}

struct PreprocessOptions {
  std::size_t min_chars = kDefaultMinChars;
  std::size_t max_chars = kDefaultMaxChars;
};

struct PreprocessResult {
  Corpus corpus;
  CorpusStats stats;
};

inline PreprocessResult preprocess(const Corpus& input, PreprocessOptions options = {},
                                   Parallelism par = {}) {
  std::map<std::string, std::size_t, std::less<>> removed;
  Corpus current = input;
  auto stage = [&](std::string_view rule, Corpus next) {
    removed[std::string(rule)] = current.size() - next.size();
    current = std::move(next);
  };
  stage("dedup", dedup_exact(current, par));
  stage("untranslated", filter_untranslated(current, par));
  stage("length", filter_by_length(current, options.min_chars, options.max_chars, par));
  stage("charset", filter_charset(current, par));
  PreprocessResult result{std::move(current), {}};
  result.stats = corpus_stats(result.corpus);
  result.stats.removed_by_rule = std::move(removed);
  return result;
}

}  // namespace bitext
