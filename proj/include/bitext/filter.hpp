#pragma once

// Pair scoring, top-fraction retention, seeded random subsets and stratified
// train/validation splits.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/corpus_io.hpp"
#include "bitext/embed.hpp"
#include "bitext/embedding_file.hpp"
#include "bitext/error.hpp"
#include "bitext/parallel.hpp"
#include "bitext/random.hpp"

namespace bitext {

enum class Method : std::uint8_t { kMuse, kLaser, kLabse, kOther };

constexpr std::string_view method_name(Method m) {
  switch (m) {
    case Method::kMuse: return "MUSE";
    case Method::kLaser: return "LASER";
    case Method::kLabse: return "LABSE";
    case Method::kOther: return "OTHER";
  }
  return "OTHER";
}

inline std::optional<Method> parse_method(std::string_view text) {
  std::string upper(text);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (Method m : {Method::kMuse, Method::kLaser, Method::kLabse, Method::kOther})
    if (method_name(m) == upper) return m;
  return std::nullopt;
}

/// A corpus with one optional score per pair (aligned by position). Pairs
/// without a score are the uncovered set.
class ScoredCorpus {
 public:
  ScoredCorpus(Corpus corpus, Method method, std::vector<std::optional<double>> scores)
      : corpus_(std::move(corpus)), method_(method), scores_(std::move(scores)) {
    if (scores_.size() != corpus_.size())
      throw Error(ErrorCode::kLengthMismatch, "score count differs from corpus size");
    for (const auto& s : scores_)
      if (s && !(*s >= -1.0 && *s <= 1.0))
        throw Error(ErrorCode::kInvalidNumber, "score outside [-1, 1]");
  }

  const Corpus& corpus() const noexcept { return corpus_; }
  Method method() const noexcept { return method_; }
  std::size_t size() const noexcept { return scores_.size(); }
  const std::vector<std::optional<double>>& scores() const noexcept { return scores_; }
  std::optional<double> score(std::size_t index) const { return scores_[index]; }

  std::size_t scored_count() const {
    return static_cast<std::size_t>(std::count_if(scores_.begin(), scores_.end(),
                                                  [](const auto& s) { return s.has_value(); }));
  }

  std::vector<PairId> uncovered() const {
    std::vector<PairId> ids;
    for (std::size_t i = 0; i < scores_.size(); ++i)
      if (!scores_[i]) ids.push_back(corpus_[i].id);
    return ids;
  }

 private:
  Corpus corpus_;
  Method method_;
  std::vector<std::optional<double>> scores_;
};

namespace detail {

/// Cosine, or nullopt when either side is an all-zero vector.
inline std::optional<double> cosine_or_uncovered(std::span<const float> u, std::span<const float> v) {
  try {
    return cosine_similarity(u, v);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kZeroVector) return std::nullopt;
    throw;
  }
}

}  // namespace detail

/// Mean-pooled dictionary vectors on both sides, compared by cosine.
inline ScoredCorpus score_pairs_muse(const Corpus& corpus, const WordEmbeddingTable& source_table,
                                     const WordEmbeddingTable& target_table, Parallelism par = {}) {
  if (source_table.dim() != target_table.dim())
    throw Error(ErrorCode::kDimensionMismatch, "source table dim " + std::to_string(source_table.dim()) +
                                                   " != target table dim " + std::to_string(target_table.dim()));
  std::vector<std::optional<double>> scores(corpus.size());
  parallel_for(corpus.size(), par, [&](std::size_t i) {
    const auto s = embed_sentence_mean(tokenize(corpus[i].source), source_table);
    if (!s) return;
    const auto t = embed_sentence_mean(tokenize(corpus[i].target), target_table);
    if (!t) return;
    scores[i] = detail::cosine_or_uncovered(s->components(), t->components());
  });
  return ScoredCorpus(corpus, Method::kMuse, std::move(scores));
}

enum class MissingPolicy { kStrict, kPermissive };

/// Cosine of precomputed sentence vectors looked up by pair_id. In strict mode
/// any pair missing from either map is an error; permissive mode leaves it uncovered.
inline ScoredCorpus score_pairs_precomputed(const Corpus& corpus, const EmbeddingSet& source,
                                            const EmbeddingSet& target, Method method = Method::kOther,
                                            MissingPolicy policy = MissingPolicy::kStrict,
                                            Parallelism par = {}) {
  if (source.dim() != target.dim())
    throw Error(ErrorCode::kDimensionMismatch, "source embeddings dim " + std::to_string(source.dim()) +
                                                   " != target embeddings dim " + std::to_string(target.dim()));
  std::vector<std::optional<double>> scores(corpus.size());
  std::vector<char> missing(corpus.size(), 0);
  parallel_for(corpus.size(), par, [&](std::size_t i) {
    const auto s = source.find(corpus[i].id);
    const auto t = target.find(corpus[i].id);
    if (!s || !t) {
      missing[i] = 1;
      return;
    }
    scores[i] = detail::cosine_or_uncovered(*s, *t);
  });
  if (policy == MissingPolicy::kStrict) {
    std::size_t n = 0;
    std::string listed;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!missing[i]) continue;
      if (n < 20) listed += (n ? "," : "") + std::to_string(corpus[i].id);
      ++n;
    }
    if (n > 0) {
      if (n > 20) listed += ",...";
      throw Error(ErrorCode::kMissingEmbeddings,
                  std::to_string(n) + " pair(s) without embeddings: " + listed);
    }
  }
  return ScoredCorpus(corpus, method, std::move(scores));
}

/// round(fraction * n), halves rounded up, capped at n.
inline std::size_t retained_count(double fraction, std::size_t n) {
  const long double exact = static_cast<long double>(fraction) * static_cast<long double>(n);
  // fractions are short decimals; the nudge absorbs their binary representation error
  const auto k = static_cast<std::size_t>(std::floor(exact + 0.5L + 1e-7L));
  return std::min(k, n);
}

class RetentionSpec {
 public:
  explicit RetentionSpec(double fraction) : fraction_(fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
      throw Error(ErrorCode::kInvalidArgument, "retention fraction must be in (0, 1], got " + std::to_string(fraction));
  }
  double fraction() const noexcept { return fraction_; }

 private:
  double fraction_;
};

/// Positions ordered best first: scored before uncovered, higher score first,
/// ties by ascending pair_id.
inline std::vector<std::size_t> rank_order(const ScoredCorpus& scored) {
  std::vector<std::size_t> order(scored.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto& corpus = scored.corpus();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = scored.scores()[a];
    const auto& sb = scored.scores()[b];
    if (sa.has_value() != sb.has_value()) return sa.has_value();
    if (sa && *sa != *sb) return *sa > *sb;
    return corpus[a].id < corpus[b].id;
  });
  return order;
}

/// The round(fraction * N) best pairs, returned in original corpus order.
inline Corpus retain_top_fraction(const ScoredCorpus& scored, RetentionSpec spec) {
  const std::size_t k = retained_count(spec.fraction(), scored.size());
  const auto order = rank_order(scored);
  std::vector<bool> keep(scored.size(), false);
  for (std::size_t r = 0; r < k; ++r) keep[order[r]] = true;
  return scored.corpus().select(keep);
}

/// round(fraction * N) pairs: the first k positions of a seeded Fisher-Yates
/// permutation, returned in original corpus order.
inline Corpus random_subset(const Corpus& corpus, double fraction, std::uint64_t seed) {
  RetentionSpec spec(fraction);
  const std::size_t k = retained_count(spec.fraction(), corpus.size());
  const auto perm = shuffled_indices(corpus.size(), seed);
  std::vector<bool> keep(corpus.size(), false);
  for (std::size_t r = 0; r < k; ++r) keep[perm[r]] = true;
  return corpus.select(keep);
}

class SplitSpec {
 public:
  SplitSpec(double train_fraction, std::uint64_t seed) : train_fraction_(train_fraction), seed_(seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw Error(ErrorCode::kInvalidArgument,
                  "train fraction must be in (0, 1), got " + std::to_string(train_fraction));
  }
  double train_fraction() const noexcept { return train_fraction_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  double train_fraction_;
  std::uint64_t seed_;
};

struct Split {
  Corpus train;
  Corpus valid;
};

/// Per-origin seed for stratified shuffling.
inline std::uint64_t stratum_seed(std::uint64_t seed, Origin origin) {
  return seed ^ fnv1a64(origin_name(origin));
}

/// Each origin stratum is shuffled with its own subseed; its first
/// round(train_fraction * size) members go to train. Outputs keep corpus order.
inline Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  std::map<Origin, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < corpus.size(); ++i) strata[corpus[i].origin].push_back(i);
  std::vector<bool> to_train(corpus.size(), false);
  for (auto& [origin, members] : strata) {
    SplitMix64 rng(stratum_seed(spec.seed(), origin));
    fisher_yates_shuffle(members, rng);
    const std::size_t k = retained_count(spec.train_fraction(), members.size());
    for (std::size_t r = 0; r < k; ++r) to_train[members[r]] = true;
  }
  std::vector<bool> to_valid(to_train.size());
  for (std::size_t i = 0; i < to_train.size(); ++i) to_valid[i] = !to_train[i];
  return {corpus.select(to_train), corpus.select(to_valid)};
}

// Score file: pair_id \t score (6 decimals), scored pairs only, corpus order.

inline std::string format_score(double score) {
  std::string s = format_fixed(score, 6);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline void write_score_tsv(std::ostream& out, const ScoredCorpus& scored) {
  for (std::size_t i = 0; i < scored.size(); ++i)
    if (const auto s = scored.score(i)) out << scored.corpus()[i].id << '\t' << format_score(*s) << '\n';
}

inline void write_uncovered(std::ostream& out, const ScoredCorpus& scored) {
  for (PairId id : scored.uncovered()) out << id << '\n';
}

struct ScoreEntry {
  PairId id;
  double score;
};

inline std::vector<ScoreEntry> read_score_tsv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<ScoreEntry> entries;
  entries.reserve(lines.size());
  std::unordered_map<PairId, std::size_t> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path.string() + " line " + std::to_string(i + 1);
    const auto fields = detail::split_tabs(lines[i]);
    if (fields.size() != 2) throw Error(ErrorCode::kMalformedRecord, where + ": expected pair_id<TAB>score");
    const PairId id = parse_pair_id(fields[0], where);
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), score);
    if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size() || !(score >= -1.0 && score <= 1.0))
      throw Error(ErrorCode::kInvalidNumber, where + ": bad score '" + std::string(fields[1]) + "'");
    if (!seen.emplace(id, i).second)
      throw Error(ErrorCode::kMalformedRecord, where + ": duplicate pair_id " + std::to_string(id));
    entries.push_back({id, score});
  }
  return entries;
}

/// Attaches score-file entries to a corpus; corpus pairs absent from the file are uncovered.
inline ScoredCorpus attach_scores(const Corpus& corpus, std::span<const ScoreEntry> entries, Method method) {
  std::unordered_map<PairId, std::size_t> position;
  position.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) position.emplace(corpus[i].id, i);
  std::vector<std::optional<double>> scores(corpus.size());
  for (const auto& e : entries) {
    auto it = position.find(e.id);
    if (it == position.end())
      throw Error(ErrorCode::kMalformedRecord, "score for pair_id " + std::to_string(e.id) + " not in corpus");
    scores[it->second] = e.score;
  }
  return ScoredCorpus(corpus, method, std::move(scores));
}

}  // namespace bitext
