#pragma once

// Corpus BLEU compatible with sacrebleu's defaults
// (nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitext/corpus_io.hpp"
#include "bitext/error.hpp"
#include "bitext/parallel.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

inline constexpr std::size_t kBleuMaxOrder = 4;

namespace detail {

/// Python's str.isspace(), which drives str.split() and str.rstrip().
constexpr bool is_python_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || (c >= 0x1C && c <= 0x20) || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

constexpr bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

/// [{-~[-` -&(-+:-@/]
constexpr bool is_13a_symbol(char32_t c) {
  return (c >= U'{' && c <= U'~') || (c >= U'[' && c <= U'`') || (c >= U' ' && c <= U'&') ||
         (c >= U'(' && c <= U'+') || (c >= U':' && c <= U'@') || c == U'/';
}

inline void replace_all(std::u32string& s, std::u32string_view from, std::u32string_view to) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = s.find(from, pos);
    if (hit == std::u32string::npos) break;
    out.append(s, pos, hit - pos);
    out.append(to);
    pos = hit + from.size();
  }
  out.append(s, pos, std::u32string::npos);
  s = std::move(out);
}

/// re.sub for a two-character pattern (first)(second) -> replacement built by emit.
template <class First, class Second, class Emit>
std::u32string sub_pairs(const std::u32string& s, First first, Second second, Emit emit) {
  std::u32string out;
  out.reserve(s.size() + s.size() / 2);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && first(s[i]) && second(s[i + 1])) {
      emit(out, s[i], s[i + 1]);
      i += 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

}  // namespace detail

/// sacrebleu's "13a" tokenization, including its trailing-whitespace strip.
inline std::vector<std::string> tokenize_13a(std::string_view text) {
  using detail::is_ascii_digit;
  std::u32string line = unicode::decode(text);
  while (!line.empty() && detail::is_python_space(line.back())) line.pop_back();

  detail::replace_all(line, U"<skipped>", U"");
  detail::replace_all(line, U"-\n", U"");
  detail::replace_all(line, U"\n", U" ");
  if (line.find(U'&') != std::u32string::npos) {
    detail::replace_all(line, U"&quot;", U"\"");
    detail::replace_all(line, U"&amp;", U"&");
    detail::replace_all(line, U"&lt;", U"<");
    detail::replace_all(line, U"&gt;", U">");
  }

  std::u32string padded;
  padded.reserve(line.size() * 2 + 2);
  padded.push_back(U' ');
  for (char32_t c : line) {
    if (detail::is_13a_symbol(c)) {
      padded.push_back(U' ');
      padded.push_back(c);
      padded.push_back(U' ');
    } else {
      padded.push_back(c);
    }
  }
  padded.push_back(U' ');

  auto period_comma = [](char32_t c) { return c == U'.' || c == U','; };
  auto not_digit = [](char32_t c) { return !is_ascii_digit(c); };
  // period and comma split off unless preceded by a digit
  padded = detail::sub_pairs(padded, not_digit, period_comma, [](std::u32string& o, char32_t a, char32_t b) {
    o.push_back(a);
    o.push_back(U' ');
    o.push_back(b);
    o.push_back(U' ');
  });
  // ... or unless followed by a digit
  padded = detail::sub_pairs(padded, period_comma, not_digit, [](std::u32string& o, char32_t a, char32_t b) {
    o.push_back(U' ');
    o.push_back(a);
    o.push_back(U' ');
    o.push_back(b);
  });
  // dash after a digit
  padded = detail::sub_pairs(padded, is_ascii_digit, [](char32_t c) { return c == U'-'; },
                             [](std::u32string& o, char32_t a, char32_t b) {
                               o.push_back(a);
                               o.push_back(U' ');
                               o.push_back(b);
                               o.push_back(U' ');
                             });

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < padded.size()) {
    while (i < padded.size() && detail::is_python_space(padded[i])) ++i;
    std::size_t j = i;
    while (j < padded.size() && !detail::is_python_space(padded[j])) ++j;
    if (j > i) tokens.push_back(unicode::encode(std::u32string_view(padded).substr(i, j - i)));
    i = j;
  }
  return tokens;
}

/// Sufficient statistics; corpus BLEU is a function of their sum.
struct BleuStats {
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  std::array<std::size_t, kBleuMaxOrder> correct{};
  std::array<std::size_t, kBleuMaxOrder> total{};

  BleuStats& operator+=(const BleuStats& o) {
    hyp_len += o.hyp_len;
    ref_len += o.ref_len;
    for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
      correct[n] += o.correct[n];
      total[n] += o.total[n];
    }
    return *this;
  }

  bool operator==(const BleuStats&) const = default;
};

/// Clipped n-gram matches of one tokenized hypothesis against one reference.
inline BleuStats segment_stats(std::span<const std::string> hyp, std::span<const std::string> ref) {
  std::unordered_map<std::string_view, std::uint32_t> vocab;
  auto intern = [&](std::span<const std::string> toks) {
    std::vector<std::uint32_t> ids;
    ids.reserve(toks.size());
    for (const auto& t : toks) ids.push_back(vocab.try_emplace(t, static_cast<std::uint32_t>(vocab.size())).first->second);
    return ids;
  };
  const auto h = intern(hyp);
  const auto r = intern(ref);

  struct Key {
    std::array<std::uint32_t, kBleuMaxOrder> ids{};
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t x = 0xcbf29ce484222325ULL;
      for (auto id : k.ids) x = (x ^ id) * 0x100000001b3ULL;
      return static_cast<std::size_t>(x);
    }
  };
  // ids are shifted by one so 0 pads shorter n-grams
  auto ngrams = [](const std::vector<std::uint32_t>& ids, std::size_t n) {
    std::unordered_map<Key, std::size_t, KeyHash> counts;
    for (std::size_t i = 0; i + n <= ids.size(); ++i) {
      Key k;
      for (std::size_t j = 0; j < n; ++j) k.ids[j] = ids[i + j] + 1;
      ++counts[k];
    }
    return counts;
  };

  BleuStats stats;
  stats.hyp_len = hyp.size();
  stats.ref_len = ref.size();
  for (std::size_t n = 1; n <= kBleuMaxOrder; ++n) {
    const auto hc = ngrams(h, n);
    const auto rc = ngrams(r, n);
    for (const auto& [k, c] : hc) {
      stats.total[n - 1] += c;
      if (auto it = rc.find(k); it != rc.end()) stats.correct[n - 1] += std::min(c, it->second);
    }
  }
  return stats;
}

inline BleuStats segment_stats(std::string_view hypothesis, std::string_view reference) {
  return segment_stats(tokenize_13a(hypothesis), tokenize_13a(reference));
}

struct BleuResult {
  double score = 0.0;                              // [0, 100]
  std::array<double, kBleuMaxOrder> precisions{};  // smoothed, [0, 1]
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  BleuStats stats;
};

/// Score from summed statistics with exponential ("exp") smoothing: the k-th
/// zero-match order gets precision 1 / (2^k * total).
inline BleuResult bleu_from_stats(const BleuStats& stats) {
  BleuResult result;
  result.stats = stats;
  result.hyp_len = stats.hyp_len;
  result.ref_len = stats.ref_len;
  if (stats.hyp_len < stats.ref_len) {
    result.brevity_penalty =
        stats.hyp_len > 0
            ? std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.hyp_len))
            : 0.0;
  }
  bool any_match = false;
  for (auto c : stats.correct) any_match = any_match || c > 0;
  if (!any_match) return result;

  double smooth = 1.0;
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    if (stats.total[n] == 0) break;
    if (stats.correct[n] == 0) {
      smooth *= 2.0;
      result.precisions[n] = 1.0 / (smooth * static_cast<double>(stats.total[n]));
    } else {
      result.precisions[n] = static_cast<double>(stats.correct[n]) / static_cast<double>(stats.total[n]);
    }
  }
  double log_sum = 0.0;
  for (double p : result.precisions) {
    if (p == 0.0) return result;  // an order with no n-grams at all
    log_sum += std::log(p);
  }
  result.score = result.brevity_penalty * std::exp(log_sum / static_cast<double>(kBleuMaxOrder)) * 100.0;
  return result;
}

inline BleuResult corpus_bleu(std::span<const std::string> hypotheses, std::span<const std::string> references,
                              Parallelism par = {}) {
  if (hypotheses.size() != references.size())
    throw Error(ErrorCode::kLengthMismatch, std::to_string(hypotheses.size()) + " hypotheses vs " +
                                                std::to_string(references.size()) + " references");
  if (hypotheses.empty()) throw Error(ErrorCode::kEmptyCorpus, "no segments to score");
  std::vector<BleuStats> per_segment(hypotheses.size());
  parallel_for(hypotheses.size(), par,
               [&](std::size_t i) { per_segment[i] = segment_stats(hypotheses[i], references[i]); });
  BleuStats sum;
  for (const auto& s : per_segment) sum += s;
  return bleu_from_stats(sum);
}

/// "BLEU = 25.556 100.0/44.4/28.6/10.0 (BP = 0.761, hyp_len = 11, ref_len = 14)";
/// precisions are printed as percentages.
inline std::string format_bleu(const BleuResult& r) {
  std::string line = "BLEU = " + format_fixed(r.score, 3) + " ";
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    if (n) line += '/';
    line += format_fixed(r.precisions[n] * 100.0, 1);
  }
  line += " (BP = " + format_fixed(r.brevity_penalty, 3) + ", hyp_len = " + std::to_string(r.hyp_len) +
          ", ref_len = " + std::to_string(r.ref_len) + ")";
  return line;
}

}  // namespace bitext
