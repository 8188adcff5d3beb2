#pragma once

// Plain-text bitext ingestion and the corpus TSV / stats report formats.
//
// Corpus TSV, one pair per line, LF terminated:
//   written:  pair_id \t source \t target \t ORIGIN
//   accepted: the 4-column form above, or source \t target \t origin
//             (ids then assigned sequentially in file order)

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/error.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

/// Reads LF-terminated lines, stripping a trailing CR. Every line must be
/// valid UTF-8; the error names the 1-based line number.
inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto bad = unicode::find_invalid_utf8(line)) {
      throw Error(ErrorCode::kInvalidEncoding, path.string() + " line " +
                                                   std::to_string(lines.size() + 1) + " byte " +
                                                   std::to_string(*bad) + " is not valid UTF-8");
    }
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed: " + path.string());
  return lines;
}

namespace detail {

/// Trimmed text with embedded tabs turned into spaces, so it fits in a TSV cell.
inline std::string clean_side(std::string_view raw) {
  std::string text(unicode::trim(raw));
  for (auto& ch : text)
    if (ch == '\t') ch = ' ';
  return text;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace detail

/// One pair per aligned line index. Sides are trimmed; a line that is empty on
/// either side is skipped. Ids run sequentially from first_id over the kept pairs.
inline Corpus ingest_parallel(const std::filesystem::path& source_path,
                              const std::filesystem::path& target_path, Origin origin,
                              PairId first_id = 0) {
  const auto source = read_lines(source_path);
  const auto target = read_lines(target_path);
  if (source.size() != target.size()) {
    throw Error(ErrorCode::kLineCountMismatch,
                source_path.string() + " has " + std::to_string(source.size()) + " lines but " +
                    target_path.string() + " has " + std::to_string(target.size()));
  }
  std::vector<SentencePair> pairs;
  pairs.reserve(source.size());
  PairId next = first_id;
  for (std::size_t i = 0; i < source.size(); ++i) {
    auto s = detail::clean_side(source[i]);
    auto t = detail::clean_side(target[i]);
    if (s.empty() || t.empty()) continue;
    pairs.push_back({next++, std::move(s), std::move(t), origin});
  }
  return Corpus(std::move(pairs), source_path.string() + " | " + target_path.string() + " (" +
                                      std::string(origin_name(origin)) + ")");
}

inline PairId parse_pair_id(std::string_view text, const std::string& where) {
  PairId id = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorCode::kMalformedRecord, where + ": bad pair_id '" + std::string(text) + "'");
  return id;
}

inline Corpus read_corpus_tsv(const std::filesystem::path& path, PairId first_id = 0) {
  const auto lines = read_lines(path);
  std::vector<SentencePair> pairs;
  pairs.reserve(lines.size());
  PairId next = first_id;
  std::size_t arity = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path.string() + " line " + std::to_string(i + 1);
    const auto fields = detail::split_tabs(lines[i]);
    if (fields.size() != 3 && fields.size() != 4)
      throw Error(ErrorCode::kMalformedRecord, where + ": expected 3 or 4 tab-separated columns, got " +
                                                   std::to_string(fields.size()));
    if (arity == 0) arity = fields.size();
    if (fields.size() != arity)
      throw Error(ErrorCode::kMalformedRecord, where + ": column count changes within the file");
    const std::size_t off = arity == 4 ? 1 : 0;
    const auto origin = parse_origin(unicode::trim(fields[off + 2]));
    if (!origin)
      throw Error(ErrorCode::kInvalidOrigin, where + ": unknown origin '" + std::string(fields[off + 2]) + "'");
    auto s = detail::clean_side(fields[off]);
    auto t = detail::clean_side(fields[off + 1]);
    if (s.empty() || t.empty()) continue;
    const PairId id = arity == 4 ? parse_pair_id(fields[0], where) : next++;
    pairs.push_back({id, std::move(s), std::move(t), *origin});
  }
  return Corpus(std::move(pairs), path.string());
}

inline void write_corpus_tsv(std::ostream& out, const Corpus& corpus) {
  for (const auto& p : corpus)
    out << p.id << '\t' << p.source << '\t' << p.target << '\t' << origin_name(p.origin) << '\n';
}

/// Opens path for binary writing, creating parent directories.
inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

inline void write_corpus_tsv(const std::filesystem::path& path, const Corpus& corpus) {
  auto out = open_output(path);
  write_corpus_tsv(out, corpus);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

/// key: value lines in a fixed order.
inline void write_stats_report(std::ostream& out, const CorpusStats& stats) {
  out << "total_pairs: " << stats.total_pairs << '\n';
  for (Origin o : kAllOrigins) {
    auto it = stats.per_origin_counts.find(o);
    out << "origin." << origin_name(o) << ": " << (it == stats.per_origin_counts.end() ? 0 : it->second)
        << '\n';
  }
  for (auto rule : kPreprocessRules) {
    auto it = stats.removed_by_rule.find(rule);
    if (it != stats.removed_by_rule.end()) out << "removed." << rule << ": " << it->second << '\n';
  }
  auto summary = [&](std::string_view side, const LengthSummary& s) {
    out << side << "_chars.min: " << s.min << '\n'
        << side << "_chars.mean: " << format_fixed(s.mean, 3) << '\n'
        << side << "_chars.max: " << s.max << '\n';
  };
  summary("source", stats.source_chars);
  summary("target", stats.target_chars);
}

}  // namespace bitext
