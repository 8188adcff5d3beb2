#pragma once

// Subcommand bodies. Each reads what it needs from a PipelineConfig, writes
// its artifacts under output_dir and a short summary to `log`.
//
// Artifacts:
//   preprocess  preprocessed.tsv, preprocess_stats.txt
//   score       scores_<label>.tsv, uncovered_<label>.txt
//   filter      filtered_<label>_<pct>.tsv per fraction
//   sample      random_<pct>_seed<seed>.tsv per fraction x seed
//   split       train.tsv, valid.tsv (first seed)
//   report      report.txt

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bitext/bleu.hpp"
#include "bitext/config.hpp"
#include "bitext/corpus.hpp"
#include "bitext/corpus_io.hpp"
#include "bitext/embed.hpp"
#include "bitext/embedding_file.hpp"
#include "bitext/filter.hpp"
#include "bitext/stats.hpp"

namespace bitext {

namespace fs = std::filesystem;

/// 0.2 -> "20", 0.125 -> "12.5".
inline std::string percent_label(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", fraction * 100.0);
  return buf;
}

namespace detail {

inline const fs::path& require_path(const fs::path& p, std::string_view key) {
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "missing required setting '" + std::string(key) + "'");
  return p;
}

inline void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

inline Parallelism par(const PipelineConfig& cfg) { return {cfg.threads}; }

inline Corpus load_stage_corpus(const PipelineConfig& cfg) {
  Corpus corpus = read_corpus_tsv(require_path(cfg.corpus, "corpus"));
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, cfg.corpus.string() + " holds no pairs");
  return corpus;
}

}  // namespace detail

inline Corpus load_inputs(const PipelineConfig& cfg) {
  if (cfg.inputs.empty()) throw Error(ErrorCode::kInvalidArgument, "no input configured (input_tsv or input_pair)");
  std::vector<Corpus> parts;
  PairId next = 0;
  for (const auto& input : cfg.inputs) {
    if (const auto* p = std::get_if<ParallelInput>(&input))
      parts.push_back(ingest_parallel(p->source, p->target, p->origin, next));
    else
      parts.push_back(read_corpus_tsv(std::get<TsvInput>(input).path, next));
    next = std::max(next, parts.back().next_id());
  }
  return concat(parts);
}

inline PreprocessResult cmd_preprocess(const PipelineConfig& cfg, std::ostream& log) {
  const Corpus input = load_inputs(cfg);
  if (input.empty()) throw Error(ErrorCode::kEmptyCorpus, "inputs hold no sentence pairs");
  auto result = preprocess(input, {cfg.min_chars, cfg.max_chars}, detail::par(cfg));

  const fs::path tsv = cfg.output_dir / "preprocessed.tsv";
  write_corpus_tsv(tsv, result.corpus);
  const fs::path report = cfg.output_dir / "preprocess_stats.txt";
  auto out = open_output(report);
  out << "input_pairs: " << input.size() << '\n';
  write_stats_report(out, result.stats);
  detail::finish(out, report);

  log << "preprocess: " << input.size() << " -> " << result.corpus.size() << " pairs";
  for (auto rule : kPreprocessRules) log << ' ' << rule << '=' << result.stats.removed_by_rule.at(std::string(rule));
  log << '\n';
  return result;
}

inline ScoredCorpus cmd_score(const PipelineConfig& cfg, std::ostream& log) {
  const Corpus corpus = detail::load_stage_corpus(cfg);
  const auto& src = detail::require_path(cfg.source_embeddings, "source_embeddings");
  const auto& tgt = detail::require_path(cfg.target_embeddings, "target_embeddings");

  auto scored = [&] {
    if (cfg.backend == ScoringBackend::kMuse) {
      const auto s = load_word_table(src, "source");
      const auto t = load_word_table(tgt, "target");
      return score_pairs_muse(corpus, s.table, t.table, detail::par(cfg));
    }
    if (!fs::exists(src)) throw Error(ErrorCode::kMissingEmbeddings, "embedding file not found: " + src.string());
    if (!fs::exists(tgt)) throw Error(ErrorCode::kMissingEmbeddings, "embedding file not found: " + tgt.string());
    const auto s = load_embedding_file(src);
    const auto t = load_embedding_file(tgt);
    return score_pairs_precomputed(corpus, s, t, cfg.method_tag, cfg.missing, detail::par(cfg));
  }();

  const fs::path scores_path = cfg.output_dir / ("scores_" + cfg.label() + ".tsv");
  auto out = open_output(scores_path);
  write_score_tsv(out, scored);
  detail::finish(out, scores_path);
  const fs::path uncovered_path = cfg.output_dir / ("uncovered_" + cfg.label() + ".txt");
  auto unc = open_output(uncovered_path);
  write_uncovered(unc, scored);
  detail::finish(unc, uncovered_path);

  log << "score: " << scored.scored_count() << " scored, " << scored.size() - scored.scored_count()
      << " uncovered -> " << scores_path.string() << '\n';
  return scored;
}

inline std::vector<fs::path> cmd_filter(const PipelineConfig& cfg, std::ostream& log) {
  const Corpus corpus = detail::load_stage_corpus(cfg);
  const auto entries = read_score_tsv(detail::require_path(cfg.scores, "scores"));
  const ScoredCorpus scored = attach_scores(corpus, entries, cfg.method_tag);
  std::vector<fs::path> written;
  for (double f : cfg.fractions) {
    const Corpus kept = retain_top_fraction(scored, RetentionSpec(f));
    const fs::path path = cfg.output_dir / ("filtered_" + cfg.label() + "_" + percent_label(f) + ".tsv");
    write_corpus_tsv(path, kept);
    log << "filter: " << percent_label(f) << "% -> " << kept.size() << " pairs -> " << path.string() << '\n';
    written.push_back(path);
  }
  return written;
}

inline std::vector<fs::path> cmd_sample(const PipelineConfig& cfg, std::ostream& log) {
  const Corpus corpus = detail::load_stage_corpus(cfg);
  std::vector<fs::path> written;
  for (double f : cfg.fractions) {
    for (auto seed : cfg.seeds) {
      const Corpus subset = random_subset(corpus, f, seed);
      const fs::path path =
          cfg.output_dir / ("random_" + percent_label(f) + "_seed" + std::to_string(seed) + ".tsv");
      write_corpus_tsv(path, subset);
      log << "sample: " << percent_label(f) << "% seed " << seed << " -> " << subset.size() << " pairs -> "
          << path.string() << '\n';
      written.push_back(path);
    }
  }
  return written;
}

inline Split cmd_split(const PipelineConfig& cfg, std::ostream& log) {
  const Corpus corpus = detail::load_stage_corpus(cfg);
  Split split = stratified_split(corpus, SplitSpec(cfg.train_fraction, cfg.seeds.front()));
  write_corpus_tsv(cfg.output_dir / "train.tsv", split.train);
  write_corpus_tsv(cfg.output_dir / "valid.tsv", split.valid);
  log << "split: " << split.train.size() << " train, " << split.valid.size() << " valid (seed "
      << cfg.seeds.front() << ")\n";
  return split;
}

inline BleuResult cmd_bleu(const PipelineConfig& cfg, std::ostream& log) {
  const auto hyps = read_lines(detail::require_path(cfg.hypotheses, "hypotheses"));
  const auto refs = read_lines(detail::require_path(cfg.references, "references"));
  const auto result = corpus_bleu(hyps, refs, detail::par(cfg));
  log << format_bleu(result) << '\n';
  return result;
}

inline CorrelationReport cmd_correlate(const PipelineConfig& cfg, std::ostream& log) {
  auto a = read_score_tsv(detail::require_path(cfg.scores_a, "scores_a"));
  auto b = read_score_tsv(detail::require_path(cfg.scores_b, "scores_b"));
  auto by_id = [](const ScoreEntry& x, const ScoreEntry& y) { return x.id < y.id; };
  std::sort(a.begin(), a.end(), by_id);
  std::sort(b.begin(), b.end(), by_id);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i].id < b[j].id) {
      ++i;
    } else if (b[j].id < a[i].id) {
      ++j;
    } else {
      xs.push_back(a[i++].score);
      ys.push_back(b[j++].score);
    }
  }
  const auto report = pearson(xs, ys, cfg.method_a, cfg.method_b);
  log << "r = " << format_fixed(report.r, 6) << " (n = " << report.n << ", " << method_name(report.method_a)
      << " vs " << method_name(report.method_b) << ")\n";
  return report;
}

/// Dataset-size summary of every artifact found in output_dir.
inline std::string cmd_report(const PipelineConfig& cfg, std::ostream& log) {
  if (!fs::is_directory(cfg.output_dir))
    throw Error(ErrorCode::kIoError, "output directory not found: " + cfg.output_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cfg.output_dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::ostringstream out;
  std::size_t base = 0;
  const fs::path pre = cfg.output_dir / "preprocessed.tsv";
  if (fs::exists(pre)) base = read_corpus_tsv(pre).size();
  const fs::path stats = cfg.output_dir / "preprocess_stats.txt";
  if (fs::exists(stats)) {
    out << "# preprocessing\n";
    for (const auto& line : read_lines(stats)) out << line << '\n';
    out << '\n';
  }

  out << "# datasets\n";
  out << "dataset\tsize\tshare\n";
  auto is_corpus = [](const std::string& name) {
    return name == "preprocessed.tsv" || name == "train.tsv" || name == "valid.tsv" ||
           name.starts_with("filtered_") || name.starts_with("random_");
  };
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    if (f.extension() != ".tsv" || !is_corpus(name)) continue;
    const std::size_t n = read_corpus_tsv(f).size();
    out << f.stem().string() << '\t' << n << '\t'
        << (base ? format_fixed(static_cast<double>(n) / static_cast<double>(base), 4) : std::string("n/a")) << '\n';
  }

  for (const auto& f : files) {
    const std::string name = f.filename().string();
    if (f.extension() != ".tsv" || !name.starts_with("scores_")) continue;
    const auto entries = read_score_tsv(f);
    std::vector<double> values;
    values.reserve(entries.size());
    for (const auto& e : entries) values.push_back(e.score);
    const auto hist = score_histogram(values, cfg.bins);
    out << "\n# " << f.stem().string() << " (" << entries.size() << " scored)\n";
    out << "bin_low\tbin_high\tcount\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
      out << format_fixed(hist.edges[b], 3) << '\t' << format_fixed(hist.edges[b + 1], 3) << '\t' << hist.counts[b]
          << '\n';
  }

  const std::string text = out.str();
  const fs::path report_path = cfg.output_dir / "report.txt";
  auto file = open_output(report_path);
  file << text;
  detail::finish(file, report_path);
  log << text;
  return text;
}

}  // namespace bitext
