// bitextfilter: command-line driver for the corpus filtering pipeline.
//
//   bitextfilter <preprocess|score|filter|sample|split|bleu|correlate|report> [options]
//
// Settings come from --config (key=value file) and are overridden by flags.
// Exit codes: 0 success, 2 usage error, 3 data error. Failures print a single
// "CODE: message" line on stderr.

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "bitext/bitext.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
  bool repeatable = false;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_flags(CLI::App* cmd, const std::vector<FlagSpec>& flags, Overrides& overrides) {
  for (const auto& f : flags) {
    const std::string key = f.key;
    if (f.repeatable) {
      cmd->add_option_function<std::vector<std::string>>(
          f.flag,
          [&overrides, key](const std::vector<std::string>& values) {
            for (const auto& v : values) overrides.emplace_back(key, v);
          },
          f.help);
    } else {
      cmd->add_option_function<std::string>(
          f.flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, f.help);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel-corpus filtering with cross-lingual embedding similarity"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> assignments;
  Overrides overrides;

  const std::vector<FlagSpec> common = {
      {"--output-dir", "output_dir", "Directory for all artifacts"},
      {"--threads", "threads", "Upper bound on worker threads (outputs do not depend on it)"},
  };

  struct Sub {
    const char* name;
    const char* help;
    std::vector<FlagSpec> flags;
  };
  const std::vector<Sub> subs = {
      {"preprocess", "Dedup, untranslated, length and script filters; writes preprocessed.tsv",
       {{"--input-tsv", "input_tsv", "Corpus TSV (source<TAB>target<TAB>origin)", true},
        {"--input-pair", "input_pair", "ORIGIN,SOURCE_FILE,TARGET_FILE", true},
        {"--min-chars", "min_chars", "Minimum characters per side (default 15)"},
        {"--max-chars", "max_chars", "Maximum characters per side (default 200)"}}},
      {"score", "Cosine-score every pair; writes scores_<label>.tsv",
       {{"--corpus", "corpus", "Corpus TSV to score"},
        {"--method", "method", "muse | precomputed"},
        {"--method-tag", "method_tag", "MUSE | LASER | LABSE | OTHER (names outputs)"},
        {"--source-emb", "source_embeddings", "Source word table (muse) or EMBF file (precomputed)"},
        {"--target-emb", "target_embeddings", "Target word table (muse) or EMBF file (precomputed)"}}},
      {"filter", "Keep the best-scoring fraction(s)",
       {{"--corpus", "corpus", "Corpus TSV that was scored"},
        {"--scores", "scores", "Score TSV from the score command"},
        {"--method-tag", "method_tag", "MUSE | LASER | LABSE | OTHER (names outputs)"},
        {"--fractions", "fractions", "Comma-separated retention fractions in (0, 1]"}}},
      {"sample", "Seeded random subsets",
       {{"--corpus", "corpus", "Corpus TSV to sample"},
        {"--fractions", "fractions", "Comma-separated fractions in (0, 1]"},
        {"--seeds", "seeds", "Comma-separated unsigned 64-bit seeds"}}},
      {"split", "Origin-stratified train/validation split",
       {{"--corpus", "corpus", "Corpus TSV to split"},
        {"--train-fraction", "train_fraction", "Training share in (0, 1) (default 0.8)"},
        {"--seed", "seed", "Shuffle seed"}}},
      {"bleu", "Corpus BLEU of hypotheses against references",
       {{"--hyp", "hypotheses", "Hypothesis file, one segment per line"},
        {"--ref", "references", "Reference file, one segment per line"}}},
      {"correlate", "Pearson correlation of two score files over shared pair ids",
       {{"--scores-a", "scores_a", "First score TSV"},
        {"--scores-b", "scores_b", "Second score TSV"},
        {"--method-a", "method_a", "Tag of the first method"},
        {"--method-b", "method_b", "Tag of the second method"}}},
      {"report", "Summarize artifact sizes and score histograms in the output directory",
       {{"--bins", "bins", "Histogram bins over [-1, 1] (default 20)"}}},
  };

  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("--config", config_path, "key=value configuration file");
    cmd->add_option("--set", assignments, "Override any setting: key=value (repeatable)");
    cmd->add_flag_callback("--strict", [&] { overrides.emplace_back("missing", "strict"); },
                           "Missing embeddings are an error (default)");
    cmd->add_flag_callback("--permissive", [&] { overrides.emplace_back("missing", "permissive"); },
                           "Pairs without embeddings become uncovered");
    add_flags(cmd, common, overrides);
    add_flags(cmd, sub.flags, overrides);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "USAGE: " << e.what() << '\n';
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    bitext::ConfigBuilder builder;
    if (!config_path.empty()) builder.load_file(config_path);
    builder.next_layer();
    for (const auto& [key, value] : overrides) builder.set(key, value);
    for (const auto& a : assignments) builder.set_assignment(a);
    const bitext::PipelineConfig cfg = builder.build();

    if (command == "preprocess") bitext::cmd_preprocess(cfg, std::cout);
    else if (command == "score") bitext::cmd_score(cfg, std::cout);
    else if (command == "filter") bitext::cmd_filter(cfg, std::cout);
    else if (command == "sample") bitext::cmd_sample(cfg, std::cout);
    else if (command == "split") bitext::cmd_split(cfg, std::cout);
    else if (command == "bleu") bitext::cmd_bleu(cfg, std::cout);
    else if (command == "correlate") bitext::cmd_correlate(cfg, std::cout);
    else if (command == "report") bitext::cmd_report(cfg, std::cout);
  } catch (const bitext::Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == bitext::ErrorCode::kInvalidArgument ? kExitUsage : kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "IO_ERROR: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "INTERNAL_ERROR: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
