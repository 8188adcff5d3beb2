#pragma once

// Flat key=value pipeline configuration. '#' starts a comment line. List keys
// (input_tsv, input_pair) may repeat and accumulate; other keys take the last value.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/corpus_io.hpp"
#include "bitext/error.hpp"
#include "bitext/filter.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

struct ParallelInput {
  Origin origin;
  std::filesystem::path source;
  std::filesystem::path target;
};

struct TsvInput {
  std::filesystem::path path;
};

using CorpusInput = std::variant<ParallelInput, TsvInput>;

enum class ScoringBackend { kMuse, kPrecomputed };

struct PipelineConfig {
  std::vector<CorpusInput> inputs;
  std::filesystem::path corpus;
  std::filesystem::path scores;
  ScoringBackend backend = ScoringBackend::kMuse;
  Method method_tag = Method::kMuse;
  std::filesystem::path source_embeddings;
  std::filesystem::path target_embeddings;
  std::vector<double> fractions = {0.2, 0.6};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  double train_fraction = 0.8;
  std::filesystem::path output_dir = ".";
  unsigned threads = 1;
  MissingPolicy missing = MissingPolicy::kStrict;
  std::size_t min_chars = kDefaultMinChars;
  std::size_t max_chars = kDefaultMaxChars;
  std::size_t bins = 20;
  std::filesystem::path hypotheses;
  std::filesystem::path references;
  std::filesystem::path scores_a;
  std::filesystem::path scores_b;
  Method method_a = Method::kOther;
  Method method_b = Method::kOther;

  /// File-name stem for score and filter outputs, e.g. "muse", "laser".
  std::string label() const {
    std::string s(method_name(method_tag));
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  }
};

namespace detail {

[[noreturn]] inline void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorCode::kInvalidArgument,
              std::string(key) + "=" + std::string(value) + ": " + std::string(why));
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    bad_value(key, text, "not a number");
  return value;
}

inline std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const auto part = unicode::trim(text.substr(start, comma == text.npos ? text.npos : comma - start));
    if (!part.empty()) parts.push_back(part);
    if (comma == text.npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace detail

/// Applies settings in order. A list key seen for the first time in this
/// layer replaces whatever an earlier layer set.
class ConfigBuilder {
 public:
  void set(std::string_view key, std::string_view raw) {
    const std::string_view value = unicode::trim(raw);
    const bool first_in_layer = touched_.insert(std::string(key)).second;
    if (key == "input_tsv") {
      if (first_in_layer) drop_inputs<TsvInput>();
      for (auto p : detail::split_commas(value)) config_.inputs.emplace_back(TsvInput{std::filesystem::path(p)});
    } else if (key == "input_pair") {
      if (first_in_layer) drop_inputs<ParallelInput>();
      const auto parts = detail::split_commas(value);
      if (parts.size() != 3) detail::bad_value(key, value, "expected ORIGIN,SOURCE_PATH,TARGET_PATH");
      const auto origin = parse_origin(parts[0]);
      if (!origin) detail::bad_value(key, value, "unknown origin");
      config_.inputs.emplace_back(ParallelInput{*origin, parts[1], parts[2]});
    } else if (key == "corpus") {
      config_.corpus = value;
    } else if (key == "scores") {
      config_.scores = value;
    } else if (key == "method") {
      if (value == "muse") {
        config_.backend = ScoringBackend::kMuse;
        config_.method_tag = Method::kMuse;
      } else if (value == "precomputed") {
        config_.backend = ScoringBackend::kPrecomputed;
        if (config_.method_tag == Method::kMuse) config_.method_tag = Method::kOther;
      } else {
        detail::bad_value(key, value, "expected muse or precomputed");
      }
    } else if (key == "method_tag") {
      config_.method_tag = parse_method_or_throw(key, value);
    } else if (key == "source_embeddings") {
      config_.source_embeddings = value;
    } else if (key == "target_embeddings") {
      config_.target_embeddings = value;
    } else if (key == "fractions") {
      config_.fractions.clear();
      for (auto p : detail::split_commas(value)) {
        const double f = detail::parse_number<double>(key, p);
        if (!(f > 0.0 && f <= 1.0)) detail::bad_value(key, value, "fractions must lie in (0, 1]");
        config_.fractions.push_back(f);
      }
      if (config_.fractions.empty()) detail::bad_value(key, value, "at least one fraction required");
    } else if (key == "seeds" || key == "seed") {
      config_.seeds.clear();
      for (auto p : detail::split_commas(value)) config_.seeds.push_back(detail::parse_number<std::uint64_t>(key, p));
      if (config_.seeds.empty()) detail::bad_value(key, value, "at least one seed required");
    } else if (key == "train_fraction") {
      const double f = detail::parse_number<double>(key, value);
      if (!(f > 0.0 && f < 1.0)) detail::bad_value(key, value, "train_fraction must lie in (0, 1)");
      config_.train_fraction = f;
    } else if (key == "output_dir") {
      config_.output_dir = value;
    } else if (key == "threads") {
      const auto t = detail::parse_number<unsigned>(key, value);
      if (t == 0) detail::bad_value(key, value, "threads must be >= 1");
      config_.threads = t;
    } else if (key == "missing") {
      if (value == "strict") config_.missing = MissingPolicy::kStrict;
      else if (value == "permissive") config_.missing = MissingPolicy::kPermissive;
      else detail::bad_value(key, value, "expected strict or permissive");
    } else if (key == "min_chars") {
      config_.min_chars = detail::parse_number<std::size_t>(key, value);
    } else if (key == "max_chars") {
      config_.max_chars = detail::parse_number<std::size_t>(key, value);
    } else if (key == "bins") {
      config_.bins = detail::parse_number<std::size_t>(key, value);
      if (config_.bins == 0) detail::bad_value(key, value, "bins must be >= 1");
    } else if (key == "hypotheses") {
      config_.hypotheses = value;
    } else if (key == "references") {
      config_.references = value;
    } else if (key == "scores_a") {
      config_.scores_a = value;
    } else if (key == "scores_b") {
      config_.scores_b = value;
    } else if (key == "method_a") {
      config_.method_a = parse_method_or_throw(key, value);
    } else if (key == "method_b") {
      config_.method_b = parse_method_or_throw(key, value);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
    }
  }

  /// "key=value" form, as accepted by --set.
  void set_assignment(std::string_view assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kInvalidArgument, "expected key=value, got '" + std::string(assignment) + "'");
    set(unicode::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
  }

  void load_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
      throw Error(ErrorCode::kInvalidArgument, "config file not found: " + path.string());
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto line = unicode::trim(lines[i]);
      if (line.empty() || line.front() == '#') continue;
      try {
        set_assignment(line);
      } catch (const Error& e) {
        throw Error(e.code(), path.string() + " line " + std::to_string(i + 1) + ": " +
                                  std::string(std::string_view(e.what()).substr(error_code_name(e.code()).size() + 2)));
      }
    }
    next_layer();
  }

  /// Starts a new override layer (file settings, then command-line settings).
  void next_layer() { touched_.clear(); }

  const PipelineConfig& config() const noexcept { return config_; }

  /// Cross-field checks, run once all layers are applied.
  PipelineConfig build() const {
    if (config_.min_chars > config_.max_chars)
      throw Error(ErrorCode::kInvalidArgument, "min_chars must not exceed max_chars");
    return config_;
  }

 private:
  template <class Kind>
  void drop_inputs() {
    std::erase_if(config_.inputs, [](const CorpusInput& in) { return std::holds_alternative<Kind>(in); });
  }

  static Method parse_method_or_throw(std::string_view key, std::string_view value) {
    auto m = parse_method(value);
    if (!m) detail::bad_value(key, value, "expected MUSE, LASER, LABSE or OTHER");
    return *m;
  }

  PipelineConfig config_;
  std::set<std::string, std::less<>> touched_;
};

}  // namespace bitext
