#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bitext/error.hpp"
#include "bitext/filter.hpp"

namespace bitext {

struct CorrelationReport {
  double r = 0.0;
  std::size_t n = 0;
  Method method_a = Method::kOther;
  Method method_b = Method::kOther;
};

/// Sample Pearson correlation, two-pass (means first), clamped to [-1, 1].
inline CorrelationReport pearson(std::span<const double> xs, std::span<const double> ys,
                                 Method method_a = Method::kOther, Method method_b = Method::kOther) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::kLengthMismatch,
                "series of length " + std::to_string(xs.size()) + " and " + std::to_string(ys.size()));
  if (xs.size() < 2) throw Error(ErrorCode::kLengthMismatch, "correlation needs at least 2 samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::kConstantSeries, "correlation of a constant series");
  const double r = std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
  return {r, xs.size(), method_a, method_b};
}

struct Histogram {
  std::vector<double> edges;         // bins + 1 values from -1 to 1
  std::vector<std::size_t> counts;   // bins values
};

/// Equal-width bins over [-1, 1]; a value on an inner edge goes to the upper
/// bin, and 1.0 lands in the last bin.
inline Histogram score_histogram(std::span<const double> scores, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  h.edges.resize(bins + 1);
  const double width = 2.0 / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = -1.0 + width * static_cast<double>(b);
  h.edges.back() = 1.0;
  for (double s : scores) {
    const double pos = (std::clamp(s, -1.0, 1.0) + 1.0) / width;
    const auto b = std::min(static_cast<std::size_t>(pos), bins - 1);
    ++h.counts[b];
  }
  return h;
}

inline Histogram score_histogram(const ScoredCorpus& scored, std::size_t bins) {
  std::vector<double> values;
  values.reserve(scored.size());
  for (const auto& s : scored.scores())
    if (s) values.push_back(*s);
  return score_histogram(values, bins);
}

}  // namespace bitext
