#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mteval/corpus.hpp"

namespace mteval {

struct NormalizationSpec {
  double range_min = 0.0;
  double range_max = 1.0;
  bool clamp = true;
  double threshold = 0.99;
};

// Min-max over the declared range, clamped to [0,1] when clamp is set.
// With clamp off, out-of-range scores raise ConfigError.
double normalize(double score, const NormalizationSpec& spec);

// normalize(score) >= threshold: the score "valid" rule for HQ-Zero detection.
bool is_valid(double score, const NormalizationSpec& spec);

struct SystemBias {
  std::size_t valid_on_hqzero = 0;
  std::size_t valid_on_nonhqzero = 0;
  std::size_t abs_diff = 0;
};

struct DetectionReport {
  std::string metric_name;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  // Absent (not zero) when the denominator is empty.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::map<std::string, SystemBias> per_system;
  std::size_t clamped_scores = 0;  // scores outside the declared range
};

// Positive class = HQZero; prediction = is_valid on the metric score.
DetectionReport detection_report(const EvalCorpus& corpus, const std::string& metric_name,
                                 const NormalizationSpec& spec);

struct BiasRow {
  std::string system;
  std::size_t valid_on_hqzero = 0;
  std::size_t valid_on_nonhqzero = 0;
  std::size_t abs_diff = 0;
};

// Per-system valid-score tallies, sorted descending by abs_diff.
std::vector<BiasRow> bias_report(const EvalCorpus& corpus, const std::string& metric_name,
                                 const NormalizationSpec& spec);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

// Normalized-score histogram over the HQZero records of one metric.
std::vector<HistogramBin> hqzero_histogram(const EvalCorpus& corpus,
                                           const std::string& metric_name,
                                           const NormalizationSpec& spec,
                                           std::size_t n_bins = 20);

}  // namespace mteval
