#include "mteval/detect.hpp"

#include <algorithm>
#include <cmath>

namespace mteval {

double normalize(double score, const NormalizationSpec& spec) {
  if (!(spec.range_min < spec.range_max)) {
    throw ConfigError("normalize: declared range min must be < max");
  }
  if (!std::isfinite(score)) throw ConfigError("normalize: non-finite score");
  double v = (score - spec.range_min) / (spec.range_max - spec.range_min);
  if (v < 0.0 || v > 1.0) {
    if (!spec.clamp) {
      throw ConfigError("normalize: score " + std::to_string(score) +
                        " outside declared range with clamping disabled");
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  return v;
}

bool is_valid(double score, const NormalizationSpec& spec) {
  return normalize(score, spec) >= spec.threshold;
}

DetectionReport detection_report(const EvalCorpus& corpus, const std::string& metric_name,
                                 const NormalizationSpec& spec) {
  const auto& records = corpus.records();
  const auto& scores = corpus.metric_column(metric_name);

  DetectionReport report;
  report.metric_name = metric_name;
  for (const auto& sys : corpus.systems()) report.per_system[sys] = {};

  for (std::size_t i = 0; i < records.size(); ++i) {
    const bool actual = records[i].quality_class == QualityClass::HQZero;
    const double raw = (scores[i] - spec.range_min) / (spec.range_max - spec.range_min);
    if (raw < 0.0 || raw > 1.0) ++report.clamped_scores;
    const bool predicted = is_valid(scores[i], spec);
    auto& sys = report.per_system[records[i].key.system];
    if (predicted) {
      if (actual) {
        ++report.tp;
        ++sys.valid_on_hqzero;
      } else {
        ++report.fp;
        ++sys.valid_on_nonhqzero;
      }
    } else {
      if (actual) ++report.fn;
      else ++report.tn;
    }
  }
  for (auto& [name, sys] : report.per_system) {
    sys.abs_diff = sys.valid_on_hqzero > sys.valid_on_nonhqzero
                       ? sys.valid_on_hqzero - sys.valid_on_nonhqzero
                       : sys.valid_on_nonhqzero - sys.valid_on_hqzero;
  }

  if (report.tp + report.fp > 0) {
    report.precision = static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fp);
  }
  if (report.tp + report.fn > 0) {
    report.recall = static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fn);
  }
  if (report.precision && report.recall && (*report.precision + *report.recall) > 0) {
    report.f1 = 2.0 * *report.precision * *report.recall / (*report.precision + *report.recall);
  }
  return report;
}

std::vector<BiasRow> bias_report(const EvalCorpus& corpus, const std::string& metric_name,
                                 const NormalizationSpec& spec) {
  auto report = detection_report(corpus, metric_name, spec);
  std::vector<BiasRow> rows;
  rows.reserve(report.per_system.size());
  for (const auto& [name, sys] : report.per_system) {
    rows.push_back({name, sys.valid_on_hqzero, sys.valid_on_nonhqzero, sys.abs_diff});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BiasRow& a, const BiasRow& b) {
    return a.abs_diff > b.abs_diff;
  });
  return rows;
}

std::vector<HistogramBin> hqzero_histogram(const EvalCorpus& corpus,
                                           const std::string& metric_name,
                                           const NormalizationSpec& spec, std::size_t n_bins) {
  if (n_bins == 0) throw ConfigError("hqzero_histogram: n_bins must be positive");
  std::vector<HistogramBin> bins(n_bins);
  const double width = 1.0 / static_cast<double>(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    bins[b].lo = static_cast<double>(b) * width;
    bins[b].hi = b + 1 == n_bins ? 1.0 : static_cast<double>(b + 1) * width;
  }
  const auto& records = corpus.records();
  const auto& scores = corpus.metric_column(metric_name);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].quality_class != QualityClass::HQZero) continue;
    const double v = normalize(scores[i], spec);
    auto b = std::min(static_cast<std::size_t>(v / width), n_bins - 1);
    ++bins[b].count;
  }
  return bins;
}

}  // namespace mteval
