#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mteval/detect.hpp"
#include "mteval/mqm.hpp"
#include "mteval/stats.hpp"

namespace mteval {

// metric,grouping,subset,corr_type,value,std,n_items,n_groups_used,n_groups_excluded
void write_correlation_csv(std::ostream& out, const std::vector<CorrelationResult>& results);
void write_correlation_json(std::ostream& out, const std::vector<CorrelationResult>& results);
// One row per metric, one column per (grouping, subset, subsampled) spec.
void write_correlation_markdown(std::ostream& out,
                                const std::vector<CorrelationResult>& results);

void write_detection_json(std::ostream& out, const DetectionReport& report);
// Rounded percents, one row per metric.
void write_detection_markdown(std::ostream& out, const std::vector<DetectionReport>& reports);

// system,valid_hqzero,valid_nonhqzero,abs_diff
void write_bias_csv(std::ostream& out, const std::vector<BiasRow>& rows);

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

struct DistributionRow {
  std::string language_pair;
  Distribution dist;
};
void write_distribution_csv(std::ostream& out, const std::vector<DistributionRow>& rows);
void write_distribution_markdown(std::ostream& out, const std::vector<DistributionRow>& rows);

// Shortest decimal text that round-trips the double.
std::string format_double(double v);
// Half-away-from-zero integer percent, presentation only.
long round_percent(double fraction);

}  // namespace mteval
