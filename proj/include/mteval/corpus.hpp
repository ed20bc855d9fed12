#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mteval/errors.hpp"

namespace mteval {

enum class Severity { Major, Minor, Neutral, NoError };

const char* severity_name(Severity s);
// Case-insensitive; accepts "no-error", "no_error" and "noerror" for NoError.
std::optional<Severity> parse_severity(const std::string& text);

// One rater-marked error span from an MQM annotation dump.
struct ErrorAnnotation {
  std::string system;
  std::string doc;
  std::int64_t seg_id = 0;
  std::string rater;
  std::string source_text;
  std::string target_text;  // may contain span markup, kept verbatim
  std::string category;
  Severity severity = Severity::NoError;

  bool operator==(const ErrorAnnotation&) const = default;
};

// (language_pair, source_id, system) uniquely identifies a translation.
struct SegmentKey {
  std::string language_pair;
  std::string source_id;
  std::string system;

  bool operator==(const SegmentKey&) const = default;
  auto operator<=>(const SegmentKey&) const = default;
};

std::string to_string(const SegmentKey& key);

struct SegmentKeyHash {
  std::size_t operator()(const SegmentKey& k) const;
};

// Per-segment scores for one metric with its documented output range.
struct MetricScoreTable {
  std::string metric_name;
  bool is_reference_based = true;
  double range_min = 0.0;
  double range_max = 1.0;
  std::unordered_map<SegmentKey, double, SegmentKeyHash> scores;
};

enum class QualityClass { HQZero, HQMinor, NonHQ };

const char* quality_class_name(QualityClass c);

struct CorpusRecord {
  SegmentKey key;
  std::string translation_text;
  double gold_mqm = 0.0;
  QualityClass quality_class = QualityClass::HQZero;
};

// Immutable aligned corpus: records sorted by (source_id, system), every
// metric column aligned to the record order.
class EvalCorpus {
 public:
  EvalCorpus(std::string language_pair, std::vector<CorpusRecord> records,
             std::vector<MetricScoreTable> metrics);

  const std::string& language_pair() const { return language_pair_; }
  std::size_t n_systems() const { return systems_.size(); }
  std::size_t m_sources() const { return sources_.size(); }
  const std::vector<CorpusRecord>& records() const { return records_; }
  const std::vector<std::string>& systems() const { return systems_; }
  const std::vector<std::string>& sources() const { return sources_; }
  const std::vector<MetricScoreTable>& metrics() const { return metrics_; }

  const MetricScoreTable& metric(const std::string& name) const;
  bool has_metric(const std::string& name) const;
  // Scores for one metric aligned with records().
  const std::vector<double>& metric_column(const std::string& name) const;

  // Record indices for one source, in system order.
  const std::vector<std::size_t>& source_records(const std::string& source_id) const;

  // Canonical byte serialization used by the determinism checks.
  std::string canonical_serialization() const;

 private:
  std::string language_pair_;
  std::vector<CorpusRecord> records_;
  std::vector<MetricScoreTable> metrics_;
  std::vector<std::string> systems_;
  std::vector<std::string> sources_;
  std::vector<std::vector<double>> metric_columns_;
  std::unordered_map<std::string, std::size_t> metric_index_;
  std::map<std::string, std::vector<std::size_t>> by_source_;
};

// Column layout for MQM TSV ingestion. Indices are 0-based positions; the
// default matches the 9-column WMT dump (system, doc, doc_id, seg_id, rater,
// source, target, category, severity).
struct MqmColumnMap {
  int system = 0;
  int doc = 1;
  int seg_id = 3;
  int rater = 4;
  int source_text = 5;
  int target_text = 6;
  int category = 7;
  int severity = 8;
  int min_columns = 9;
  bool has_header = true;
};

enum class UnknownSeverityPolicy { Reject, MapToNeutral };

std::vector<ErrorAnnotation> parse_mqm_tsv(
    std::istream& in, const MqmColumnMap& columns = {},
    UnknownSeverityPolicy policy = UnknownSeverityPolicy::Reject);

// Canonical 9-column TSV (with header); parse_mqm_tsv round-trips it.
void write_mqm_tsv(std::ostream& out, const std::vector<ErrorAnnotation>& annotations);

enum class ScoreLayout { TsvKeyed, OneScorePerLine };

// tsv_keyed: lines of system<TAB>source_id<TAB>score.
MetricScoreTable parse_score_table(std::istream& in, const std::string& metric_name,
                                   const std::string& language_pair, double range_min,
                                   double range_max,
                                   ScoreLayout layout = ScoreLayout::TsvKeyed,
                                   const std::vector<std::string>* segment_manifest = nullptr,
                                   const std::string& system = {});

struct BuildOptions {
  bool strict = true;
};

struct BuildReport {
  std::size_t records_dropped = 0;  // lenient mode only
};

EvalCorpus build_corpus(const std::string& language_pair,
                        const std::map<SegmentKey, double>& gold,
                        std::vector<MetricScoreTable> tables, const BuildOptions& options = {},
                        BuildReport* report = nullptr, double hq_boundary = -5.0);

}  // namespace mteval
