#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mteval/corpus.hpp"
#include "mteval/detect.hpp"
#include "mteval/mqm.hpp"
#include "mteval/stats.hpp"

namespace mteval {

struct MetricManifestEntry {
  std::string name;
  bool reference_based = true;
  double range_min = 0.0;
  double range_max = 1.0;
  std::filesystem::path path;
  ScoreLayout layout = ScoreLayout::TsvKeyed;
  std::optional<std::filesystem::path> segment_manifest;  // one_score_per_line
  std::optional<std::string> system;                      // one_score_per_line
};

struct DetectionSpec {
  double threshold = 0.99;
  bool clamp = true;
};

// One file drives a whole run; CLI flags override individual fields.
struct RunManifest {
  std::string language_pair;
  std::optional<std::filesystem::path> mqm_tsv;
  std::optional<std::filesystem::path> gold_tsv;  // precomputed gold scores
  MqmColumnMap mqm_columns;
  SeverityWeights weights;
  RaterAggregation aggregation = RaterAggregation::Mean;
  double hq_boundary = -5.0;
  std::vector<MetricManifestEntry> metrics;
  std::vector<AnalysisSpec> analyses;
  DetectionSpec detection;
  bool strict = true;
  std::filesystem::path out_dir = ".";
  std::set<std::string> formats = {"csv"};
};

RunManifest load_manifest(const std::filesystem::path& path);

// Parse gold (from MQM TSV or a gold TSV) and all score tables, then join.
EvalCorpus load_corpus(const RunManifest& manifest, BuildReport* report = nullptr);

NormalizationSpec normalization_spec(const RunManifest& manifest,
                                     const MetricScoreTable& metric);

}  // namespace mteval
