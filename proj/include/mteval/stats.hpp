#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mteval/corpus.hpp"

namespace mteval {

enum class Grouping { NoGrouping, GroupBySrc };
enum class Subset { ALL, HQ };
enum class CorrType { Spearman, Pearson };

const char* grouping_name(Grouping g);
const char* subset_name(Subset s);
const char* corr_type_name(CorrType t);

struct SubsampleSpec {
  std::size_t target_sources = 0;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
};

struct AnalysisSpec {
  Grouping grouping = Grouping::NoGrouping;
  Subset subset = Subset::ALL;
  CorrType corr_type = CorrType::Spearman;
  std::optional<SubsampleSpec> subsample;
};

struct CorrelationResult {
  std::string metric_name;
  AnalysisSpec spec;
  double value = 0.0;
  std::optional<double> std_dev;  // across subsample repeats
  std::size_t n_items = 0;
  std::size_t n_groups_used = 1;
  std::size_t n_groups_excluded = 0;
};

// Average ranks in 1..n; ties get the mean of the rank span they cover.
std::vector<double> rank_average_ties(std::span<const double> values);

// Sample Pearson r. Throws UndefinedCorrelation for n < 2 or a constant vector.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson on average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

// Sources where every system's translation is HQ (class != NonHQ).
std::set<std::string> hq_source_set(const EvalCorpus& corpus);

CorrelationResult corr_no_grouping(const EvalCorpus& corpus, const std::string& metric_name,
                                   Subset subset, CorrType corr_type);

// Per-source correlation over the N system translations, averaged across
// sources. Degenerate groups (constant gold or metric vector) are excluded
// and counted. HQ subset runs on exactly the all-HQ sources.
CorrelationResult corr_group_by_src(const EvalCorpus& corpus, const std::string& metric_name,
                                    Subset subset, CorrType corr_type);

CorrelationResult subsample_corr(const EvalCorpus& corpus, const std::string& metric_name,
                                 const AnalysisSpec& spec);

// Dispatch on spec.grouping / spec.subsample.
CorrelationResult run_analysis(const EvalCorpus& corpus, const std::string& metric_name,
                               const AnalysisSpec& spec);

namespace detail {
// Shared by the grouped paths: per-group correlations over an explicit
// source list; excluded sources reported by id.
struct GroupedCorr {
  double mean = 0.0;
  std::size_t n_items = 0;
  std::size_t n_used = 0;
  std::vector<std::string> excluded;
};
GroupedCorr grouped_corr_over_sources(const EvalCorpus& corpus, const std::string& metric_name,
                                      const std::vector<std::string>& sources,
                                      CorrType corr_type);
}  // namespace detail

}  // namespace mteval
