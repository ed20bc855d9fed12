#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mteval/corpus.hpp"
#include "mteval/stats.hpp"

namespace mteval {

struct MetricModel {
  std::string name;
  double noise_sd = 0.0;
  std::optional<std::string> bias_system;
  double bias_magnitude = 0.0;
  double range_min = -25.0;
  double range_max = 0.0;
};

struct SynthConfig {
  std::size_t n_systems = 2;
  std::size_t m_sources = 10;
  double p_zero = 0.5;
  double p_minor = 0.3;
  double p_major = 0.2;
  std::vector<MetricModel> metric_models;
  std::uint64_t seed = 0;
  std::string language_pair = "xx-yy";
};

// Gold scores drawn per class (0; uniform integer in [-4,-1]; uniform
// integer in [-20,-5]); each metric emits gold plus Gaussian noise, affinely
// mapped into its declared range. Bitwise deterministic per seed.
EvalCorpus generate_synthetic_corpus(const SynthConfig& cfg);

struct OracleGroupedCorr {
  double value = 0.0;
  std::size_t n_groups_used = 0;
  std::vector<std::string> excluded_sources;
};

// Naive serial reference for corr_group_by_src: O(n^2) rank counting,
// direct per-group loop, direct mean. Shares no code with the stats module.
OracleGroupedCorr oracle_grouped_corr(const EvalCorpus& corpus, const std::string& metric_name,
                                      Subset subset, CorrType corr_type);

}  // namespace mteval
