#include "mteval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mteval {

const char* grouping_name(Grouping g) {
  return g == Grouping::NoGrouping ? "no_grouping" : "group_by_src";
}
const char* subset_name(Subset s) { return s == Subset::ALL ? "all" : "hq"; }
const char* corr_type_name(CorrType t) {
  return t == CorrType::Spearman ? "spearman" : "pearson";
}

std::vector<double> rank_average_ties(std::span<const double> values) {
  const std::size_t n = values.size();
  for (double v : values) {
    if (!std::isfinite(v)) throw UndefinedCorrelation("non-finite value in rank input");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // tie run spans ranks i+1 .. j+1; all members get the mean
    const double avg = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UndefinedCorrelation("length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw UndefinedCorrelation("fewer than 2 items");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("constant vector");
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UndefinedCorrelation("length mismatch");
  auto rx = rank_average_ties(x);
  auto ry = rank_average_ties(y);
  return pearson(rx, ry);
}

namespace {

double correlate(std::span<const double> x, std::span<const double> y, CorrType type) {
  return type == CorrType::Spearman ? spearman(x, y) : pearson(x, y);
}

}  // namespace

std::set<std::string> hq_source_set(const EvalCorpus& corpus) {
  std::set<std::string> result;
  const auto& records = corpus.records();
  for (const auto& src : corpus.sources()) {
    bool all_hq = true;
    for (std::size_t idx : corpus.source_records(src)) {
      if (records[idx].quality_class == QualityClass::NonHQ) {
        all_hq = false;
        break;
      }
    }
    if (all_hq) result.insert(src);
  }
  return result;
}

CorrelationResult corr_no_grouping(const EvalCorpus& corpus, const std::string& metric_name,
                                   Subset subset, CorrType corr_type) {
  const auto& records = corpus.records();
  const auto& scores = corpus.metric_column(metric_name);
  std::vector<double> gold, metric;
  gold.reserve(records.size());
  metric.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (subset == Subset::HQ && records[i].quality_class == QualityClass::NonHQ) continue;
    gold.push_back(records[i].gold_mqm);
    metric.push_back(scores[i]);
  }
  CorrelationResult result;
  result.metric_name = metric_name;
  result.spec = {Grouping::NoGrouping, subset, corr_type, std::nullopt};
  result.n_items = gold.size();
  result.n_groups_used = 1;
  result.n_groups_excluded = 0;
  result.value = correlate(gold, metric, corr_type);
  return result;
}

namespace detail {

GroupedCorr grouped_corr_over_sources(const EvalCorpus& corpus, const std::string& metric_name,
                                      const std::vector<std::string>& sources,
                                      CorrType corr_type) {
  const auto& records = corpus.records();
  const auto& scores = corpus.metric_column(metric_name);
  const std::size_t n_groups = sources.size();
  std::vector<double> group_value(n_groups, 0.0);
  std::vector<char> group_ok(n_groups, 0);
  std::vector<std::size_t> group_items(n_groups, 0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto& idx = corpus.source_records(sources[g]);
    std::vector<double> gold, metric;
    gold.reserve(idx.size());
    metric.reserve(idx.size());
    for (std::size_t i : idx) {
      gold.push_back(records[i].gold_mqm);
      metric.push_back(scores[i]);
    }
    group_items[g] = idx.size();
    try {
      group_value[g] = correlate(gold, metric, corr_type);
      group_ok[g] = 1;
    } catch (const UndefinedCorrelation&) {
      group_ok[g] = 0;
    }
  }

  // serial reduction in source order keeps results thread-count independent
  GroupedCorr result;
  double sum = 0.0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (group_ok[g]) {
      sum += group_value[g];
      result.n_items += group_items[g];
      ++result.n_used;
    } else {
      result.excluded.push_back(sources[g]);
    }
  }
  if (result.n_used == 0) {
    throw UndefinedCorrelation("all " + std::to_string(n_groups) + " groups degenerate",
                               n_groups);
  }
  result.mean = sum / static_cast<double>(result.n_used);
  return result;
}

}  // namespace detail

CorrelationResult corr_group_by_src(const EvalCorpus& corpus, const std::string& metric_name,
                                    Subset subset, CorrType corr_type) {
  std::vector<std::string> sources;
  if (subset == Subset::ALL) {
    sources = corpus.sources();
  } else {
    auto hq = hq_source_set(corpus);
    sources.assign(hq.begin(), hq.end());
  }
  if (sources.empty()) throw UndefinedCorrelation("no candidate groups");
  auto grouped = detail::grouped_corr_over_sources(corpus, metric_name, sources, corr_type);
  CorrelationResult result;
  result.metric_name = metric_name;
  result.spec = {Grouping::GroupBySrc, subset, corr_type, std::nullopt};
  result.value = grouped.mean;
  result.n_items = grouped.n_items;
  result.n_groups_used = grouped.n_used;
  result.n_groups_excluded = grouped.excluded.size();
  return result;
}

namespace {

CorrelationResult corr_on_source_subset(const EvalCorpus& corpus,
                                        const std::string& metric_name,
                                        const std::vector<std::string>& drawn_sources,
                                        const AnalysisSpec& spec) {
  if (spec.grouping == Grouping::GroupBySrc) {
    std::vector<std::string> sources = drawn_sources;
    if (spec.subset == Subset::HQ) {
      auto hq = hq_source_set(corpus);
      std::erase_if(sources, [&](const std::string& s) { return !hq.contains(s); });
      if (sources.empty()) throw UndefinedCorrelation("no HQ groups in subsample");
    }
    auto grouped =
        detail::grouped_corr_over_sources(corpus, metric_name, sources, spec.corr_type);
    CorrelationResult result;
    result.metric_name = metric_name;
    result.spec = spec;
    result.value = grouped.mean;
    result.n_items = grouped.n_items;
    result.n_groups_used = grouped.n_used;
    result.n_groups_excluded = grouped.excluded.size();
    return result;
  }

  const auto& records = corpus.records();
  const auto& scores = corpus.metric_column(metric_name);
  std::set<std::string> keep(drawn_sources.begin(), drawn_sources.end());
  std::vector<double> gold, metric;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!keep.contains(records[i].key.source_id)) continue;
    if (spec.subset == Subset::HQ && records[i].quality_class == QualityClass::NonHQ) continue;
    gold.push_back(records[i].gold_mqm);
    metric.push_back(scores[i]);
  }
  CorrelationResult result;
  result.metric_name = metric_name;
  result.spec = spec;
  result.n_items = gold.size();
  result.n_groups_used = 1;
  result.value = correlate(gold, metric, spec.corr_type);
  return result;
}

}  // namespace

CorrelationResult subsample_corr(const EvalCorpus& corpus, const std::string& metric_name,
                                 const AnalysisSpec& spec) {
  if (!spec.subsample) throw ConfigError("subsample_corr: spec has no subsample block");
  const auto& ss = *spec.subsample;
  if (ss.repeats < 1) throw ConfigError("subsample_corr: repeats must be >= 1");
  if (ss.target_sources > corpus.m_sources()) {
    throw ConfigError("subsample_corr: target_sources exceeds corpus sources");
  }
  const auto& all_sources = corpus.sources();

  std::vector<double> values(ss.repeats, 0.0);
  std::vector<char> defined(ss.repeats, 0);
  std::vector<std::size_t> items(ss.repeats, 0);
  std::vector<std::size_t> used(ss.repeats, 0);
  std::vector<std::size_t> excluded(ss.repeats, 0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t r = 0; r < ss.repeats; ++r) {
    // per-repeat stream: derived from (seed, repeat), never shared
    std::seed_seq sseq{static_cast<std::uint64_t>(ss.seed), static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(sseq);
    std::vector<std::string> drawn;
    drawn.reserve(ss.target_sources);
    std::sample(all_sources.begin(), all_sources.end(), std::back_inserter(drawn),
                ss.target_sources, rng);
    try {
      auto result = corr_on_source_subset(corpus, metric_name, drawn, spec);
      values[r] = result.value;
      items[r] = result.n_items;
      used[r] = result.n_groups_used;
      excluded[r] = result.n_groups_excluded;
      defined[r] = 1;
    } catch (const UndefinedCorrelation&) {
      defined[r] = 0;
    }
  }

  std::vector<double> ok;
  CorrelationResult result;
  result.metric_name = metric_name;
  result.spec = spec;
  result.n_groups_used = 0;
  for (std::size_t r = 0; r < ss.repeats; ++r) {
    if (!defined[r]) continue;
    ok.push_back(values[r]);
    result.n_items += items[r];
    result.n_groups_used += used[r];
    result.n_groups_excluded += excluded[r];
  }
  if (ok.empty()) {
    throw UndefinedCorrelation("all " + std::to_string(ss.repeats) +
                               " subsample repeats undefined");
  }
  // identical repeats (e.g. target_sources == M) collapse exactly
  if (std::all_of(ok.begin(), ok.end(), [&](double v) { return v == ok.front(); })) {
    result.value = ok.front();
    result.std_dev = 0.0;
    return result;
  }
  const double mean =
      std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
  result.value = mean;
  if (ok.size() >= 2) {
    double ssq = 0.0;
    for (double v : ok) ssq += (v - mean) * (v - mean);
    result.std_dev = std::sqrt(ssq / static_cast<double>(ok.size() - 1));
  } else {
    result.std_dev = 0.0;
  }
  return result;
}

CorrelationResult run_analysis(const EvalCorpus& corpus, const std::string& metric_name,
                               const AnalysisSpec& spec) {
  if (spec.subsample) return subsample_corr(corpus, metric_name, spec);
  if (spec.grouping == Grouping::NoGrouping) {
    return corr_no_grouping(corpus, metric_name, spec.subset, spec.corr_type);
  }
  return corr_group_by_src(corpus, metric_name, spec.subset, spec.corr_type);
}

}  // namespace mteval
