#include "mteval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mteval/mqm.hpp"

namespace mteval {

namespace {

constexpr double kGoldSpanMin = -25.0;  // affine source span for metric mapping

// Explicit draws keep generation identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(rng() % span);
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller, one value per call
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::string padded(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04zu", prefix, i);
  return buf;
}

}  // namespace

EvalCorpus generate_synthetic_corpus(const SynthConfig& cfg) {
  if (cfg.n_systems < 1 || cfg.m_sources < 1) {
    throw ConfigError("synth: counts must be >= 1");
  }
  const double psum = cfg.p_zero + cfg.p_minor + cfg.p_major;
  if (std::abs(psum - 1.0) > 1e-9 || cfg.p_zero < 0 || cfg.p_minor < 0 || cfg.p_major < 0) {
    throw ConfigError("synth: class probabilities must be in [0,1] and sum to 1");
  }
  for (const auto& m : cfg.metric_models) {
    if (!(m.range_min < m.range_max)) {
      throw ConfigError("synth: metric " + m.name + " has empty range");
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<CorpusRecord> records;
  records.reserve(cfg.n_systems * cfg.m_sources);
  std::vector<MetricScoreTable> tables(cfg.metric_models.size());
  for (std::size_t m = 0; m < cfg.metric_models.size(); ++m) {
    tables[m].metric_name = cfg.metric_models[m].name;
    tables[m].is_reference_based = false;
    tables[m].range_min = cfg.metric_models[m].range_min;
    tables[m].range_max = cfg.metric_models[m].range_max;
  }

  for (std::size_t s = 0; s < cfg.m_sources; ++s) {
    for (std::size_t y = 0; y < cfg.n_systems; ++y) {
      CorpusRecord r;
      r.key = {cfg.language_pair, padded("src", s), padded("sys", y)};
      const double u = uniform01(rng);
      if (u < cfg.p_zero) {
        r.gold_mqm = 0.0;
      } else if (u < cfg.p_zero + cfg.p_minor) {
        r.gold_mqm = static_cast<double>(uniform_int(rng, -4, -1));
      } else {
        r.gold_mqm = static_cast<double>(uniform_int(rng, -20, -5));
      }
      r.quality_class = classify(r.gold_mqm);
      for (std::size_t m = 0; m < cfg.metric_models.size(); ++m) {
        const auto& model = cfg.metric_models[m];
        double g = r.gold_mqm;
        if (model.noise_sd > 0.0) g += model.noise_sd * gaussian(rng);
        if (model.bias_system && *model.bias_system == r.key.system) {
          g += model.bias_magnitude;
        }
        const double t = (g - kGoldSpanMin) / (0.0 - kGoldSpanMin);
        double score = model.range_min + t * (model.range_max - model.range_min);
        score = std::clamp(score, model.range_min, model.range_max);
        tables[m].scores.emplace(r.key, score);
      }
      records.push_back(std::move(r));
    }
  }
  return EvalCorpus(cfg.language_pair, std::move(records), std::move(tables));
}

namespace {

// O(n^2) counting ranks: rank = 1 + #smaller + (#equal - 1)/2
std::vector<double> naive_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t smaller = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++smaller;
      if (v[j] == v[i]) ++equal;
    }
    ranks[i] = 1.0 + static_cast<double>(smaller) +
               (static_cast<double>(equal) - 1.0) / 2.0;
  }
  return ranks;
}

bool naive_pearson(const std::vector<double>& x, const std::vector<double>& y, double* out) {
  const std::size_t n = x.size();
  if (n < 2) return false;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return false;
  *out = std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
  return true;
}

}  // namespace

OracleGroupedCorr oracle_grouped_corr(const EvalCorpus& corpus, const std::string& metric_name,
                                      Subset subset, CorrType corr_type) {
  const auto& records = corpus.records();
  const auto& scores = corpus.metric_column(metric_name);

  OracleGroupedCorr result;
  double sum = 0.0;
  for (const auto& src : corpus.sources()) {
    const auto& idx = corpus.source_records(src);
    if (subset == Subset::HQ) {
      bool all_hq = true;
      for (std::size_t i : idx) {
        if (records[i].quality_class == QualityClass::NonHQ) all_hq = false;
      }
      if (!all_hq) continue;
    }
    std::vector<double> gold, metric;
    for (std::size_t i : idx) {
      gold.push_back(records[i].gold_mqm);
      metric.push_back(scores[i]);
    }
    if (corr_type == CorrType::Spearman) {
      gold = naive_ranks(gold);
      metric = naive_ranks(metric);
    }
    double r = 0.0;
    if (naive_pearson(gold, metric, &r)) {
      sum += r;
      ++result.n_groups_used;
    } else {
      result.excluded_sources.push_back(src);
    }
  }
  if (result.n_groups_used == 0) {
    throw UndefinedCorrelation("oracle: all groups degenerate",
                               result.excluded_sources.size());
  }
  result.value = sum / static_cast<double>(result.n_groups_used);
  return result;
}

}  // namespace mteval
