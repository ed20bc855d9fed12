#include <doctest.h>

#include <cmath>
#include <random>

#include "mteval/detect.hpp"
#include "mteval/mqm.hpp"
#include "mteval/stats.hpp"
#include "mteval/synth.hpp"

using namespace mteval;

TEST_CASE("generation is bitwise deterministic per seed") {
  SynthConfig cfg;
  cfg.n_systems = 4;
  cfg.m_sources = 50;
  cfg.p_zero = 0.4;
  cfg.p_minor = 0.35;
  cfg.p_major = 0.25;
  cfg.seed = 31337;
  cfg.metric_models.push_back({"noisy", 1.5, std::nullopt, 0.0, -25.0, 0.0});
  auto a = generate_synthetic_corpus(cfg);
  auto b = generate_synthetic_corpus(cfg);
  CHECK(a.canonical_serialization() == b.canonical_serialization());
  cfg.seed = 31338;
  auto c = generate_synthetic_corpus(cfg);
  CHECK(a.canonical_serialization() != c.canonical_serialization());
}

TEST_CASE("p_zero = 1 yields an all-HQZero corpus") {
  SynthConfig cfg;
  cfg.n_systems = 2;
  cfg.m_sources = 20;
  cfg.p_zero = 1.0;
  cfg.p_minor = 0.0;
  cfg.p_major = 0.0;
  cfg.metric_models.push_back({"m", 0.0, std::nullopt, 0.0, -25.0, 0.0});
  auto corpus = generate_synthetic_corpus(cfg);
  auto d = distribution(corpus);
  CHECK(d.pct_zero == 100.0);
  CHECK(d.pct_hq_minor == 0.0);
  CHECK(d.pct_nonhq == 0.0);
  CHECK(d.n == 40);
}

TEST_CASE("noiseless unbiased metric correlates perfectly in every configuration") {
  SynthConfig cfg;
  cfg.n_systems = 5;
  cfg.m_sources = 40;
  cfg.p_zero = 0.3;
  cfg.p_minor = 0.4;
  cfg.p_major = 0.3;
  cfg.seed = 5;
  cfg.metric_models.push_back({"clean", 0.0, std::nullopt, 0.0, 0.0, 1.0});
  auto corpus = generate_synthetic_corpus(cfg);
  CHECK(corr_no_grouping(corpus, "clean", Subset::ALL, CorrType::Spearman).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(corr_no_grouping(corpus, "clean", Subset::ALL, CorrType::Pearson).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  auto grouped = corr_group_by_src(corpus, "clean", Subset::ALL, CorrType::Spearman);
  CHECK(grouped.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empirical class mix converges to the configured mix") {
  SynthConfig cfg;
  cfg.n_systems = 10;
  cfg.m_sources = 1000;  // 10k records
  cfg.p_zero = 0.5;
  cfg.p_minor = 0.3;
  cfg.p_major = 0.2;
  cfg.seed = 99;
  auto d = distribution(generate_synthetic_corpus(cfg));
  const double n = 10000.0;
  auto within_3se = [&](double observed_pct, double p) {
    const double se = std::sqrt(p * (1 - p) / n);
    return std::fabs(observed_pct / 100.0 - p) <= 3.0 * se;
  };
  CHECK(within_3se(d.pct_zero, 0.5));
  CHECK(within_3se(d.pct_hq_minor, 0.3));
  CHECK(within_3se(d.pct_nonhq, 0.2));
}

TEST_CASE("planted bias system tops the bias report") {
  SynthConfig cfg;
  cfg.n_systems = 3;
  cfg.m_sources = 200;
  // mostly non-HQ records so overestimation dominates the abs_diff tallies
  cfg.p_zero = 0.1;
  cfg.p_minor = 0.2;
  cfg.p_major = 0.7;
  cfg.seed = 17;
  cfg.metric_models.push_back({"biased", 0.5, std::string("sys0001"), 25.0, -25.0, 0.0});
  auto corpus = generate_synthetic_corpus(cfg);
  auto rows = bias_report(corpus, "biased", {-25.0, 0.0, true, 0.99});
  REQUIRE(!rows.empty());
  CHECK(rows.front().system == "sys0001");
  CHECK(rows.front().abs_diff > 0);
}

TEST_CASE("oracle equals the primary grouped correlation on random configs") {
  std::mt19937 meta(12345);
  std::uniform_int_distribution<int> systems(2, 8);
  std::uniform_int_distribution<int> sources(2, 60);
  std::uniform_real_distribution<double> noise(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    SynthConfig cfg;
    cfg.n_systems = systems(meta);
    cfg.m_sources = sources(meta);
    cfg.p_zero = 0.45;
    cfg.p_minor = 0.3;
    cfg.p_major = 0.25;
    cfg.seed = meta();
    cfg.metric_models.push_back({"m", noise(meta), std::nullopt, 0.0, -25.0, 0.0});
    auto corpus = generate_synthetic_corpus(cfg);
    for (auto type : {CorrType::Spearman, CorrType::Pearson}) {
      for (auto subset : {Subset::ALL, Subset::HQ}) {
        bool primary_defined = true, oracle_defined = true;
        CorrelationResult primary;
        OracleGroupedCorr oracle;
        try {
          primary = corr_group_by_src(corpus, "m", subset, type);
        } catch (const UndefinedCorrelation&) {
          primary_defined = false;
        }
        try {
          oracle = oracle_grouped_corr(corpus, "m", subset, type);
        } catch (const UndefinedCorrelation&) {
          oracle_defined = false;
        }
        REQUIRE(primary_defined == oracle_defined);
        if (primary_defined) {
          CHECK(primary.value == doctest::Approx(oracle.value).epsilon(1e-12));
          CHECK(primary.n_groups_used == oracle.n_groups_used);
          CHECK(primary.n_groups_excluded == oracle.excluded_sources.size());
        }
      }
    }
  }
}

TEST_CASE("oracle and primary exclude exactly the same degenerate group") {
  SynthConfig cfg;
  cfg.n_systems = 3;
  cfg.m_sources = 8;
  cfg.p_zero = 0.8;  // constant-gold groups are likely
  cfg.p_minor = 0.1;
  cfg.p_major = 0.1;
  cfg.seed = 4;
  cfg.metric_models.push_back({"m", 1.0, std::nullopt, 0.0, -25.0, 0.0});
  auto corpus = generate_synthetic_corpus(cfg);
  auto primary = corr_group_by_src(corpus, "m", Subset::ALL, CorrType::Spearman);
  auto oracle = oracle_grouped_corr(corpus, "m", Subset::ALL, CorrType::Spearman);
  CHECK(primary.n_groups_excluded == oracle.excluded_sources.size());
  CHECK(primary.n_groups_excluded > 0);  // seed chosen to exercise exclusion
}
