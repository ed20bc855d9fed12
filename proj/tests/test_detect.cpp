#include <doctest.h>

#include <map>
#include <vector>

#include "mteval/detect.hpp"
#include "mteval/mqm.hpp"

using namespace mteval;

namespace {

// One system per record row; gold + metric score pairs.
EvalCorpus detect_corpus(const std::vector<std::pair<double, double>>& rows,
                         double lo = -25.0, double hi = 0.0,
                         const std::vector<std::string>* systems = nullptr) {
  std::map<SegmentKey, double> gold;
  MetricScoreTable table;
  table.metric_name = "m";
  table.range_min = lo;
  table.range_max = hi;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string sys = systems ? (*systems)[i] : "sysA";
    SegmentKey key{"en-de", "s" + std::to_string(i), sys};
    gold[key] = rows[i].first;
    table.scores[key] = rows[i].second;
  }
  return build_corpus("en-de", gold, {table}, {.strict = false});
}

}  // namespace

TEST_CASE("normalize maps the declared range onto [0,1]") {
  NormalizationSpec spec{-25.0, 0.0, true, 0.99};
  CHECK(normalize(-25.0, spec) == 0.0);
  CHECK(normalize(0.0, spec) == 1.0);
  CHECK(normalize(-0.2, spec) == doctest::Approx(0.992));
  CHECK(normalize(-1.0, spec) == doctest::Approx(0.96));
}

TEST_CASE("normalize clamp behavior") {
  NormalizationSpec spec{0.0, 1.0, true, 0.99};
  CHECK(normalize(1.03, spec) == 1.0);
  CHECK(normalize(-0.5, spec) == 0.0);
  spec.clamp = false;
  CHECK_THROWS_AS(normalize(1.03, spec), ConfigError);
}

TEST_CASE("is_valid threshold") {
  NormalizationSpec unit{0.0, 1.0, true, 0.99};
  CHECK(is_valid(0.995, unit));
  CHECK(is_valid(1.03, unit));  // clamped to 1.0
  NormalizationSpec mqm_range{-25.0, 0.0, true, 0.99};
  CHECK(is_valid(-0.2, mqm_range));   // 0.992 >= 0.99
  CHECK(!is_valid(-1.0, mqm_range));  // 0.96 < 0.99
}

TEST_CASE("integer metric on [-25,0]: only exact zero is valid") {
  NormalizationSpec spec{-25.0, 0.0, true, 0.99};
  for (int s = -25; s <= 0; ++s) {
    CHECK(is_valid(static_cast<double>(s), spec) == (s == 0));
  }
}

TEST_CASE("detection_report hand-counted fixture") {
  // 2 HQZero both valid, 1 non-HQZero valid, 3 non-HQZero invalid
  auto corpus = detect_corpus({
      {0.0, 0.0},    // tp
      {0.0, -0.1},   // tp (0.996)
      {-3.0, 0.0},   // fp
      {-1.0, -5.0},  // tn
      {-7.0, -9.0},  // tn
      {-2.0, -2.0},  // tn
  });
  auto r = detection_report(corpus, "m", {-25.0, 0.0, true, 0.99});
  CHECK(r.tp == 2);
  CHECK(r.fp == 1);
  CHECK(r.fn == 0);
  CHECK(r.tn == 3);
  CHECK(r.tp + r.fp + r.fn + r.tn == corpus.records().size());
  REQUIRE(r.precision);
  REQUIRE(r.recall);
  REQUIRE(r.f1);
  CHECK(*r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(*r.recall == 1.0);
  CHECK(*r.f1 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(*r.f1 ==
        doctest::Approx(2 * *r.precision * *r.recall / (*r.precision + *r.recall))
            .epsilon(1e-12));
}

TEST_CASE("undefined precision and recall are absent, not zero") {
  // no positive predictions at all
  auto none_valid = detect_corpus({{0.0, -10.0}, {-3.0, -12.0}});
  auto r = detection_report(none_valid, "m", {-25.0, 0.0, true, 0.99});
  CHECK(!r.precision);
  CHECK(!r.f1);
  CHECK(r.recall);  // tp+fn = 1 HQZero record

  // no HQZero records: recall undefined
  auto no_positives = detect_corpus({{-3.0, 0.0}, {-6.0, -12.0}});
  auto r2 = detection_report(no_positives, "m", {-25.0, 0.0, true, 0.99});
  CHECK(!r2.recall);
  CHECK(r2.precision);
}

TEST_CASE("per-system tallies sum to tp and fp") {
  std::vector<std::string> systems{"A", "A", "B", "B", "A", "B"};
  auto corpus = detect_corpus(
      {{0.0, 0.0}, {0.0, -0.1}, {-3.0, 0.0}, {-1.0, -5.0}, {-7.0, -0.05}, {0.0, -9.0}},
      -25.0, 0.0, &systems);
  auto r = detection_report(corpus, "m", {-25.0, 0.0, true, 0.99});
  std::size_t valid_hq = 0, valid_nonhq = 0;
  for (const auto& [name, sys] : r.per_system) {
    valid_hq += sys.valid_on_hqzero;
    valid_nonhq += sys.valid_on_nonhqzero;
  }
  CHECK(valid_hq == r.tp);
  CHECK(valid_nonhq == r.fp);
}

TEST_CASE("raising the threshold never increases tp or fp") {
  auto corpus = detect_corpus({{0.0, 0.0},
                               {0.0, -0.1},
                               {0.0, -0.3},
                               {-3.0, 0.0},
                               {-3.0, -0.2},
                               {-1.0, -5.0},
                               {-7.0, -9.0}});
  std::size_t prev_tp = SIZE_MAX, prev_fp = SIZE_MAX;
  for (double threshold : {0.90, 0.95, 0.99, 0.995, 1.0}) {
    auto r = detection_report(corpus, "m", {-25.0, 0.0, true, threshold});
    CHECK(r.tp <= prev_tp);
    CHECK(r.fp <= prev_fp);
    prev_tp = r.tp;
    prev_fp = r.fp;
  }
}

TEST_CASE("bias_report arithmetic and ordering") {
  std::vector<std::string> systems{"A", "A", "A", "B", "B", "B"};
  auto corpus = detect_corpus(
      {
          {0.0, 0.0},    // A: valid on hqzero
          {0.0, -0.1},   // A: valid on hqzero
          {-6.0, -0.2},  // A: valid on non-hqzero
          {-6.0, -0.1},  // B: valid on non-hqzero
          {-7.0, -0.2},  // B: valid on non-hqzero
          {0.0, -10.0},  // B: invalid
      },
      -25.0, 0.0, &systems);
  auto rows = bias_report(corpus, "m", {-25.0, 0.0, true, 0.99});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].system == "B");  // |0 - 2| = 2 beats |2 - 1| = 1
  CHECK(rows[0].abs_diff == 2);
  CHECK(rows[1].system == "A");
  CHECK(rows[1].valid_on_hqzero == 2);
  CHECK(rows[1].valid_on_nonhqzero == 1);
  CHECK(rows[1].abs_diff == 1);
}

TEST_CASE("system with no valid scores reports zeros") {
  auto corpus = detect_corpus({{0.0, -20.0}, {-3.0, -15.0}});
  auto rows = bias_report(corpus, "m", {-25.0, 0.0, true, 0.99});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].valid_on_hqzero == 0);
  CHECK(rows[0].valid_on_nonhqzero == 0);
  CHECK(rows[0].abs_diff == 0);
}

TEST_CASE("hqzero histogram counts sum to the HQZero record count") {
  auto corpus = detect_corpus(
      {{0.0, 0.0}, {0.0, -5.0}, {0.0, -24.0}, {-3.0, 0.0}, {-8.0, -1.0}});
  auto bins = hqzero_histogram(corpus, "m", {-25.0, 0.0, true, 0.99}, 10);
  std::size_t total = 0;
  for (const auto& b : bins) total += b.count;
  CHECK(total == 3);
  CHECK(bins.back().count == 1);   // normalized 1.0 lands in the last bin
  CHECK(bins.front().count == 1);  // -24 -> 0.04
}
