#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include "mteval/manifest.hpp"
#include "mteval/reports.hpp"

using namespace mteval;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mteval_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(path / name);
    out << content;
  }
};

}  // namespace

TEST_CASE("load_manifest parses a full run manifest") {
  TempDir dir;
  dir.write("manifest.json", R"({
    "language_pair": "en-de",
    "gold_tsv": "gold.tsv",
    "weights": {"minor": 1, "major": 5, "neutral": 0},
    "aggregation": "mean",
    "metrics": [
      {"name": "chrF", "reference_based": true, "range": [0, 1], "path": "chrf.tsv"},
      {"name": "gemba", "reference_based": false, "range": [-25, 0], "path": "gemba.tsv"}
    ],
    "analyses": [
      {"grouping": "no_grouping", "subset": "all", "corr_type": "spearman"},
      {"grouping": "group_by_src", "subset": "hq", "corr_type": "spearman",
       "subsample": {"target_sources": 2, "repeats": 5, "seed": 7}}
    ],
    "detection": {"threshold": 0.99, "clamp": true},
    "strict": true,
    "formats": ["csv", "markdown"]
  })");
  auto m = load_manifest(dir.path / "manifest.json");
  CHECK(m.language_pair == "en-de");
  REQUIRE(m.metrics.size() == 2);
  CHECK(m.metrics[1].range_min == -25.0);
  CHECK(!m.metrics[1].reference_based);
  REQUIRE(m.analyses.size() == 2);
  CHECK(m.analyses[1].subsample->repeats == 5);
  CHECK(m.analyses[1].subsample->seed == 7);
  CHECK(m.detection.threshold == 0.99);
  CHECK(m.formats == std::set<std::string>{"csv", "markdown"});
}

TEST_CASE("load_manifest rejects bad fields") {
  TempDir dir;
  dir.write("no_lp.json", R"({"metrics": []})");
  CHECK_THROWS_AS(load_manifest(dir.path / "no_lp.json"), ConfigError);
  dir.write("bad_range.json",
            R"({"language_pair": "en-de",
                "metrics": [{"name": "m", "range": [1, 0], "path": "x.tsv"}]})");
  CHECK_THROWS_AS(load_manifest(dir.path / "bad_range.json"), ConfigError);
  dir.write("bad_fmt.json", R"({"language_pair": "en-de", "formats": ["xml"]})");
  CHECK_THROWS_AS(load_manifest(dir.path / "bad_fmt.json"), ConfigError);
  CHECK_THROWS_AS(load_manifest(dir.path / "missing.json"), ConfigError);
}

TEST_CASE("load_corpus end to end from MQM annotations and score tables") {
  TempDir dir;
  dir.write("mqm.tsv",
            "system\tdoc\tdoc_id\tseg_id\trater\tsource\ttarget\tcategory\tseverity\n"
            "sysA\td\td\t1\tr1\ts\tt\tc\tmajor\n"
            "sysA\td\td\t2\tr1\ts\tt\tc\tno-error\n"
            "sysB\td\td\t1\tr1\ts\tt\tc\tminor\n"
            "sysB\td\td\t2\tr1\ts\tt\tc\tminor\n");
  dir.write("scores.tsv",
            "sysA\td:1\t-6\nsysA\td:2\t0\nsysB\td:1\t-1\nsysB\td:2\t-0.5\n");
  dir.write("manifest.json", R"({
    "language_pair": "en-de",
    "mqm_tsv": "mqm.tsv",
    "metrics": [{"name": "m", "range": [-25, 0], "path": "scores.tsv"}]
  })");
  auto manifest = load_manifest(dir.path / "manifest.json");
  auto corpus = load_corpus(manifest);
  CHECK(corpus.records().size() == 4);
  CHECK(corpus.n_systems() == 2);
  CHECK(corpus.m_sources() == 2);
  // sysA d:1 got one major -> -5 -> NonHQ
  for (const auto& r : corpus.records()) {
    if (r.key.system == "sysA" && r.key.source_id == "d:1") {
      CHECK(r.gold_mqm == -5.0);
      CHECK(r.quality_class == QualityClass::NonHQ);
    }
  }
}

TEST_CASE("correlation CSV layout") {
  CorrelationResult r;
  r.metric_name = "chrF";
  r.spec = {Grouping::NoGrouping, Subset::ALL, CorrType::Spearman, std::nullopt};
  r.value = 0.262;
  r.n_items = 100;
  std::ostringstream out;
  write_correlation_csv(out, {r});
  CHECK(out.str() ==
        "metric,grouping,subset,corr_type,value,std,n_items,n_groups_used,n_groups_excluded\n"
        "chrF,no_grouping,all,spearman,0.262,,100,1,0\n");
}

TEST_CASE("markdown table has one column per spec") {
  CorrelationResult a, b;
  a.metric_name = b.metric_name = "m";
  a.spec = {Grouping::NoGrouping, Subset::ALL, CorrType::Spearman, std::nullopt};
  a.value = 0.5;
  b.spec = {Grouping::GroupBySrc, Subset::HQ, CorrType::Spearman, std::nullopt};
  b.value = 0.25;
  b.n_groups_excluded = 3;
  std::ostringstream out;
  write_correlation_markdown(out, {a, b});
  auto text = out.str();
  CHECK(text.find("no_grouping all") != std::string::npos);
  CHECK(text.find("group_by_src hq") != std::string::npos);
  CHECK(text.find("excl 3") != std::string::npos);
}

TEST_CASE("round_percent rounds half away from zero") {
  CHECK(round_percent(0.515625) == 52);   // 51.5625 rounds up
  CHECK(round_percent(-0.515625) == -52); // away from zero
  CHECK(round_percent(0.6875) == 69);     // 68.75 -> 69
  CHECK(round_percent(0.0) == 0);
  CHECK(round_percent(1.0) == 100);
}

TEST_CASE("format_double round-trips values") {
  for (double v : {0.0, -5.0, 0.9931, -0.123456789012345, 1e-17}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
