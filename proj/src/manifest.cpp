#include "mteval/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace mteval {

namespace {

ScoreLayout parse_layout(const std::string& s) {
  if (s == "tsv_keyed") return ScoreLayout::TsvKeyed;
  if (s == "one_score_per_line") return ScoreLayout::OneScorePerLine;
  throw ConfigError("unknown score layout '" + s + "'");
}

RaterAggregation parse_aggregation(const std::string& s) {
  if (s == "mean") return RaterAggregation::Mean;
  if (s == "min") return RaterAggregation::Min;
  if (s == "max") return RaterAggregation::Max;
  throw ConfigError("unknown rater aggregation '" + s + "'");
}

Grouping parse_grouping(const std::string& s) {
  if (s == "no_grouping") return Grouping::NoGrouping;
  if (s == "group_by_src") return Grouping::GroupBySrc;
  throw ConfigError("unknown grouping '" + s + "'");
}

Subset parse_subset(const std::string& s) {
  if (s == "all") return Subset::ALL;
  if (s == "hq") return Subset::HQ;
  throw ConfigError("unknown subset '" + s + "'");
}

CorrType parse_corr_type(const std::string& s) {
  if (s == "spearman") return CorrType::Spearman;
  if (s == "pearson") return CorrType::Pearson;
  throw ConfigError("unknown correlation type '" + s + "'");
}

AnalysisSpec parse_analysis(const nlohmann::json& j) {
  AnalysisSpec spec;
  spec.grouping = parse_grouping(j.value("grouping", "no_grouping"));
  spec.subset = parse_subset(j.value("subset", "all"));
  spec.corr_type = parse_corr_type(j.value("corr_type", "spearman"));
  if (j.contains("subsample") && !j["subsample"].is_null()) {
    const auto& s = j["subsample"];
    SubsampleSpec ss;
    if (!s.contains("target_sources")) {
      throw ConfigError("subsample block needs target_sources");
    }
    ss.target_sources = s["target_sources"].get<std::size_t>();
    ss.repeats = s.value("repeats", std::size_t{10});
    ss.seed = s.value("seed", std::uint64_t{0});
    if (ss.repeats < 1) throw ConfigError("subsample repeats must be >= 1");
    spec.subsample = ss;
  }
  return spec;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

}  // namespace

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();

  RunManifest m;
  if (!j.contains("language_pair")) throw ConfigError("manifest needs language_pair");
  m.language_pair = j["language_pair"].get<std::string>();
  if (j.contains("mqm_tsv")) m.mqm_tsv = resolve(base, j["mqm_tsv"].get<std::string>());
  if (j.contains("gold_tsv")) m.gold_tsv = resolve(base, j["gold_tsv"].get<std::string>());
  if (j.contains("mqm_columns")) {
    const auto& c = j["mqm_columns"];
    m.mqm_columns.system = c.value("system", m.mqm_columns.system);
    m.mqm_columns.doc = c.value("doc", m.mqm_columns.doc);
    m.mqm_columns.seg_id = c.value("seg_id", m.mqm_columns.seg_id);
    m.mqm_columns.rater = c.value("rater", m.mqm_columns.rater);
    m.mqm_columns.source_text = c.value("source", m.mqm_columns.source_text);
    m.mqm_columns.target_text = c.value("target", m.mqm_columns.target_text);
    m.mqm_columns.category = c.value("category", m.mqm_columns.category);
    m.mqm_columns.severity = c.value("severity", m.mqm_columns.severity);
    m.mqm_columns.min_columns = c.value("min_columns", m.mqm_columns.min_columns);
    m.mqm_columns.has_header = c.value("has_header", m.mqm_columns.has_header);
  }
  if (j.contains("weights")) {
    const auto& w = j["weights"];
    m.weights.minor = w.value("minor", 1.0);
    m.weights.major = w.value("major", 5.0);
    m.weights.neutral = w.value("neutral", 0.0);
    if (w.contains("cap") && !w["cap"].is_null()) m.weights.cap = w["cap"].get<double>();
    if (m.weights.minor < 0 || m.weights.major < 0 || m.weights.neutral < 0 ||
        (m.weights.cap && *m.weights.cap < 0)) {
      throw ConfigError("severity weights must be nonnegative");
    }
  }
  m.aggregation = parse_aggregation(j.value("aggregation", "mean"));
  m.hq_boundary = j.value("hq_boundary", -5.0);

  for (const auto& e : j.value("metrics", nlohmann::json::array())) {
    MetricManifestEntry entry;
    entry.name = e.at("name").get<std::string>();
    entry.reference_based = e.value("reference_based", true);
    if (!e.contains("range") || !e["range"].is_array() || e["range"].size() != 2) {
      throw ConfigError("metric " + entry.name + ": range must be [min, max]");
    }
    entry.range_min = e["range"][0].get<double>();
    entry.range_max = e["range"][1].get<double>();
    if (!(entry.range_min < entry.range_max)) {
      throw ConfigError("metric " + entry.name + ": range min must be < max");
    }
    entry.path = resolve(base, e.at("path").get<std::string>());
    entry.layout = parse_layout(e.value("layout", "tsv_keyed"));
    if (e.contains("segment_manifest")) {
      entry.segment_manifest = resolve(base, e["segment_manifest"].get<std::string>());
    }
    if (e.contains("system")) entry.system = e["system"].get<std::string>();
    m.metrics.push_back(std::move(entry));
  }

  for (const auto& a : j.value("analyses", nlohmann::json::array())) {
    m.analyses.push_back(parse_analysis(a));
  }

  if (j.contains("detection")) {
    const auto& d = j["detection"];
    m.detection.threshold = d.value("threshold", 0.99);
    m.detection.clamp = d.value("clamp", true);
    if (!(m.detection.threshold > 0.0 && m.detection.threshold <= 1.0)) {
      throw ConfigError("detection threshold must be in (0, 1]");
    }
  }
  m.strict = j.value("strict", true);
  if (j.contains("out_dir")) m.out_dir = resolve(base, j["out_dir"].get<std::string>());
  if (j.contains("formats")) {
    m.formats.clear();
    for (const auto& f : j["formats"]) {
      std::string fmt = f.get<std::string>();
      if (fmt != "csv" && fmt != "json" && fmt != "markdown") {
        throw ConfigError("unknown output format '" + fmt + "'");
      }
      m.formats.insert(fmt);
    }
  }
  return m;
}

EvalCorpus load_corpus(const RunManifest& manifest, BuildReport* report) {
  std::map<SegmentKey, double> gold;
  if (manifest.gold_tsv) {
    std::ifstream in(*manifest.gold_tsv);
    if (!in) throw ConfigError("cannot open gold TSV " + manifest.gold_tsv->string());
    gold = parse_gold_tsv(in, manifest.language_pair);
  } else if (manifest.mqm_tsv) {
    std::ifstream in(*manifest.mqm_tsv);
    if (!in) throw ConfigError("cannot open MQM TSV " + manifest.mqm_tsv->string());
    auto annotations = parse_mqm_tsv(in, manifest.mqm_columns);
    auto computed = compute_gold(annotations, manifest.language_pair, manifest.weights,
                                 manifest.aggregation);
    for (const auto& [key, g] : computed) gold.emplace(key, g.score);
  } else {
    throw ConfigError("manifest needs mqm_tsv or gold_tsv");
  }

  std::vector<MetricScoreTable> tables;
  for (const auto& e : manifest.metrics) {
    std::ifstream in(e.path);
    if (!in) throw ConfigError("cannot open score table " + e.path.string());
    std::vector<std::string> segment_manifest;
    if (e.layout == ScoreLayout::OneScorePerLine) {
      if (!e.segment_manifest || !e.system) {
        throw ConfigError("metric " + e.name +
                          ": one_score_per_line needs segment_manifest and system");
      }
      std::ifstream mf(*e.segment_manifest);
      if (!mf) {
        throw ConfigError("cannot open segment manifest " + e.segment_manifest->string());
      }
      std::string line;
      while (std::getline(mf, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) segment_manifest.push_back(line);
      }
    }
    auto table = parse_score_table(in, e.name, manifest.language_pair, e.range_min,
                                   e.range_max, e.layout,
                                   e.layout == ScoreLayout::OneScorePerLine ? &segment_manifest
                                                                            : nullptr,
                                   e.system.value_or(""));
    table.is_reference_based = e.reference_based;
    tables.push_back(std::move(table));
  }

  BuildOptions options;
  options.strict = manifest.strict;
  return build_corpus(manifest.language_pair, gold, std::move(tables), options, report,
                      manifest.hq_boundary);
}

NormalizationSpec normalization_spec(const RunManifest& manifest,
                                     const MetricScoreTable& metric) {
  NormalizationSpec spec;
  spec.range_min = metric.range_min;
  spec.range_max = metric.range_max;
  spec.clamp = manifest.detection.clamp;
  spec.threshold = manifest.detection.threshold;
  return spec;
}

}  // namespace mteval
