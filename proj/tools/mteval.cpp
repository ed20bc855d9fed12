#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mteval/detect.hpp"
#include "mteval/manifest.hpp"
#include "mteval/mqm.hpp"
#include "mteval/reports.hpp"
#include "mteval/stats.hpp"
#include "mteval/synth.hpp"

namespace fs = std::filesystem;
using namespace mteval;

namespace {

// exit codes: 0 ok, 2 parse error, 3 join error, 4 configuration error
constexpr int kParseExit = 2;
constexpr int kJoinExit = 3;
constexpr int kConfigExit = 4;

struct CommonOptions {
  std::string manifest_path;
  std::string out_dir;
  std::string formats;
  std::int64_t seed = -1;
  bool strict = false;
  bool lenient = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool manifest_required = true) {
  auto* m = cmd->add_option("--manifest", opt.manifest_path, "run manifest (JSON)");
  if (manifest_required) m->required();
  cmd->add_option("--out", opt.out_dir, "output directory (overrides manifest)");
  cmd->add_option("--format", opt.formats, "comma-separated: csv,json,markdown");
  cmd->add_option("--seed", opt.seed, "override subsample seeds");
  cmd->add_flag("--strict", opt.strict, "strict join (reject incomplete coverage)");
  cmd->add_flag("--lenient", opt.lenient, "lenient join (drop uncovered records)");
}

RunManifest load_with_overrides(const CommonOptions& opt) {
  RunManifest m = load_manifest(opt.manifest_path);
  if (!opt.out_dir.empty()) m.out_dir = opt.out_dir;
  if (opt.strict) m.strict = true;
  if (opt.lenient) m.strict = false;
  if (!opt.formats.empty()) {
    m.formats.clear();
    std::stringstream ss(opt.formats);
    std::string fmt;
    while (std::getline(ss, fmt, ',')) {
      if (fmt != "csv" && fmt != "json" && fmt != "markdown") {
        throw ConfigError("unknown output format '" + fmt + "'");
      }
      m.formats.insert(fmt);
    }
  }
  if (opt.seed >= 0) {
    for (auto& a : m.analyses) {
      if (a.subsample) a.subsample->seed = static_cast<std::uint64_t>(opt.seed);
    }
  }
  return m;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  return out;
}

int cmd_distribution(const CommonOptions& opt) {
  RunManifest m = load_with_overrides(opt);
  BuildReport build_report;
  EvalCorpus corpus = load_corpus(m, &build_report);
  if (build_report.records_dropped > 0) {
    std::cerr << "warning: dropped " << build_report.records_dropped
              << " records without full metric coverage\n";
  }
  std::vector<DistributionRow> rows{{m.language_pair, distribution(corpus)}};
  if (m.formats.contains("csv")) {
    auto out = open_output(m.out_dir, "distribution.csv");
    write_distribution_csv(out, rows);
  }
  if (m.formats.contains("markdown")) {
    auto out = open_output(m.out_dir, "distribution.md");
    write_distribution_markdown(out, rows);
  }
  if (m.formats.contains("json")) {
    auto out = open_output(m.out_dir, "distribution.json");
    const auto& d = rows[0].dist;
    nlohmann::json j{{"language_pair", m.language_pair},
                     {"n", d.n},
                     {"pct_zero", d.pct_zero},
                     {"pct_hq_minor", d.pct_hq_minor},
                     {"pct_nonhq", d.pct_nonhq}};
    out << j.dump(2) << '\n';
  }
  {
    auto out = open_output(m.out_dir, "gold.tsv");
    write_gold_tsv(out, corpus);
  }
  std::cout << m.language_pair << ": n=" << rows[0].dist.n << " zero=" << rows[0].dist.pct_zero
            << "% hq_minor=" << rows[0].dist.pct_hq_minor
            << "% non_hq=" << rows[0].dist.pct_nonhq << "%\n";
  return 0;
}

int cmd_correlate(const CommonOptions& opt) {
  RunManifest m = load_with_overrides(opt);
  if (m.analyses.empty()) throw ConfigError("manifest lists no analyses");
  EvalCorpus corpus = load_corpus(m);
  std::vector<CorrelationResult> results;
  bool had_undefined = false;
  for (const auto& metric : m.metrics) {
    for (const auto& spec : m.analyses) {
      try {
        results.push_back(run_analysis(corpus, metric.name, spec));
      } catch (const UndefinedCorrelation& e) {
        std::cerr << "n/a: " << metric.name << " " << grouping_name(spec.grouping) << " "
                  << subset_name(spec.subset) << ": " << e.what() << '\n';
        had_undefined = true;
        CorrelationResult r;
        r.metric_name = metric.name;
        r.spec = spec;
        r.value = std::numeric_limits<double>::quiet_NaN();
        r.n_groups_used = 0;
        r.n_groups_excluded = e.n_groups_excluded;
        results.push_back(r);
      }
    }
  }
  if (m.formats.contains("csv")) {
    auto out = open_output(m.out_dir, "correlations.csv");
    write_correlation_csv(out, results);
  }
  if (m.formats.contains("json")) {
    auto out = open_output(m.out_dir, "correlations.json");
    write_correlation_json(out, results);
  }
  if (m.formats.contains("markdown")) {
    auto out = open_output(m.out_dir, "correlations.md");
    write_correlation_markdown(out, results);
  }
  std::cout << results.size() << " correlation cells written to " << m.out_dir.string()
            << (had_undefined ? " (some n/a)" : "") << '\n';
  return 0;
}

int cmd_detect(const CommonOptions& opt) {
  RunManifest m = load_with_overrides(opt);
  EvalCorpus corpus = load_corpus(m);
  std::vector<DetectionReport> reports;
  for (const auto& metric : m.metrics) {
    auto spec = normalization_spec(m, corpus.metric(metric.name));
    auto report = detection_report(corpus, metric.name, spec);
    if (m.formats.contains("json")) {
      auto out = open_output(m.out_dir, "detect_" + metric.name + ".json");
      write_detection_json(out, report);
    }
    {
      auto out = open_output(m.out_dir, "hist_" + metric.name + ".csv");
      write_histogram_csv(out, hqzero_histogram(corpus, metric.name, spec));
    }
    reports.push_back(std::move(report));
  }
  if (m.formats.contains("markdown")) {
    auto out = open_output(m.out_dir, "detection.md");
    write_detection_markdown(out, reports);
  }
  for (const auto& r : reports) {
    std::cout << r.metric_name << ": P="
              << (r.precision ? std::to_string(round_percent(*r.precision)) : "n/a")
              << " R=" << (r.recall ? std::to_string(round_percent(*r.recall)) : "n/a")
              << " F1=" << (r.f1 ? std::to_string(round_percent(*r.f1)) : "n/a") << '\n';
  }
  return 0;
}

int cmd_bias(const CommonOptions& opt) {
  RunManifest m = load_with_overrides(opt);
  EvalCorpus corpus = load_corpus(m);
  for (const auto& metric : m.metrics) {
    auto spec = normalization_spec(m, corpus.metric(metric.name));
    auto rows = bias_report(corpus, metric.name, spec);
    auto out = open_output(m.out_dir, "bias_" + metric.name + ".csv");
    write_bias_csv(out, rows);
    if (!rows.empty()) {
      std::cout << metric.name << ": max abs_diff " << rows.front().abs_diff << " ("
                << rows.front().system << ")\n";
    }
  }
  return 0;
}

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open synth config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  SynthConfig cfg;
  cfg.n_systems = j.value("n_systems", std::size_t{2});
  cfg.m_sources = j.value("m_sources", std::size_t{10});
  if (j.contains("class_mix")) {
    const auto& p = j["class_mix"];
    if (!p.is_array() || p.size() != 3) {
      throw ConfigError("class_mix must be [p_zero, p_minor, p_major]");
    }
    cfg.p_zero = p[0].get<double>();
    cfg.p_minor = p[1].get<double>();
    cfg.p_major = p[2].get<double>();
  }
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.language_pair = j.value("language_pair", std::string("xx-yy"));
  for (const auto& e : j.value("metrics", nlohmann::json::array())) {
    MetricModel model;
    model.name = e.at("name").get<std::string>();
    model.noise_sd = e.value("noise_sd", 0.0);
    if (e.contains("bias_system")) model.bias_system = e["bias_system"].get<std::string>();
    model.bias_magnitude = e.value("bias_magnitude", 0.0);
    if (e.contains("range")) {
      model.range_min = e["range"][0].get<double>();
      model.range_max = e["range"][1].get<double>();
    }
    cfg.metric_models.push_back(std::move(model));
  }
  if (cfg.metric_models.empty()) {
    cfg.metric_models.push_back({"synthetic", 0.0, std::nullopt, 0.0, -25.0, 0.0});
  }
  return cfg;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir,
              std::int64_t seed_override) {
  SynthConfig cfg = load_synth_config(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  EvalCorpus corpus = generate_synthetic_corpus(cfg);
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  {
    auto out = open_output(dir, "gold.tsv");
    write_gold_tsv(out, corpus);
  }
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& table : corpus.metrics()) {
    auto out = open_output(dir, table.metric_name + ".tsv");
    const auto& column = corpus.metric_column(table.metric_name);
    const auto& records = corpus.records();
    for (std::size_t i = 0; i < records.size(); ++i) {
      out << records[i].key.system << '\t' << records[i].key.source_id << '\t'
          << format_double(column[i]) << '\n';
    }
    metrics.push_back({{"name", table.metric_name},
                       {"reference_based", table.is_reference_based},
                       {"range", {table.range_min, table.range_max}},
                       {"path", table.metric_name + ".tsv"},
                       {"layout", "tsv_keyed"}});
  }
  nlohmann::json manifest{{"language_pair", cfg.language_pair},
                          {"gold_tsv", "gold.tsv"},
                          {"metrics", metrics},
                          {"strict", true},
                          {"out_dir", "."},
                          {"formats", {"csv", "json", "markdown"}}};
  {
    auto out = open_output(dir, "manifest.json");
    out << manifest.dump(2) << '\n';
  }
  std::cout << "generated " << corpus.records().size() << " records ("
            << corpus.n_systems() << " systems x " << corpus.m_sources() << " sources) in "
            << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MT metric meta-evaluation against MQM gold annotations"};
  app.require_subcommand(1);

  CommonOptions dist_opt, corr_opt, det_opt, bias_opt;
  auto* dist = app.add_subcommand("distribution", "gold MQM class distribution");
  add_common(dist, dist_opt);
  auto* corr = app.add_subcommand("correlate", "rank correlations per analysis spec");
  add_common(corr, corr_opt);
  auto* det = app.add_subcommand("detect", "HQ-Zero detection P/R/F1 per metric");
  add_common(det, det_opt);
  auto* bias = app.add_subcommand("bias", "per-system valid-score bias tables");
  add_common(bias, bias_opt);

  std::string synth_config, synth_out;
  std::int64_t synth_seed = -1;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--config", synth_config, "synth config (JSON)")->required();
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--seed", synth_seed, "override config seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dist->parsed()) return cmd_distribution(dist_opt);
    if (corr->parsed()) return cmd_correlate(corr_opt);
    if (det->parsed()) return cmd_detect(det_opt);
    if (bias->parsed()) return cmd_bias(bias_opt);
    if (synth->parsed()) return cmd_synth(synth_config, synth_out, synth_seed);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParseExit;
  } catch (const JoinError& e) {
    std::cerr << "join error: " << e.what() << '\n';
    return kJoinExit;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
