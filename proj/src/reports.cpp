#include "mteval/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mteval {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

long round_percent(double fraction) {
  const double pct = fraction * 100.0;
  return static_cast<long>(pct >= 0 ? std::floor(pct + 0.5) : std::ceil(pct - 0.5));
}

namespace {

std::string spec_label(const AnalysisSpec& spec) {
  std::string label = std::string(grouping_name(spec.grouping)) + " " +
                      subset_name(spec.subset);
  if (spec.subsample) label += "†";
  return label;
}

std::string value_cell(const CorrelationResult& r) {
  std::ostringstream cell;
  cell.precision(3);
  cell << std::fixed << r.value;
  if (r.std_dev) cell << " ± " << std::fixed << *r.std_dev;
  if (r.n_groups_excluded > 0) cell << " (excl " << r.n_groups_excluded << ")";
  return cell.str();
}

nlohmann::json to_json(const CorrelationResult& r) {
  nlohmann::json j{
      {"metric", r.metric_name},
      {"grouping", grouping_name(r.spec.grouping)},
      {"subset", subset_name(r.spec.subset)},
      {"corr_type", corr_type_name(r.spec.corr_type)},
      {"value", r.value},
      {"n_items", r.n_items},
      {"n_groups_used", r.n_groups_used},
      {"n_groups_excluded", r.n_groups_excluded},
  };
  if (r.std_dev) j["std"] = *r.std_dev;
  if (r.spec.subsample) {
    j["subsample"] = {{"target_sources", r.spec.subsample->target_sources},
                      {"repeats", r.spec.subsample->repeats},
                      {"seed", r.spec.subsample->seed}};
  }
  return j;
}

}  // namespace

void write_correlation_csv(std::ostream& out, const std::vector<CorrelationResult>& results) {
  out << "metric,grouping,subset,corr_type,value,std,n_items,n_groups_used,n_groups_excluded\n";
  for (const auto& r : results) {
    out << r.metric_name << ',' << grouping_name(r.spec.grouping) << ','
        << subset_name(r.spec.subset) << ',' << corr_type_name(r.spec.corr_type) << ','
        << format_double(r.value) << ',' << (r.std_dev ? format_double(*r.std_dev) : "") << ','
        << r.n_items << ',' << r.n_groups_used << ',' << r.n_groups_excluded << '\n';
  }
}

void write_correlation_json(std::ostream& out, const std::vector<CorrelationResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

void write_correlation_markdown(std::ostream& out,
                                const std::vector<CorrelationResult>& results) {
  // columns ordered as first encountered, rows per metric
  std::vector<std::string> columns;
  std::vector<std::string> metrics;
  std::map<std::pair<std::string, std::string>, std::string> cells;
  for (const auto& r : results) {
    const std::string col = spec_label(r.spec);
    if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
    if (std::find(metrics.begin(), metrics.end(), r.metric_name) == metrics.end()) {
      metrics.push_back(r.metric_name);
    }
    cells[{r.metric_name, col}] = value_cell(r);
  }
  out << "| metric |";
  for (const auto& c : columns) out << ' ' << c << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& m : metrics) {
    out << "| " << m << " |";
    for (const auto& c : columns) {
      auto it = cells.find({m, c});
      out << ' ' << (it == cells.end() ? std::string("n/a") : it->second) << " |";
    }
    out << '\n';
  }
}

void write_detection_json(std::ostream& out, const DetectionReport& report) {
  nlohmann::json j{
      {"metric", report.metric_name},
      {"tp", report.tp},
      {"fp", report.fp},
      {"fn", report.fn},
      {"tn", report.tn},
      {"clamped_scores", report.clamped_scores},
  };
  j["precision"] = report.precision ? nlohmann::json(*report.precision) : nlohmann::json();
  j["recall"] = report.recall ? nlohmann::json(*report.recall) : nlohmann::json();
  j["f1"] = report.f1 ? nlohmann::json(*report.f1) : nlohmann::json();
  nlohmann::json per_system = nlohmann::json::object();
  for (const auto& [name, sys] : report.per_system) {
    per_system[name] = {{"valid_on_hqzero", sys.valid_on_hqzero},
                        {"valid_on_nonhqzero", sys.valid_on_nonhqzero},
                        {"abs_diff", sys.abs_diff}};
  }
  j["per_system"] = per_system;
  out << j.dump(2) << '\n';
}

void write_detection_markdown(std::ostream& out,
                              const std::vector<DetectionReport>& reports) {
  out << "| metric | P | R | F1 |\n|---|---|---|---|\n";
  for (const auto& r : reports) {
    auto cell = [](const std::optional<double>& v) {
      return v ? std::to_string(round_percent(*v)) : std::string("n/a");
    };
    out << "| " << r.metric_name << " | " << cell(r.precision) << " | " << cell(r.recall)
        << " | " << cell(r.f1) << " |\n";
  }
}

void write_bias_csv(std::ostream& out, const std::vector<BiasRow>& rows) {
  out << "system,valid_hqzero,valid_nonhqzero,abs_diff\n";
  for (const auto& r : rows) {
    out << r.system << ',' << r.valid_on_hqzero << ',' << r.valid_on_nonhqzero << ','
        << r.abs_diff << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "bin_lo,bin_hi,count\n";
  for (const auto& b : bins) {
    out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << '\n';
  }
}

void write_distribution_csv(std::ostream& out, const std::vector<DistributionRow>& rows) {
  out << "language_pair,n,pct_zero,pct_hq_minor,pct_nonhq\n";
  for (const auto& r : rows) {
    out << r.language_pair << ',' << r.dist.n << ',' << format_double(r.dist.pct_zero) << ','
        << format_double(r.dist.pct_hq_minor) << ',' << format_double(r.dist.pct_nonhq)
        << '\n';
  }
}

void write_distribution_markdown(std::ostream& out,
                                 const std::vector<DistributionRow>& rows) {
  out << "| language pair | N | MQM = 0 | -5 < MQM < 0 | MQM <= -5 |\n"
      << "|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << r.language_pair << " | " << r.dist.n << " | "
        << round_percent(r.dist.pct_zero / 100.0) << "% | "
        << round_percent(r.dist.pct_hq_minor / 100.0) << "% | "
        << round_percent(r.dist.pct_nonhq / 100.0) << "% |\n";
  }
}

}  // namespace mteval
