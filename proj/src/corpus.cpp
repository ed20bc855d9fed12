#include "mteval/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mteval/mqm.hpp"
#include "mteval/reports.hpp"

namespace mteval {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

double parse_double_field(const std::string& text, std::size_t line_no, const char* what) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": non-numeric " + what + " '" +
                     text + "'");
  }
  return value;
}

}  // namespace

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Major: return "major";
    case Severity::Minor: return "minor";
    case Severity::Neutral: return "neutral";
    case Severity::NoError: return "no-error";
  }
  return "?";
}

std::optional<Severity> parse_severity(const std::string& text) {
  std::string s = lowercase(text);
  std::erase_if(s, [](char c) { return c == '-' || c == '_' || c == ' '; });
  if (s == "major") return Severity::Major;
  if (s == "minor") return Severity::Minor;
  if (s == "neutral") return Severity::Neutral;
  if (s == "noerror") return Severity::NoError;
  return std::nullopt;
}

std::string to_string(const SegmentKey& key) {
  return key.language_pair + "/" + key.source_id + "/" + key.system;
}

std::size_t SegmentKeyHash::operator()(const SegmentKey& k) const {
  std::size_t h = std::hash<std::string>{}(k.language_pair);
  h = h * 1000003u ^ std::hash<std::string>{}(k.source_id);
  h = h * 1000003u ^ std::hash<std::string>{}(k.system);
  return h;
}

const char* quality_class_name(QualityClass c) {
  switch (c) {
    case QualityClass::HQZero: return "hq_zero";
    case QualityClass::HQMinor: return "hq_minor";
    case QualityClass::NonHQ: return "non_hq";
  }
  return "?";
}

std::vector<ErrorAnnotation> parse_mqm_tsv(std::istream& in, const MqmColumnMap& columns,
                                           UnknownSeverityPolicy policy) {
  std::vector<ErrorAnnotation> out;
  std::string line;
  std::size_t line_no = 0;
  bool skip_header = columns.has_header;
  const int needed =
      std::max({columns.system, columns.doc, columns.seg_id, columns.rater,
                columns.source_text, columns.target_text, columns.category,
                columns.severity}) +
      1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (static_cast<int>(fields.size()) < std::max(needed, columns.min_columns)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                       std::to_string(std::max(needed, columns.min_columns)) +
                       " columns, got " + std::to_string(fields.size()));
    }
    ErrorAnnotation a;
    a.system = fields[columns.system];
    a.doc = fields[columns.doc];
    const std::string& seg = fields[columns.seg_id];
    auto [ptr, ec] = std::from_chars(seg.data(), seg.data() + seg.size(), a.seg_id);
    if (ec != std::errc{} || ptr != seg.data() + seg.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": bad seg_id '" + seg + "'");
    }
    a.rater = fields[columns.rater];
    a.source_text = fields[columns.source_text];
    a.target_text = fields[columns.target_text];
    a.category = fields[columns.category];
    auto sev = parse_severity(fields[columns.severity]);
    if (!sev) {
      if (policy == UnknownSeverityPolicy::Reject) {
        throw ParseError("line " + std::to_string(line_no) + ": unknown severity '" +
                         fields[columns.severity] + "'");
      }
      sev = Severity::Neutral;
    }
    a.severity = *sev;
    out.push_back(std::move(a));
  }
  return out;
}

void write_mqm_tsv(std::ostream& out, const std::vector<ErrorAnnotation>& annotations) {
  out << "system\tdoc\tdoc_id\tseg_id\trater\tsource\ttarget\tcategory\tseverity\n";
  for (const auto& a : annotations) {
    out << a.system << '\t' << a.doc << '\t' << a.doc << '\t' << a.seg_id << '\t' << a.rater
        << '\t' << a.source_text << '\t' << a.target_text << '\t' << a.category << '\t'
        << severity_name(a.severity) << '\n';
  }
}

MetricScoreTable parse_score_table(std::istream& in, const std::string& metric_name,
                                   const std::string& language_pair, double range_min,
                                   double range_max, ScoreLayout layout,
                                   const std::vector<std::string>* segment_manifest,
                                   const std::string& system) {
  if (!(range_min < range_max)) {
    throw ConfigError("metric " + metric_name + ": declared range min must be < max");
  }
  MetricScoreTable table;
  table.metric_name = metric_name;
  table.range_min = range_min;
  table.range_max = range_max;

  std::string line;
  std::size_t line_no = 0;
  if (layout == ScoreLayout::TsvKeyed) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      if (fields.size() != 3) {
        throw ParseError(metric_name + " line " + std::to_string(line_no) +
                         ": expected 3 columns, got " + std::to_string(fields.size()));
      }
      SegmentKey key{language_pair, fields[1], fields[0]};
      double score = parse_double_field(fields[2], line_no, "score");
      if (!table.scores.emplace(key, score).second) {
        throw ParseError(metric_name + " line " + std::to_string(line_no) +
                         ": duplicate key " + to_string(key));
      }
    }
  } else {
    if (segment_manifest == nullptr || system.empty()) {
      throw ConfigError("metric " + metric_name +
                        ": one_score_per_line layout needs a segment manifest and a system");
    }
    std::vector<double> scores;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      scores.push_back(parse_double_field(line, line_no, "score"));
    }
    if (scores.size() != segment_manifest->size()) {
      throw ParseError(metric_name + ": " + std::to_string(scores.size()) +
                       " scores but manifest lists " +
                       std::to_string(segment_manifest->size()) + " segments");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      SegmentKey key{language_pair, (*segment_manifest)[i], system};
      if (!table.scores.emplace(key, scores[i]).second) {
        throw ParseError(metric_name + ": duplicate key " + to_string(key));
      }
    }
  }
  return table;
}

EvalCorpus::EvalCorpus(std::string language_pair, std::vector<CorpusRecord> records,
                       std::vector<MetricScoreTable> metrics)
    : language_pair_(std::move(language_pair)),
      records_(std::move(records)),
      metrics_(std::move(metrics)) {
  std::sort(records_.begin(), records_.end(), [](const CorpusRecord& a, const CorpusRecord& b) {
    return std::tie(a.key.source_id, a.key.system) < std::tie(b.key.source_id, b.key.system);
  });
  std::set<std::string> systems, sources;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    systems.insert(r.key.system);
    sources.insert(r.key.source_id);
    by_source_[r.key.source_id].push_back(i);
  }
  systems_.assign(systems.begin(), systems.end());
  sources_.assign(sources.begin(), sources.end());
  metric_columns_.resize(metrics_.size());
  for (std::size_t m = 0; m < metrics_.size(); ++m) {
    metric_index_[metrics_[m].metric_name] = m;
    auto& column = metric_columns_[m];
    column.reserve(records_.size());
    for (const auto& r : records_) {
      auto it = metrics_[m].scores.find(r.key);
      if (it == metrics_[m].scores.end()) {
        throw JoinError("metric " + metrics_[m].metric_name + " missing score for " +
                        to_string(r.key));
      }
      column.push_back(it->second);
    }
  }
}

const MetricScoreTable& EvalCorpus::metric(const std::string& name) const {
  auto it = metric_index_.find(name);
  if (it == metric_index_.end()) throw ConfigError("unknown metric '" + name + "'");
  return metrics_[it->second];
}

bool EvalCorpus::has_metric(const std::string& name) const {
  return metric_index_.contains(name);
}

const std::vector<double>& EvalCorpus::metric_column(const std::string& name) const {
  auto it = metric_index_.find(name);
  if (it == metric_index_.end()) throw ConfigError("unknown metric '" + name + "'");
  return metric_columns_[it->second];
}

const std::vector<std::size_t>& EvalCorpus::source_records(const std::string& source_id) const {
  auto it = by_source_.find(source_id);
  if (it == by_source_.end()) throw ConfigError("unknown source '" + source_id + "'");
  return it->second;
}

std::string EvalCorpus::canonical_serialization() const {
  std::ostringstream out;
  out << "lp\t" << language_pair_ << "\tn_systems\t" << n_systems() << "\tm_sources\t"
      << m_sources() << '\n';
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    out << r.key.system << '\t' << r.key.source_id << '\t' << format_double(r.gold_mqm) << '\t'
        << quality_class_name(r.quality_class);
    for (std::size_t m = 0; m < metrics_.size(); ++m) {
      out << '\t' << format_double(metric_columns_[m][i]);
    }
    out << '\n';
  }
  return out.str();
}

EvalCorpus build_corpus(const std::string& language_pair,
                        const std::map<SegmentKey, double>& gold,
                        std::vector<MetricScoreTable> tables, const BuildOptions& options,
                        BuildReport* report, double hq_boundary) {
  if (gold.empty()) throw JoinError("empty join: no gold-scored segments");

  std::vector<CorpusRecord> records;
  std::size_t dropped = 0;
  std::vector<std::string> missing;
  for (const auto& [key, score] : gold) {
    if (key.language_pair != language_pair) {
      throw JoinError("inconsistent language pair: corpus is " + language_pair +
                      " but gold has " + to_string(key));
    }
    if (score > 0) {
      throw JoinError("positive gold MQM score for " + to_string(key));
    }
    bool covered = true;
    for (const auto& t : tables) {
      if (!t.scores.contains(key)) {
        covered = false;
        if (options.strict) missing.push_back(t.metric_name + " -> " + to_string(key));
      }
    }
    if (!covered && !options.strict) {
      ++dropped;
      continue;
    }
    CorpusRecord r;
    r.key = key;
    r.gold_mqm = score;
    r.quality_class = classify(score, hq_boundary);
    records.push_back(std::move(r));
  }
  if (options.strict && !missing.empty()) {
    std::string msg = "strict join: missing metric scores:";
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += "\n  " + missing[i];
    if (missing.size() > 10) msg += "\n  ... (" + std::to_string(missing.size()) + " total)";
    throw JoinError(msg);
  }
  if (records.empty()) throw JoinError("empty join: every record lacked metric coverage");
  if (report != nullptr) report->records_dropped = dropped;

  if (options.strict) {
    std::set<std::string> systems, sources;
    for (const auto& r : records) {
      systems.insert(r.key.system);
      sources.insert(r.key.source_id);
    }
    if (records.size() != systems.size() * sources.size()) {
      throw JoinError("strict join: incomplete grid, " + std::to_string(records.size()) +
                      " records for " + std::to_string(systems.size()) + " systems x " +
                      std::to_string(sources.size()) + " sources");
    }
  }

  // In lenient mode dropped records may leave stale keys in the tables;
  // the EvalCorpus constructor only reads keys present in records.
  return EvalCorpus(language_pair, std::move(records), std::move(tables));
}

}  // namespace mteval
