#include "mteval/mqm.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>

#include "mteval/reports.hpp"

namespace mteval {

double score_rater(std::span<const ErrorAnnotation> errors, const SeverityWeights& weights) {
  double penalty = 0.0;
  for (const auto& e : errors) {
    switch (e.severity) {
      case Severity::Major: penalty += weights.major; break;
      case Severity::Minor: penalty += weights.minor; break;
      case Severity::Neutral:
      case Severity::NoError: penalty += weights.neutral; break;
    }
  }
  if (weights.cap) penalty = std::min(penalty, *weights.cap);
  return -penalty;
}

double gold_segment_score(std::span<const double> per_rater, RaterAggregation aggregation) {
  if (per_rater.empty()) throw ConfigError("gold_segment_score: no rater scores");
  switch (aggregation) {
    case RaterAggregation::Mean:
      return std::accumulate(per_rater.begin(), per_rater.end(), 0.0) /
             static_cast<double>(per_rater.size());
    case RaterAggregation::Min:
      return *std::min_element(per_rater.begin(), per_rater.end());
    case RaterAggregation::Max:
      return *std::max_element(per_rater.begin(), per_rater.end());
  }
  throw ConfigError("gold_segment_score: bad aggregation");
}

QualityClass classify(double score, double hq_boundary) {
  if (score > 0) throw ConfigError("classify: positive MQM score " + std::to_string(score));
  if (score == 0.0) return QualityClass::HQZero;
  if (score <= hq_boundary) return QualityClass::NonHQ;
  return QualityClass::HQMinor;
}

std::map<SegmentKey, MqmGold> compute_gold(const std::vector<ErrorAnnotation>& annotations,
                                           const std::string& language_pair,
                                           const SeverityWeights& weights,
                                           RaterAggregation aggregation) {
  // (key, rater) -> error list
  std::map<std::pair<SegmentKey, std::string>, std::vector<ErrorAnnotation>> by_rater;
  for (const auto& a : annotations) {
    SegmentKey key{language_pair, a.doc + ":" + std::to_string(a.seg_id), a.system};
    by_rater[{std::move(key), a.rater}].push_back(a);
  }
  std::map<SegmentKey, MqmGold> gold;
  for (const auto& [kr, errors] : by_rater) {
    auto& g = gold[kr.first];
    g.key = kr.first;
    g.rater_scores.push_back(score_rater(errors, weights));
  }
  for (auto& [key, g] : gold) {
    g.score = gold_segment_score(g.rater_scores, aggregation);
  }
  return gold;
}

Distribution distribution(const EvalCorpus& corpus) {
  Distribution d;
  d.n = corpus.records().size();
  if (d.n == 0) return d;
  std::size_t zero = 0, minor = 0, nonhq = 0;
  for (const auto& r : corpus.records()) {
    switch (r.quality_class) {
      case QualityClass::HQZero: ++zero; break;
      case QualityClass::HQMinor: ++minor; break;
      case QualityClass::NonHQ: ++nonhq; break;
    }
  }
  const double n = static_cast<double>(d.n);
  d.pct_zero = 100.0 * static_cast<double>(zero) / n;
  d.pct_hq_minor = 100.0 * static_cast<double>(minor) / n;
  d.pct_nonhq = 100.0 * static_cast<double>(nonhq) / n;
  return d;
}

void write_gold_tsv(std::ostream& out, const EvalCorpus& corpus) {
  for (const auto& r : corpus.records()) {
    out << r.key.system << '\t' << r.key.source_id << '\t' << format_double(r.gold_mqm)
        << '\t' << quality_class_name(r.quality_class) << '\n';
  }
}

std::map<SegmentKey, double> parse_gold_tsv(std::istream& in,
                                            const std::string& language_pair) {
  std::map<SegmentKey, double> gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto first_tab = line.find('\t');
    auto second_tab = line.find('\t', first_tab + 1);
    if (first_tab == std::string::npos || second_tab == std::string::npos) {
      throw ParseError("gold line " + std::to_string(line_no) + ": expected >= 3 columns");
    }
    auto third_tab = line.find('\t', second_tab + 1);
    std::string score_text =
        line.substr(second_tab + 1, third_tab == std::string::npos ? std::string::npos
                                                                   : third_tab - second_tab - 1);
    double score = 0.0;
    auto [ptr, ec] =
        std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc{} || ptr != score_text.data() + score_text.size()) {
      throw ParseError("gold line " + std::to_string(line_no) + ": bad score '" + score_text +
                       "'");
    }
    SegmentKey key{language_pair, line.substr(first_tab + 1, second_tab - first_tab - 1),
                   line.substr(0, first_tab)};
    if (!gold.emplace(key, score).second) {
      throw ParseError("gold line " + std::to_string(line_no) + ": duplicate key " +
                       to_string(key));
    }
  }
  return gold;
}

}  // namespace mteval
