#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mteval/corpus.hpp"

namespace mteval {

// Penalty magnitudes per severity; applied penalties are negated.
struct SeverityWeights {
  double minor = 1.0;
  double major = 5.0;
  double neutral = 0.0;
  std::optional<double> cap;  // maximum total penalty magnitude
};

enum class RaterAggregation { Mean, Min, Max };

struct MqmGold {
  SegmentKey key;
  double score = 0.0;
  std::vector<double> rater_scores;
};

// Score for one (segment, rater): -(sum of severity penalties), capped at
// -cap when a cap is configured. Empty list scores 0.
double score_rater(std::span<const ErrorAnnotation> errors,
                   const SeverityWeights& weights = {});

double gold_segment_score(std::span<const double> per_rater,
                          RaterAggregation aggregation = RaterAggregation::Mean);

// HQZero iff score == 0; NonHQ iff score <= boundary (default -5, which is
// excluded from high quality); HQMinor otherwise. Positive scores are invalid.
QualityClass classify(double score, double hq_boundary = -5.0);

// Gold score per segment from raw annotations: group by (key, rater), score
// each rater, aggregate. source_id is the (doc, seg_id) composite.
std::map<SegmentKey, MqmGold> compute_gold(const std::vector<ErrorAnnotation>& annotations,
                                           const std::string& language_pair,
                                           const SeverityWeights& weights = {},
                                           RaterAggregation aggregation = RaterAggregation::Mean);

struct Distribution {
  double pct_zero = 0.0;
  double pct_hq_minor = 0.0;
  double pct_nonhq = 0.0;
  std::size_t n = 0;
};

Distribution distribution(const EvalCorpus& corpus);

// system<TAB>source_id<TAB>gold_mqm<TAB>class
void write_gold_tsv(std::ostream& out, const EvalCorpus& corpus);
std::map<SegmentKey, double> parse_gold_tsv(std::istream& in,
                                            const std::string& language_pair);

}  // namespace mteval
