#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdp/graph.hpp"

namespace sdp {

struct Counts {
  long matched = 0;
  long predicted = 0;
  long gold = 0;

  Counts& operator+=(const Counts& o) {
    matched += o.matched;
    predicted += o.predicted;
    gold += o.gold;
    return *this;
  }
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Counts counts;
};

// F1 = 2PR / (P + R), and 0 when P + R = 0. Empty denominators give 0.
Prf prf_from_counts(const Counts& c);

struct MatchOptions {
  bool labeled = true;
  bool include_top = false;
};

Counts match_counts(const SemGraph& pred, const SemGraph& gold, MatchOptions options);

// Micro-averaged over the corpus. Throws InvalidArgument on a length mismatch
// of the lists or of any sentence pair.
Prf f1(const std::vector<SemGraph>& pred, const std::vector<SemGraph>& gold, MatchOptions options);

// Length buckets [1,10] [11,20] [21,30] [31,40] [41,inf).
inline constexpr int kBucketCount = 5;
int length_bucket(int n);
const char* bucket_name(int bucket);

struct BucketEntry {
  int sentences = 0;
  Prf labeled;
};

std::array<BucketEntry, kBucketCount> bucket_report(const std::vector<SemGraph>& pred,
                                                    const std::vector<SemGraph>& gold,
                                                    bool include_top = false);

// Fraction of graphs with a directed cycle; InvalidArgument on an empty list.
double cycle_rate(const std::vector<SemGraph>& pred);

struct EvalReport {
  bool include_top = false;
  int sentences = 0;
  Prf labeled;
  Prf unlabeled;
  Prf top;  // edges out of TOP only, unlabeled
  std::array<BucketEntry, kBucketCount> buckets;
  double cycle_rate = 0.0;
};

EvalReport evaluate(const std::vector<SemGraph>& pred, const std::vector<SemGraph>& gold,
                    bool include_top = false);

std::string report_text(const EvalReport& report, bool with_buckets);
nlohmann::json report_json(const EvalReport& report);

}  // namespace sdp
