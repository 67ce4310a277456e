#include "sdp/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "sdp/error.hpp"

namespace sdp {
namespace {

void check_aligned(const std::vector<SemGraph>& pred, const std::vector<SemGraph>& gold) {
  if (pred.size() != gold.size())
    throw InvalidArgument("evaluation: " + std::to_string(pred.size()) + " predicted vs " +
                          std::to_string(gold.size()) + " gold sentences");
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i].words() != gold[i].words())
      throw InvalidArgument("evaluation: sentence " + std::to_string(i + 1) + " has " +
                            std::to_string(pred[i].words()) + " predicted vs " +
                            std::to_string(gold[i].words()) + " gold words");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
          {"matched", p.counts.matched}, {"predicted", p.counts.predicted}, {"gold", p.counts.gold}};
}

void prf_text(std::ostringstream& out, const std::string& prefix, const Prf& p) {
  out << prefix << "_precision=" << fmt(p.precision) << '\n'
      << prefix << "_recall=" << fmt(p.recall) << '\n'
      << prefix << "_f1=" << fmt(p.f1) << '\n';
}

}  // namespace

Prf prf_from_counts(const Counts& c) {
  Prf p;
  p.counts = c;
  p.precision = c.predicted ? static_cast<double>(c.matched) / static_cast<double>(c.predicted) : 0.0;
  p.recall = c.gold ? static_cast<double>(c.matched) / static_cast<double>(c.gold) : 0.0;
  const double s = p.precision + p.recall;
  p.f1 = s > 0.0 ? 2.0 * p.precision * p.recall / s : 0.0;
  return p;
}

Counts match_counts(const SemGraph& pred, const SemGraph& gold, MatchOptions options) {
  Counts c;
  for (const auto& [edge, label] : gold.edges())
    if (options.include_top || edge.head != 0) ++c.gold;
  for (const auto& [edge, label] : pred.edges()) {
    if (!options.include_top && edge.head == 0) continue;
    ++c.predicted;
    const auto it = gold.edges().find(edge);
    if (it != gold.edges().end() && (!options.labeled || it->second == label)) ++c.matched;
  }
  return c;
}

Prf f1(const std::vector<SemGraph>& pred, const std::vector<SemGraph>& gold, MatchOptions options) {
  check_aligned(pred, gold);
  Counts total;
  for (std::size_t i = 0; i < pred.size(); ++i) total += match_counts(pred[i], gold[i], options);
  return prf_from_counts(total);
}

int length_bucket(int n) {
  if (n <= 10) return 0;
  if (n <= 20) return 1;
  if (n <= 30) return 2;
  if (n <= 40) return 3;
  return 4;
}

const char* bucket_name(int bucket) {
  static constexpr const char* kNames[kBucketCount] = {"1-10", "11-20", "21-30", "31-40", "41+"};
  return kNames[bucket];
}

std::array<BucketEntry, kBucketCount> bucket_report(const std::vector<SemGraph>& pred,
                                                    const std::vector<SemGraph>& gold,
                                                    bool include_top) {
  check_aligned(pred, gold);
  std::array<Counts, kBucketCount> counts{};
  std::array<BucketEntry, kBucketCount> out{};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int b = length_bucket(gold[i].words());
    ++out[static_cast<std::size_t>(b)].sentences;
    counts[static_cast<std::size_t>(b)] += match_counts(pred[i], gold[i], {true, include_top});
  }
  for (std::size_t b = 0; b < out.size(); ++b) out[b].labeled = prf_from_counts(counts[b]);
  return out;
}

double cycle_rate(const std::vector<SemGraph>& pred) {
  if (pred.empty()) throw InvalidArgument("cycle_rate: no predicted graphs");
  long cyclic = 0;
  for (const auto& g : pred) cyclic += has_cycle(g) ? 1 : 0;
  return static_cast<double>(cyclic) / static_cast<double>(pred.size());
}

EvalReport evaluate(const std::vector<SemGraph>& pred, const std::vector<SemGraph>& gold,
                    bool include_top) {
  check_aligned(pred, gold);
  EvalReport r;
  r.include_top = include_top;
  r.sentences = static_cast<int>(pred.size());
  r.labeled = f1(pred, gold, {true, include_top});
  r.unlabeled = f1(pred, gold, {false, include_top});
  Counts top;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    Counts all = match_counts(pred[i], gold[i], {false, true});
    const Counts words = match_counts(pred[i], gold[i], {false, false});
    top += Counts{all.matched - words.matched, all.predicted - words.predicted, all.gold - words.gold};
  }
  r.top = prf_from_counts(top);
  r.buckets = bucket_report(pred, gold, include_top);
  r.cycle_rate = pred.empty() ? 0.0 : cycle_rate(pred);
  return r;
}

std::string report_text(const EvalReport& report, bool with_buckets) {
  std::ostringstream out;
  out << "sentences=" << report.sentences << '\n';
  out << "include_top=" << (report.include_top ? "true" : "false") << '\n';
  prf_text(out, "labeled", report.labeled);
  prf_text(out, "unlabeled", report.unlabeled);
  prf_text(out, "top", report.top);
  out << "cycle_rate=" << fmt(report.cycle_rate) << '\n';
  if (with_buckets)
    for (int b = 0; b < kBucketCount; ++b) {
      const auto& e = report.buckets[static_cast<std::size_t>(b)];
      out << "bucket_" << bucket_name(b) << "_sentences=" << e.sentences << '\n';
      out << "bucket_" << bucket_name(b) << "_labeled_f1=" << fmt(e.labeled.f1) << '\n';
    }
  return out.str();
}

nlohmann::json report_json(const EvalReport& report) {
  nlohmann::json buckets = nlohmann::json::array();
  for (int b = 0; b < kBucketCount; ++b) {
    const auto& e = report.buckets[static_cast<std::size_t>(b)];
    buckets.push_back({{"range", bucket_name(b)}, {"sentences", e.sentences}, {"labeled", prf_json(e.labeled)}});
  }
  return {{"sentences", report.sentences},
          {"include_top", report.include_top},
          {"labeled", prf_json(report.labeled)},
          {"unlabeled", prf_json(report.unlabeled)},
          {"top", prf_json(report.top)},
          {"cycle_rate", report.cycle_rate},
          {"buckets", buckets}};
}

}  // namespace sdp
