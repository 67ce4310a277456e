#include "sdp/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "sdp/error.hpp"

namespace sdp {
namespace {

struct PairTerm {
  std::size_t a, b;
  double s;
};

bool lex_less(std::uint32_t x, std::uint32_t y, std::size_t n_edges) {
  for (std::size_t e = 0; e < n_edges; ++e) {
    const bool xe = (x >> e) & 1u;
    const bool ye = (y >> e) & 1u;
    if (xe != ye) return !xe;
  }
  return false;
}

}  // namespace

ExactResult exact_infer(const LogPotentials& pot) {
  const std::size_t n_edges = pot.unary.size();
  if (n_edges > kMaxExactEdges)
    throw InvalidArgument("exact inference over " + std::to_string(n_edges) +
                          " edges exceeds the cap of " + std::to_string(kMaxExactEdges));
  std::vector<PairTerm> pairs;
  for (PartType t : kPartTypes) {
    const auto& list = pot.parts->of(t);
    for (std::size_t p = 0; p < list.size(); ++p)
      pairs.push_back({list[p].first_id, list[p].second_id, pot.of(t)[p]});
  }

  const std::uint32_t count = 1u << n_edges;
  std::vector<double> scores(count);
  double best = -std::numeric_limits<double>::infinity();
  std::uint32_t best_x = 0;
  for (std::uint32_t x = 0; x < count; ++x) {
    double s = 0.0;
    for (std::size_t e = 0; e < n_edges; ++e)
      if ((x >> e) & 1u) s += pot.unary[e];
    for (const auto& p : pairs)
      if (((x >> p.a) & 1u) && ((x >> p.b) & 1u)) s += p.s;
    scores[x] = s;
    if (s > best || (s == best && lex_less(x, best_x, n_edges))) {
      best = s;
      best_x = x;
    }
  }

  ExactResult r;
  double z = 0.0;
  std::vector<double> on(n_edges, 0.0);
  for (std::uint32_t x = 0; x < count; ++x) {
    const double w = std::exp(scores[x] - best);
    z += w;
    for (std::size_t e = 0; e < n_edges; ++e)
      if ((x >> e) & 1u) on[e] += w;
  }
  r.log_partition = best + std::log(z);
  r.marginals.resize(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) r.marginals[e] = on[e] / z;
  r.map_assignment.resize(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) r.map_assignment[e] = (best_x >> e) & 1u;
  r.map_score = best;
  return r;
}

std::vector<bool> exact_map(const LogPotentials& pot) { return exact_infer(pot).map_assignment; }

}  // namespace sdp
