#include "sdp/potentials.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sdp/error.hpp"

namespace sdp {

PotentialGradients PotentialGradients::zeros(const LogPotentials& pot) {
  PotentialGradients g;
  g.unary.assign(pot.unary.size(), 0.0);
  for (std::size_t t = 0; t < 3; ++t) g.binary[t].assign(pot.binary[t].size(), 0.0);
  return g;
}

LogPotentials assemble(std::vector<double> unary, std::array<std::vector<double>, 3> binary,
                       const CandidateEdgeSet& edges, const PartList& parts) {
  if (unary.size() != edges.size())
    throw InvalidArgument("assemble: " + std::to_string(unary.size()) + " edge scores for " +
                          std::to_string(edges.size()) + " edges");
  for (PartType t : kPartTypes)
    if (binary[static_cast<std::size_t>(t)].size() != parts.of(t).size())
      throw InvalidArgument(std::string("assemble: missing ") + part_type_name(t) + " scores");
  LogPotentials pot;
  pot.edges = &edges;
  pot.parts = &parts;
  pot.unary = std::move(unary);
  pot.binary = std::move(binary);
  for (double v : pot.unary)
    if (!std::isfinite(v)) throw NumericError("assemble: non-finite edge score");
  for (const auto& list : pot.binary)
    for (double v : list)
      if (!std::isfinite(v)) throw NumericError("assemble: non-finite part score");
  return pot;
}

LogPotentials assemble(const ScoreSet& scores, const CandidateEdgeSet& edges,
                       const PartList& parts) {
  return assemble(scores.edge, scores.part, edges, parts);
}

double joint_log_score(const LogPotentials& pot, const std::vector<bool>& x) {
  if (x.size() != pot.unary.size()) throw InvalidArgument("joint_log_score: assignment size");
  double total = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e) total += pot.log_unary(e, x[e]);
  for (PartType t : kPartTypes) {
    const auto& list = pot.parts->of(t);
    for (std::size_t p = 0; p < list.size(); ++p)
      total += pot.log_binary(t, p, x[list[p].first_id], x[list[p].second_id]);
  }
  return total;
}

}  // namespace sdp
