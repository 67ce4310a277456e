#pragma once

#include <array>
#include <vector>

#include "sdp/graph.hpp"
#include "sdp/scorer.hpp"

namespace sdp {

// The CRF over Boolean edge variables in log space:
//   log phi_u(x=1) = s_edge, log phi_u(x=0) = 0
//   log phi_p(1,1) = s_part, every other assignment 0.
// `edges` and `parts` are borrowed and must outlive the potentials.
struct LogPotentials {
  const CandidateEdgeSet* edges = nullptr;
  const PartList* parts = nullptr;
  std::vector<double> unary;
  std::array<std::vector<double>, 3> binary;

  const std::vector<double>& of(PartType t) const { return binary[static_cast<std::size_t>(t)]; }
  std::vector<double>& of(PartType t) { return binary[static_cast<std::size_t>(t)]; }

  double log_unary(std::size_t edge, bool on) const { return on ? unary[edge] : 0.0; }
  double log_binary(PartType t, std::size_t part, bool first_on, bool second_on) const {
    return first_on && second_on ? of(t)[part] : 0.0;
  }
};

// d loss / d (log potential), laid out like LogPotentials.
struct PotentialGradients {
  std::vector<double> unary;
  std::array<std::vector<double>, 3> binary;

  static PotentialGradients zeros(const LogPotentials& pot);
  const std::vector<double>& of(PartType t) const { return binary[static_cast<std::size_t>(t)]; }
  std::vector<double>& of(PartType t) { return binary[static_cast<std::size_t>(t)]; }
};

// Throws InvalidArgument when a score is missing for an edge or part.
LogPotentials assemble(const ScoreSet& scores, const CandidateEdgeSet& edges,
                       const PartList& parts);

// Builds potentials directly from score vectors (tests, oracle comparisons).
LogPotentials assemble(std::vector<double> unary, std::array<std::vector<double>, 3> binary,
                       const CandidateEdgeSet& edges, const PartList& parts);

// Unnormalized log-probability of a full assignment (one flag per edge id).
double joint_log_score(const LogPotentials& pot, const std::vector<bool>& assignment);

}  // namespace sdp
