#pragma once

#include <utility>
#include <vector>

#include "sdp/potentials.hpp"

namespace sdp {

struct Neighbor {
  std::size_t edge;  // the other edge of the part
  PartType type;
  std::size_t part;  // index into parts.of(type)
};

// N_ij for every edge id. Throws InvalidArgument if an edge pair is joined by
// more than one part.
std::vector<std::vector<Neighbor>> neighbor_sets(const CandidateEdgeSet& edges,
                                                 const PartList& parts);

// A directed variable-to-variable message. Links come in pairs: link m and
// link m ^ 1 join the same two edges in opposite directions.
struct MessageLink {
  std::size_t from;
  std::size_t to;
  PartType type;
  std::size_t part;
};

std::vector<MessageLink> message_links(const PartList& parts);

// LBP trajectory. Messages and beliefs are stored as log-odds,
//   ratio = log(M(1) / M(0)),  belief = log(Q(1) / Q(0)),
// so each is normalized by construction: M(1) = logistic(ratio).
struct MessageState {
  std::vector<MessageLink> links;
  std::vector<std::vector<double>> ratio;   // [t][link]
  std::vector<std::vector<double>> belief;  // [t][edge]
  double damping = 0.0;

  int iterations() const { return static_cast<int>(belief.size()) - 1; }
  // (log M(0), log M(1)) of a link at iteration t; log-sum-exp of the pair is 0.
  std::pair<double, double> log_message(int t, std::size_t link) const;
  std::vector<double> q(int t) const;
  std::vector<double> posteriors() const { return q(iterations()); }
  const std::vector<double>& final_logits() const { return belief.back(); }
};

// Uniform messages; beliefs are the normalized unary potentials.
MessageState lbp_init(const LogPotentials& pot, double damping = 0.0);

// Synchronous message update from iteration t-1 followed by the beliefs.
void lbp_step(MessageState& state, const LogPotentials& pot);

MessageState lbp_run(const LogPotentials& pot, int iterations, double damping = 0.0);

// Reverse mode through the unrolled updates; upstream on final belief log-odds.
PotentialGradients lbp_backward_logits(std::span<const double> grad_logits,
                                       const MessageState& state, const LogPotentials& pot);
// Upstream on Q^(T)(1).
PotentialGradients lbp_backward(std::span<const double> grad_q, const MessageState& state,
                                const LogPotentials& pot);

}  // namespace sdp
