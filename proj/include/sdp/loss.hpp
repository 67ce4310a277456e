#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sdp/graph.hpp"
#include "sdp/vocab.hpp"

namespace sdp {

// -sum over candidate edges of log P(gold existence), with P = Q^(T).
double edge_loss(std::span<const double> q1, const CandidateEdgeSet& edges, const SemGraph& gold);

struct EdgeLoss {
  double value = 0.0;
  std::vector<double> grad_logits;  // Q(1) - gold indicator
};

// Same loss evaluated from posterior log-odds, which stays finite for
// saturated posteriors.
EdgeLoss edge_loss_from_logits(std::span<const double> logits, const CandidateEdgeSet& edges,
                               const SemGraph& gold);

struct LabelLoss {
  double value = 0.0;
  Eigen::MatrixXd grad;  // edges x labels
};

// Softmax cross entropy of the gold label, summed over gold edges only. Edges
// out of TOP are skipped when `include_top` is false.
LabelLoss label_loss(const Eigen::MatrixXd& label_scores, const CandidateEdgeSet& edges,
                     const SemGraph& gold, const Vocabulary& vocab, bool include_top = true);

inline double combined_loss(double edge, double label, double lambda) {
  return lambda * label + (1.0 - lambda) * edge;
}

}  // namespace sdp
