#include "sdp/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdp/error.hpp"
#include "sdp/layers.hpp"

namespace sdp {

double edge_loss(std::span<const double> q1, const CandidateEdgeSet& edges, const SemGraph& gold) {
  if (q1.size() != edges.size()) throw InvalidArgument("edge_loss: posterior size");
  constexpr double kTiny = std::numeric_limits<double>::min();
  double loss = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double p = gold.contains(edges[e].head, edges[e].dep) ? q1[e] : 1.0 - q1[e];
    loss -= std::log(std::max(p, kTiny));
  }
  return loss;
}

EdgeLoss edge_loss_from_logits(std::span<const double> logits, const CandidateEdgeSet& edges,
                               const SemGraph& gold) {
  if (logits.size() != edges.size()) throw InvalidArgument("edge_loss: logit size");
  EdgeLoss out;
  out.grad_logits.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const bool present = gold.contains(edges[e].head, edges[e].dep);
    out.value += present ? softplus(-logits[e]) : softplus(logits[e]);
    out.grad_logits[e] = logistic(logits[e]) - (present ? 1.0 : 0.0);
  }
  return out;
}

LabelLoss label_loss(const Eigen::MatrixXd& label_scores, const CandidateEdgeSet& edges,
                     const SemGraph& gold, const Vocabulary& vocab, bool include_top) {
  if (label_scores.rows() != static_cast<Eigen::Index>(edges.size()) ||
      label_scores.cols() != vocab.label_count())
    throw InvalidArgument("label_loss: score shape");
  LabelLoss out;
  out.grad = Eigen::MatrixXd::Zero(label_scores.rows(), label_scores.cols());
  for (const auto& [edge, label] : gold.edges()) {
    if (edge.head == 0 && !include_top) continue;
    const int e = edges.index(edge);
    if (e < 0) throw InvalidArgument("label_loss: gold edge is not a candidate");
    const int gold_id = vocab.label_id(label);
    const Eigen::VectorXd row = label_scores.row(e).transpose();
    const double m = row.maxCoeff();
    const Eigen::VectorXd w = (row.array() - m).exp();
    const double z = w.sum();
    out.value += std::log(z) + m - row(gold_id);
    Eigen::VectorXd g = w / z;
    g(gold_id) -= 1.0;
    out.grad.row(e) = g.transpose();
  }
  return out;
}

}  // namespace sdp
