#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sdp/graph.hpp"
#include "sdp/layers.hpp"
#include "sdp/model.hpp"

namespace sdp {

// Edge, label and second-order part scores for one sentence. Also used as the
// container for gradients with respect to those scores.
struct ScoreSet {
  std::vector<double> edge;                 // per candidate edge id
  Eigen::MatrixXd label;                    // edges x labels
  std::array<std::vector<double>, 3> part;  // per part type, aligned with PartList

  const std::vector<double>& sib() const { return part[0]; }
  const std::vector<double>& cop() const { return part[1]; }
  const std::vector<double>& gp() const { return part[2]; }
  std::vector<double>& of(PartType t) { return part[static_cast<std::size_t>(t)]; }
  const std::vector<double>& of(PartType t) const { return part[static_cast<std::size_t>(t)]; }

  // Zero-filled set shaped for (edges, parts, labels).
  static ScoreSet zeros(const CandidateEdgeSet& edges, const PartList& parts, int labels);
  bool all_finite() const;
};

struct ForwardOptions {
  bool training = false;        // enables dropout
  std::uint64_t dropout_seed = 0;
};

// Vocabulary ids for TOP (position 0) followed by the n words.
struct EncodedSentence {
  std::vector<int> words;
  std::vector<int> tags;
  std::vector<int> pretrained;
};

EncodedSentence encode_ids(const Sentence& sentence, const ParserModel& model);

// Everything the backward pass reads. `valid` is false until a forward pass
// has filled it in.
struct ScorerRecord {
  bool valid = false;
  EncodedSentence ids;
  Eigen::MatrixXd embed_mask;  // empty when embedding dropout is off
  std::vector<std::array<LstmRecord, 2>> lstm;
  std::vector<Eigen::MatrixXd> lstm_input_mask;  // per layer; empty when off
  Eigen::MatrixXd context;                       // context_dim x N
  std::array<Eigen::MatrixXd, kRoleCount> pre;   // affine outputs
  std::array<Eigen::MatrixXd, kRoleCount> role;  // after activation and dropout
  std::array<Eigen::MatrixXd, kRoleCount> role_mask;
  std::array<std::array<Eigen::MatrixXd, 3>, 3> factor;  // [type][f] = U_f * role
};

// Input vectors o_0..o_n as columns; column 0 is the learned TOP vector.
Eigen::MatrixXd embed(const Sentence& sentence, const ParserModel& model);

// Bidirectional LSTM over the input columns; forward and backward states are
// stacked per column. With zero encoder layers the inputs pass through.
Eigen::MatrixXd encode(const Eigen::MatrixXd& inputs, const ParserModel& model);

// The eleven role projections of every context column.
std::array<Eigen::MatrixXd, kRoleCount> project_roles(const Eigen::MatrixXd& context,
                                                      const ParserModel& model);

ScoreSet score_sentence(const Sentence& sentence, const ParserModel& model,
                        const CandidateEdgeSet& edges, const PartList& parts,
                        ScorerRecord* record = nullptr, const ForwardOptions& options = {});

// Reverse-mode pass through score_sentence. `grad` holds d loss / d score in
// the ScoreSet layout; parameter gradients are added to `out`.
void backward(const ScoreSet& grad, const ParserModel& model, const ScorerRecord& record,
              const CandidateEdgeSet& edges, const PartList& parts, Gradients& out);

}  // namespace sdp
