#pragma once

#include <string>
#include <vector>

#include "sdp/inference.hpp"
#include "sdp/model.hpp"
#include "sdp/scorer.hpp"
#include "sdp/sdp_format.hpp"

namespace sdp {

struct ObjectiveConfig {
  double lambda = 0.07;
  bool train_top_label = true;
};

struct SentenceLoss {
  double edge = 0.0;
  double label = 0.0;
  double total = 0.0;
};

// Scores, inference and both losses for one sentence; nothing is accumulated.
SentenceLoss sentence_loss(const AnnotatedSentence& item, const ParserModel& model,
                           const InferenceConfig& inference, const ObjectiveConfig& objective,
                           const ForwardOptions& options = {});

// Same, and adds d total / d theta into `grads`.
SentenceLoss sentence_gradient(const AnnotatedSentence& item, const ParserModel& model,
                               const InferenceConfig& inference, const ObjectiveConfig& objective,
                               const ForwardOptions& options, Gradients& grads);

struct Prediction {
  SemGraph graph;
  std::vector<Edge> edges;
  std::vector<double> marginals;  // Q^(T)(1), aligned with `edges`
  std::vector<std::string> labels;
};

// Edges above `threshold` are kept. Edges out of TOP carry the TOP label;
// other edges take the best-scoring non-TOP label.
Prediction predict(const Sentence& sentence, const ParserModel& model,
                   const InferenceConfig& inference, double threshold = 0.5);

std::vector<SemGraph> predict_graphs(const std::vector<AnnotatedSentence>& corpus,
                                     const ParserModel& model, const InferenceConfig& inference,
                                     double threshold = 0.5);

}  // namespace sdp
