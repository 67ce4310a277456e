#include "sdp/parser.hpp"

#include "sdp/loss.hpp"
#include "sdp/potentials.hpp"

namespace sdp {
namespace {

struct Forward {
  CandidateEdgeSet edges;
  PartList parts;
  ScorerRecord record;
  ScoreSet scores;
  LogPotentials pot;
  InferenceResult result;
};

// The potentials borrow `edges` and `parts`; a Forward is filled in place and
// never moved afterwards.
void run_forward(Forward& f, const Sentence& s, const ParserModel& model,
                 const InferenceConfig& inference, const ForwardOptions& options) {
  f.parts = enumerate_parts(f.edges, model.config().parts);
  f.scores = score_sentence(s, model, f.edges, f.parts, &f.record, options);
  f.pot = assemble(f.scores, f.edges, f.parts);
  f.result = run_inference(f.pot, inference);
}

SentenceLoss losses(const Forward& f, const AnnotatedSentence& item, const ParserModel& model,
                    const ObjectiveConfig& objective, EdgeLoss* edge_out, LabelLoss* label_out) {
  EdgeLoss el = edge_loss_from_logits(f.result.final_logits(), f.edges, item.graph);
  LabelLoss ll = label_loss(f.scores.label, f.edges, item.graph, model.vocab(), objective.train_top_label);
  SentenceLoss out{el.value, ll.value, combined_loss(el.value, ll.value, objective.lambda)};
  if (edge_out) *edge_out = std::move(el);
  if (label_out) *label_out = std::move(ll);
  return out;
}

}  // namespace

SentenceLoss sentence_loss(const AnnotatedSentence& item, const ParserModel& model,
                           const InferenceConfig& inference, const ObjectiveConfig& objective,
                           const ForwardOptions& options) {
  Forward f{CandidateEdgeSet(item.sentence.size()), {}, {}, {}, {}, {}};
  run_forward(f, item.sentence, model, inference, options);
  return losses(f, item, model, objective, nullptr, nullptr);
}

SentenceLoss sentence_gradient(const AnnotatedSentence& item, const ParserModel& model,
                               const InferenceConfig& inference, const ObjectiveConfig& objective,
                               const ForwardOptions& options, Gradients& grads) {
  Forward f{CandidateEdgeSet(item.sentence.size()), {}, {}, {}, {}, {}};
  run_forward(f, item.sentence, model, inference, options);
  EdgeLoss el;
  LabelLoss ll;
  const SentenceLoss out = losses(f, item, model, objective, &el, &ll);

  const double lambda = objective.lambda;
  for (double& g : el.grad_logits) g *= 1.0 - lambda;
  const PotentialGradients pg = inference_backward(el.grad_logits, f.result, f.pot);
  ScoreSet upstream;
  upstream.edge = pg.unary;
  upstream.part = pg.binary;
  upstream.label = lambda * ll.grad;
  backward(upstream, model, f.record, f.edges, f.parts, grads);
  return out;
}

Prediction predict(const Sentence& sentence, const ParserModel& model,
                   const InferenceConfig& inference, double threshold) {
  Forward f{CandidateEdgeSet(sentence.size()), {}, {}, {}, {}, {}};
  run_forward(f, sentence, model, inference, {});
  Prediction p;
  p.edges = f.edges.edges();
  p.marginals = f.result.posteriors();
  p.labels.resize(f.edges.size());
  const auto& vocab = model.vocab();
  for (std::size_t e = 0; e < f.edges.size(); ++e) {
    if (f.edges[e].head == 0 || vocab.label_count() < 2) {
      p.labels[e] = kTopLabel;
      continue;
    }
    const auto row = f.scores.label.row(static_cast<Eigen::Index>(e));
    Eigen::Index best = 1;
    for (Eigen::Index l = 2; l < row.size(); ++l)
      if (row(l) > row(best)) best = l;
    p.labels[e] = vocab.label(static_cast<int>(best));
  }
  p.graph = decode(f.edges, p.marginals, p.labels, threshold);
  return p;
}

std::vector<SemGraph> predict_graphs(const std::vector<AnnotatedSentence>& corpus,
                                     const ParserModel& model, const InferenceConfig& inference,
                                     double threshold) {
  std::vector<SemGraph> out;
  out.reserve(corpus.size());
  for (const auto& item : corpus) out.push_back(predict(item.sentence, model, inference, threshold).graph);
  return out;
}

}  // namespace sdp
