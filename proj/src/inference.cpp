#include "sdp/inference.hpp"

#include "sdp/error.hpp"

namespace sdp {

const char* inference_name(InferenceKind kind) {
  return kind == InferenceKind::MeanField ? "mf" : "lbp";
}

InferenceKind parse_inference_kind(const std::string& name) {
  if (name == "mf") return InferenceKind::MeanField;
  if (name == "lbp") return InferenceKind::BeliefPropagation;
  throw ConfigError("unknown inference engine '" + name + "' (expected mf or lbp)");
}

const std::vector<double>& InferenceResult::final_logits() const {
  return std::visit([](const auto& s) -> const std::vector<double>& { return s.final_logits(); },
                    trajectory);
}

std::vector<double> InferenceResult::posteriors() const {
  return std::visit([](const auto& s) { return s.posteriors(); }, trajectory);
}

std::vector<double> InferenceResult::q(int t) const {
  return std::visit([t](const auto& s) { return s.q(t); }, trajectory);
}

int InferenceResult::iterations() const {
  return std::visit([](const auto& s) { return s.iterations(); }, trajectory);
}

InferenceResult run_inference(const LogPotentials& pot, const InferenceConfig& config) {
  if (config.kind == InferenceKind::MeanField)
    return {mf_run(pot, config.iterations, config.logit_clamp)};
  return {lbp_run(pot, config.iterations, config.damping)};
}

PotentialGradients inference_backward(std::span<const double> grad_logits,
                                      const InferenceResult& result, const LogPotentials& pot) {
  if (const auto* mf = std::get_if<BeliefState>(&result.trajectory))
    return mf_backward_logits(grad_logits, *mf, pot);
  return lbp_backward_logits(grad_logits, std::get<MessageState>(result.trajectory), pot);
}

}  // namespace sdp
