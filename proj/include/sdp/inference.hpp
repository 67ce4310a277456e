#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sdp/belief_propagation.hpp"
#include "sdp/mean_field.hpp"

namespace sdp {

enum class InferenceKind { MeanField, BeliefPropagation };

const char* inference_name(InferenceKind kind);
// "mf" or "lbp"; throws ConfigError otherwise.
InferenceKind parse_inference_kind(const std::string& name);

struct InferenceConfig {
  InferenceKind kind = InferenceKind::MeanField;
  int iterations = 3;
  double logit_clamp = kDefaultLogitClamp;  // mean field only
  double damping = 0.0;                     // belief propagation only
};

// Either engine's trajectory behind one interface.
struct InferenceResult {
  std::variant<BeliefState, MessageState> trajectory;

  const std::vector<double>& final_logits() const;
  std::vector<double> posteriors() const;
  std::vector<double> q(int t) const;
  int iterations() const;
};

InferenceResult run_inference(const LogPotentials& pot, const InferenceConfig& config);

PotentialGradients inference_backward(std::span<const double> grad_logits,
                                      const InferenceResult& result, const LogPotentials& pot);

}  // namespace sdp
