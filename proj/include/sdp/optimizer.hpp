#pragma once

#include <cstdint>
#include <string>

#include "sdp/model.hpp"

namespace sdp {

struct OptimizerConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.0;
  double beta2 = 0.95;
  double epsilon = 1e-12;
  double lr_decay = 0.5;
  int decay_every_steps = 10000;
  double l2 = 3e-9;
};

enum class OptimizerMode { Adam, AmsGrad };
const char* optimizer_mode_name(OptimizerMode mode);

// base * decay^floor(step / every) for a zero-based step count.
double effective_learning_rate(const OptimizerConfig& config, long step);

class Optimizer {
 public:
  Optimizer(const ParserModel& model, OptimizerConfig config);

  // One bias-corrected adaptive-moment update; L2 decay is added to the
  // gradient first. Throws NumericError naming the parameter if a gradient is
  // not finite, before any parameter is touched.
  void step(ParserModel& model, const Gradients& grads);

  // One-way switch; later calls are ignored.
  void switch_to_amsgrad();

  OptimizerMode mode() const { return mode_; }
  long steps() const { return step_; }
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  OptimizerMode mode_ = OptimizerMode::Adam;
  long step_ = 0;
  Gradients m_, v_, v_max_;
};

}  // namespace sdp
