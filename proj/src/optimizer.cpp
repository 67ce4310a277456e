#include "sdp/optimizer.hpp"

#include <cmath>

#include "sdp/error.hpp"

namespace sdp {

const char* optimizer_mode_name(OptimizerMode mode) {
  return mode == OptimizerMode::Adam ? "adam" : "amsgrad";
}

double effective_learning_rate(const OptimizerConfig& config, long step) {
  const long every = config.decay_every_steps > 0 ? config.decay_every_steps : 1;
  return config.learning_rate * std::pow(config.lr_decay, static_cast<double>(step / every));
}

Optimizer::Optimizer(const ParserModel& model, OptimizerConfig config)
    : config_(config), m_(model.make_gradients()), v_(model.make_gradients()) {}

void Optimizer::switch_to_amsgrad() {
  if (mode_ == OptimizerMode::AmsGrad) return;
  mode_ = OptimizerMode::AmsGrad;
  v_max_ = v_;
}

void Optimizer::step(ParserModel& model, const Gradients& grads) {
  auto& params = model.parameters();
  if (grads.size() != params.size()) throw InvalidArgument("optimizer: gradient count mismatch");
  for (std::size_t p = 0; p < params.size(); ++p)
    if (!grads[p].allFinite())
      throw NumericError("non-finite gradient in parameter '" + params[p].name + "' at step " +
                         std::to_string(step_));

  const double lr = effective_learning_rate(config_, step_);
  const double t = static_cast<double>(step_ + 1);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    Eigen::MatrixXd& theta = params[p].value;
    const Eigen::MatrixXd g = config_.l2 > 0.0 ? Eigen::MatrixXd(grads[p] + config_.l2 * theta) : grads[p];
    m_[p] = config_.beta1 * m_[p] + (1.0 - config_.beta1) * g;
    v_[p] = config_.beta2 * v_[p] + (1.0 - config_.beta2) * g.cwiseAbs2();
    const Eigen::MatrixXd* second = &v_[p];
    if (mode_ == OptimizerMode::AmsGrad) {
      v_max_[p] = v_max_[p].cwiseMax(v_[p]);
      second = &v_max_[p];
    }
    theta.array() -= lr * (m_[p].array() / c1) / ((second->array() / c2).sqrt() + config_.epsilon);
  }
  ++step_;
}

}  // namespace sdp
