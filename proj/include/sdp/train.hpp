#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdp/inference.hpp"
#include "sdp/model.hpp"
#include "sdp/optimizer.hpp"
#include "sdp/parser.hpp"

namespace sdp {

struct TrainConfig {
  ObjectiveConfig objective;
  OptimizerConfig optimizer;
  InferenceConfig inference;
  long amsgrad_patience_steps = 5000;
  long early_stop_steps = 10000;
  long max_steps = 5000;
  int batch_token_budget = 500;
  int max_train_length = 60;
  std::uint64_t seed = 1;
  int threads = 1;
  double threshold = 0.5;
  bool eval_include_top = false;
  // Stop as soon as dev labeled F1 reaches this value; <= 0 disables.
  double stop_at_dev_f1 = 0.0;
};

// Throws ConfigError naming the first offending field.
void validate(const TrainConfig& config);

// Indices sorted by (length, index) and packed greedily so that no batch
// exceeds `token_budget` words unless it holds a single longer sentence.
std::vector<std::vector<std::size_t>> make_batches(const std::vector<AnnotatedSentence>& corpus,
                                                   int token_budget);

// Average of the per-sentence gradients of one batch. Each sentence gets its
// own buffer and buffers are summed in batch order, so the result does not
// depend on `threads`. Returns the mean total loss.
double batch_gradient(const std::vector<AnnotatedSentence>& corpus,
                      const std::vector<std::size_t>& batch, const ParserModel& model,
                      const TrainConfig& config, const ForwardOptions& base, long step,
                      Gradients& out);

struct EpochRecord {
  int epoch = 0;
  long step = 0;
  double train_loss = 0.0;  // mean over the epoch's batches
  double dev_labeled_f1 = 0.0;
  double dev_unlabeled_f1 = 0.0;
  double learning_rate = 0.0;
  OptimizerMode optimizer = OptimizerMode::Adam;
  bool improved = false;
  long steps_since_improvement = 0;
};

nlohmann::json epoch_json(const EpochRecord& r);

struct TrainResult {
  std::vector<EpochRecord> history;
  std::vector<double> step_losses;
  double best_dev_f1 = -1.0;
  long best_step = 0;
  long steps = 0;
  std::string stop_reason;  // max_steps, early_stop or target_reached
};

// Trains `model` in place and leaves it holding the best-dev parameters.
TrainResult train(ParserModel& model, const std::vector<AnnotatedSentence>& train_set,
                  const std::vector<AnnotatedSentence>& dev_set, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

// Drops sentences longer than `max_length` words.
std::vector<AnnotatedSentence> filter_by_length(const std::vector<AnnotatedSentence>& corpus,
                                                int max_length);

struct GradcheckConfig {
  InferenceConfig inference;
  ObjectiveConfig objective{0.5, true};
  double perturbation = 1e-3;
  std::size_t min_coordinates = 200;
  // Relative error is |a - f| / max(|a|, |f|, floor). Central differences at
  // h = 1e-3 carry a truncation error of h^2/6 times the third derivative,
  // about 2e-8 on this loss, so derivatives below the floor are judged on
  // |a - f| / floor instead.
  double relative_floor = 1e-3;
  std::uint64_t seed = 7;
};

struct GradcheckEntry {
  std::string parameter;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
};

struct GradcheckResult {
  std::vector<GradcheckEntry> entries;
  double max_relative_error = 0.0;
  std::size_t groups_covered = 0;
  std::size_t skipped_at_kinks = 0;
  const GradcheckEntry& worst() const;
};

// Central differences of the combined loss against the analytic gradient over
// a sampled coordinate subset spanning every parameter. Embedding coordinates
// are drawn from the columns this sentence uses. Dropout is off and the mean
// field logit clamp is widened so it never binds. Coordinates whose +-h
// perturbation flips the sign of any leaky-ReLU input are skipped and
// replaced by another coordinate of the same parameter.
GradcheckResult gradcheck(ParserModel& model, const AnnotatedSentence& item,
                          const GradcheckConfig& config);

nlohmann::json gradcheck_json(const GradcheckResult& result);

}  // namespace sdp
