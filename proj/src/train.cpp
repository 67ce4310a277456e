#include "sdp/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "sdp/error.hpp"
#include "sdp/metrics.hpp"
#include "sdp/scorer.hpp"

namespace sdp {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid training config: " + what);
}

void zero(Gradients& g) {
  for (auto& m : g) m.setZero();
}

}  // namespace

void validate(const TrainConfig& c) {
  require(c.objective.lambda >= 0.0 && c.objective.lambda <= 1.0, "lambda must lie in [0,1]");
  require(c.optimizer.learning_rate > 0.0, "learning_rate must be positive");
  require(c.optimizer.beta1 >= 0.0 && c.optimizer.beta1 < 1.0, "beta1 must lie in [0,1)");
  require(c.optimizer.beta2 >= 0.0 && c.optimizer.beta2 < 1.0, "beta2 must lie in [0,1)");
  require(c.optimizer.epsilon > 0.0, "epsilon must be positive");
  require(c.optimizer.lr_decay > 0.0 && c.optimizer.lr_decay <= 1.0, "lr_decay must lie in (0,1]");
  require(c.optimizer.decay_every_steps > 0, "decay_every_steps must be positive");
  require(c.optimizer.l2 >= 0.0, "l2 must be non-negative");
  require(c.inference.iterations > 0, "iterations must be positive");
  require(c.inference.damping >= 0.0 && c.inference.damping < 1.0, "damping must lie in [0,1)");
  require(c.inference.logit_clamp > 0.0, "logit_clamp must be positive");
  require(c.amsgrad_patience_steps > 0, "amsgrad_patience_steps must be positive");
  require(c.early_stop_steps > 0, "early_stop_steps must be positive");
  require(c.max_steps > 0, "max_steps must be positive");
  require(c.batch_token_budget > 0, "batch_token_budget must be positive");
  require(c.max_train_length > 0, "max_train_length must be positive");
  require(c.threads > 0, "threads must be positive");
  require(c.threshold > 0.0 && c.threshold < 1.0, "threshold must lie in (0,1)");
}

std::vector<AnnotatedSentence> filter_by_length(const std::vector<AnnotatedSentence>& corpus,
                                                int max_length) {
  std::vector<AnnotatedSentence> out;
  for (const auto& s : corpus)
    if (s.sentence.size() <= max_length) out.push_back(s);
  return out;
}

std::vector<std::vector<std::size_t>> make_batches(const std::vector<AnnotatedSentence>& corpus,
                                                   int token_budget) {
  if (token_budget <= 0) throw ConfigError("batch_token_budget must be positive");
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].sentence.size() < corpus[b].sentence.size();
  });
  std::vector<std::vector<std::size_t>> batches;
  std::vector<std::size_t> current;
  std::size_t tokens = 0;
  for (std::size_t i : order) {
    const auto n = static_cast<std::size_t>(corpus[i].sentence.size());
    if (n == 0) continue;  // nothing to score
    if (!current.empty() && tokens + n > static_cast<std::size_t>(token_budget)) {
      batches.push_back(std::move(current));
      current.clear();
      tokens = 0;
    }
    current.push_back(i);
    tokens += n;
  }
  if (!current.empty()) batches.push_back(std::move(current));
  if (batches.empty()) throw ConfigError("no training batches: the training set has no non-empty sentences");
  return batches;
}

double batch_gradient(const std::vector<AnnotatedSentence>& corpus,
                      const std::vector<std::size_t>& batch, const ParserModel& model,
                      const TrainConfig& config, const ForwardOptions& base, long step,
                      Gradients& out) {
  if (batch.empty()) throw ConfigError("empty batch");
  if (out.size() != model.parameters().size()) out = model.make_gradients();
  zero(out);

  const std::size_t wave = std::min<std::size_t>(static_cast<std::size_t>(config.threads), batch.size());
  std::vector<Gradients> buffers(wave, model.make_gradients());
  std::vector<double> losses(batch.size(), 0.0);
  std::vector<std::exception_ptr> errors(wave);

  auto work = [&](std::size_t slot, std::size_t k) {
    try {
      zero(buffers[slot]);
      ForwardOptions opts = base;
      opts.dropout_seed = splitmix(base.dropout_seed ^ splitmix(static_cast<std::uint64_t>(step) * 1000003ULL + k));
      losses[k] = sentence_gradient(corpus[batch[k]], model, config.inference, config.objective, opts,
                                    buffers[slot])
                      .total;
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  };

  for (std::size_t start = 0; start < batch.size(); start += wave) {
    const std::size_t count = std::min(wave, batch.size() - start);
    if (count == 1) {
      work(0, start);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t s = 0; s < count; ++s) pool.emplace_back(work, s, start + s);
      for (auto& t : pool) t.join();
    }
    for (std::size_t s = 0; s < count; ++s) {
      if (errors[s]) std::rethrow_exception(errors[s]);
      for (std::size_t p = 0; p < out.size(); ++p) out[p] += buffers[s][p];
    }
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (auto& g : out) g *= scale;
  double total = 0.0;
  for (double l : losses) total += l;
  return total * scale;
}

nlohmann::json epoch_json(const EpochRecord& r) {
  return {{"epoch", r.epoch},
          {"step", r.step},
          {"train_loss", r.train_loss},
          {"dev_labeled_f1", r.dev_labeled_f1},
          {"dev_unlabeled_f1", r.dev_unlabeled_f1},
          {"learning_rate", r.learning_rate},
          {"optimizer", optimizer_mode_name(r.optimizer)},
          {"improved", r.improved},
          {"steps_since_improvement", r.steps_since_improvement}};
}

TrainResult train(ParserModel& model, const std::vector<AnnotatedSentence>& train_set,
                  const std::vector<AnnotatedSentence>& dev_set, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  validate(config);
  const auto data = filter_by_length(train_set, config.max_train_length);
  if (data.empty()) throw ConfigError("training set is empty after dropping sentences longer than " +
                                      std::to_string(config.max_train_length));
  if (dev_set.empty()) throw ConfigError("dev set is empty");
  auto batches = make_batches(data, config.batch_token_budget);

  std::vector<SemGraph> dev_gold;
  for (const auto& s : dev_set) dev_gold.push_back(s.graph);

  Optimizer opt(model, config.optimizer);
  std::mt19937_64 rng(config.seed);
  Gradients grads = model.make_gradients();
  const ForwardOptions base{true, splitmix(config.seed)};

  TrainResult result;
  std::vector<Parameter> best_params = model.parameters();
  int epoch = 0;
  bool stop = false;
  while (!stop) {
    ++epoch;
    std::shuffle(batches.begin(), batches.end(), rng);
    double epoch_loss = 0.0;
    std::size_t epoch_batches = 0;
    for (const auto& batch : batches) {
      const double loss = batch_gradient(data, batch, model, config, base, opt.steps(), grads);
      if (!std::isfinite(loss)) throw NumericError("non-finite training loss at step " + std::to_string(opt.steps()));
      opt.step(model, grads);
      result.step_losses.push_back(loss);
      epoch_loss += loss;
      ++epoch_batches;
      if (opt.steps() >= config.max_steps) break;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.step = opt.steps();
    rec.train_loss = epoch_loss / static_cast<double>(epoch_batches);
    const auto pred = predict_graphs(dev_set, model, config.inference, config.threshold);
    rec.dev_labeled_f1 = f1(pred, dev_gold, {true, config.eval_include_top}).f1;
    rec.dev_unlabeled_f1 = f1(pred, dev_gold, {false, config.eval_include_top}).f1;
    rec.learning_rate = effective_learning_rate(config.optimizer, opt.steps());
    if (rec.dev_labeled_f1 > result.best_dev_f1) {
      rec.improved = true;
      result.best_dev_f1 = rec.dev_labeled_f1;
      result.best_step = opt.steps();
      best_params = model.parameters();
    }
    rec.steps_since_improvement = opt.steps() - result.best_step;
    if (rec.steps_since_improvement >= config.amsgrad_patience_steps) opt.switch_to_amsgrad();
    rec.optimizer = opt.mode();

    if (config.stop_at_dev_f1 > 0.0 && result.best_dev_f1 >= config.stop_at_dev_f1) {
      result.stop_reason = "target_reached";
      stop = true;
    } else if (rec.steps_since_improvement >= config.early_stop_steps) {
      result.stop_reason = "early_stop";
      stop = true;
    } else if (opt.steps() >= config.max_steps) {
      result.stop_reason = "max_steps";
      stop = true;
    }
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  result.steps = opt.steps();
  model.parameters() = std::move(best_params);
  return result;
}

// ---- gradient check ----

const GradcheckEntry& GradcheckResult::worst() const {
  if (entries.empty()) throw InvalidArgument("gradcheck: no entries");
  return *std::max_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.relative_error < b.relative_error;
  });
}

GradcheckResult gradcheck(ParserModel& model, const AnnotatedSentence& item, const GradcheckConfig& config) {
  InferenceConfig inference = config.inference;
  inference.logit_clamp = 1e9;

  Gradients analytic = model.make_gradients();
  sentence_gradient(item, model, inference, config.objective, {}, analytic);

  // Candidate coordinates per parameter.
  const auto ids = encode_ids(item.sentence, model);
  const auto& layout = model.layout();
  auto columns_of = [&](std::size_t p) -> std::vector<Eigen::Index> {
    const std::vector<int>* used = nullptr;
    if (p == layout.word_emb) used = &ids.words;
    if (p == layout.pos_emb) used = &ids.tags;
    std::vector<Eigen::Index> cols;
    if (used) {
      std::set<int> uniq(used->begin(), used->end());
      cols.assign(uniq.begin(), uniq.end());
    } else {
      cols.resize(static_cast<std::size_t>(model.value(p).cols()));
      std::iota(cols.begin(), cols.end(), 0);
    }
    return cols;
  };

  auto& params = model.parameters();
  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> pools(params.size());
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (Eigen::Index c : columns_of(p))
      for (Eigen::Index r = 0; r < params[p].value.rows(); ++r) pools[p].emplace_back(r, c);
    std::shuffle(pools[p].begin(), pools[p].end(), rng);
  }
  const std::size_t per =
      std::max<std::size_t>(1, (config.min_coordinates + params.size() - 1) / params.size());

  auto loss = [&]() { return sentence_loss(item, model, inference, config.objective).total; };
  // Sign pattern of every leaky-ReLU input; a finite difference that changes
  // it straddles a kink and says nothing about the derivative.
  const CandidateEdgeSet edges(item.sentence.size());
  const PartList parts = enumerate_parts(edges, model.config().parts);
  auto pattern = [&]() {
    ScorerRecord rec;
    score_sentence(item.sentence, model, edges, parts, &rec);
    std::vector<bool> bits;
    for (const auto& pre : rec.pre)
      for (Eigen::Index i = 0; i < pre.size(); ++i) bits.push_back(pre.data()[i] > 0.0);
    return bits;
  };
  const bool kinked = model.config().fnn_negative_slope != 1.0;
  const auto base_pattern = pattern();

  const double h = config.perturbation;
  GradcheckResult result;
  // Tries the next unused coordinate of parameter p; false when p's pool is
  // spent. Kink crossings are counted and replaced by the following coordinate.
  std::vector<std::size_t> cursor(params.size(), 0), accepted(params.size(), 0);
  auto check_next = [&](std::size_t p) {
    while (cursor[p] < pools[p].size()) {
      const auto [r, c] = pools[p][cursor[p]++];
      double& theta = params[p].value(r, c);
      const double saved = theta;
      theta = saved + h;
      const double up = loss();
      const bool cross_up = kinked && pattern() != base_pattern;
      theta = saved - h;
      const double down = loss();
      const bool cross_down = kinked && pattern() != base_pattern;
      theta = saved;
      if (cross_up || cross_down) {
        ++result.skipped_at_kinks;
        continue;
      }
      GradcheckEntry e;
      e.parameter = params[p].name;
      e.row = r;
      e.col = c;
      e.analytic = analytic[p](r, c);
      e.numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(e.analytic), std::abs(e.numeric), config.relative_floor});
      e.relative_error = std::abs(e.analytic - e.numeric) / denom;
      result.max_relative_error = std::max(result.max_relative_error, e.relative_error);
      result.entries.push_back(e);
      ++accepted[p];
      return true;
    }
    return false;
  };
  for (std::size_t p = 0; p < params.size(); ++p)
    while (accepted[p] < per && check_next(p)) {
    }
  // Small parameters may run dry; top up round-robin from the others.
  for (bool progress = true; progress && result.entries.size() < config.min_coordinates;) {
    progress = false;
    for (std::size_t p = 0; p < params.size() && result.entries.size() < config.min_coordinates; ++p)
      progress = check_next(p) || progress;
  }
  for (std::size_t a : accepted)
    if (a > 0) ++result.groups_covered;
  return result;
}

nlohmann::json gradcheck_json(const GradcheckResult& result) {
  nlohmann::json j = {{"coordinates", result.entries.size()},
                      {"skipped_at_kinks", result.skipped_at_kinks},
                      {"groups_covered", result.groups_covered},
                      {"max_relative_error", result.max_relative_error}};
  if (!result.entries.empty()) {
    const auto& w = result.worst();
    j["worst"] = {{"parameter", w.parameter}, {"row", w.row}, {"col", w.col},
                  {"analytic", w.analytic}, {"numeric", w.numeric}};
  }
  return j;
}

}  // namespace sdp
