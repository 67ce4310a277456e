#include "sdp/model.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "sdp/error.hpp"

namespace sdp {

const char* role_name(Role r) {
  static constexpr const char* kNames[kRoleCount] = {
      "edge_head", "edge_dep", "label_head", "label_dep", "sib_head",   "sib_dep",
      "cop_head",  "cop_dep",  "gp_head",    "gp_dep",    "gp_head_dep"};
  return kNames[static_cast<int>(r)];
}

ModelConfig full_scale_model_config() {
  ModelConfig c;
  c.word_dim = 100;
  c.pos_dim = 50;
  c.pretrained_out_dim = 125;
  c.encoder_layers = 3;
  c.encoder_hidden = 600;
  c.unary_dim = 600;
  c.binary_dim = 150;
  c.dropout_embed = 0.2;
  c.dropout_lstm_input = 0.45;
  c.dropout_lstm_recurrent = 0.25;
  c.dropout_unary_edge = 0.25;
  c.dropout_unary_label = 0.33;
  c.dropout_binary = 0.25;
  return c;
}

ParserModel::ParserModel(ModelConfig config, Vocabulary vocab, PretrainedEmbeddings pretrained)
    : config_(std::move(config)), vocab_(std::move(vocab)), pretrained_(std::move(pretrained)) {
  const ModelConfig& c = config_;
  if (c.word_dim < 0 || c.pos_dim < 0 || c.encoder_layers < 0 || c.encoder_hidden < 1 ||
      c.unary_dim < 1 || c.binary_dim < 1 || c.pretrained_out_dim < 1)
    throw InvalidArgument("model dimensions must be positive");
  if (input_dim() < 1) throw InvalidArgument("model input dimension must be positive");

  layout_.word_emb = add("word_emb", c.word_dim, vocab_.form_count());
  layout_.pos_emb = add("pos_emb", c.pos_dim, vocab_.pos_count());
  if (!pretrained_.empty())
    layout_.pretrained_proj = add("pretrained_proj", c.pretrained_out_dim, pretrained_.dim());
  layout_.top_emb = add("top_emb", input_dim(), 1);

  int in = input_dim();
  const int h = c.encoder_hidden;
  for (int l = 0; l < c.encoder_layers; ++l) {
    std::array<LstmParamIds, 2> dirs;
    for (int d = 0; d < 2; ++d) {
      const std::string prefix = "lstm." + std::to_string(l) + (d == 0 ? ".fwd." : ".bwd.");
      dirs[static_cast<std::size_t>(d)].w = add(prefix + "W", 4 * h, in);
      dirs[static_cast<std::size_t>(d)].u = add(prefix + "U", 4 * h, h);
      dirs[static_cast<std::size_t>(d)].b = add(prefix + "b", 4 * h, 1);
    }
    layout_.lstm.push_back(dirs);
    in = 2 * h;
  }

  for (int r = 0; r < kRoleCount; ++r) {
    const Role role = static_cast<Role>(r);
    const std::string prefix = std::string("role.") + role_name(role) + ".";
    layout_.role_w[static_cast<std::size_t>(r)] = add(prefix + "W", role_dim(role), context_dim());
    layout_.role_b[static_cast<std::size_t>(r)] = add(prefix + "b", role_dim(role), 1);
  }

  layout_.edge_u = add("edge.U", c.unary_dim, c.unary_dim);
  layout_.edge_b = add("edge.b", 1, 1);
  layout_.label_u = add("label.U", c.unary_dim, vocab_.label_count());
  layout_.label_b = add("label.b", vocab_.label_count(), 1);
  for (PartType t : kPartTypes)
    for (int f = 0; f < 3; ++f)
      layout_.trilinear[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)] =
          add(std::string(part_type_name(t)) + ".U" + std::to_string(f + 1), c.binary_dim,
              c.binary_dim);

  grads_ = make_gradients();
}

std::size_t ParserModel::add(std::string name, int rows, int cols) {
  params_.push_back({std::move(name), Eigen::MatrixXd::Zero(rows, cols)});
  return params_.size() - 1;
}

void ParserModel::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](Eigen::MatrixXd& m, double limit) {
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
  };
  auto normal = [&](Eigen::MatrixXd& m, double stddev) {
    if (stddev == 0.0) {
      m.setZero();
      return;
    }
    std::normal_distribution<double> dist(0.0, stddev);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
  };
  auto fan_in = [](const Eigen::MatrixXd& m) { return 1.0 / std::sqrt(static_cast<double>(m.cols())); };

  for (std::size_t id : {layout_.word_emb, layout_.pos_emb, layout_.top_emb}) {
    auto& m = params_[id].value;
    if (m.size() > 0) uniform(m, std::sqrt(3.0 / static_cast<double>(m.rows())));
  }
  if (layout_.pretrained_proj) uniform(value(*layout_.pretrained_proj), fan_in(value(*layout_.pretrained_proj)));
  for (const auto& dirs : layout_.lstm)
    for (const auto& ids : dirs) {
      uniform(value(ids.w), fan_in(value(ids.w)));
      uniform(value(ids.u), fan_in(value(ids.u)));
      value(ids.b).setZero();
    }
  for (int r = 0; r < kRoleCount; ++r) {
    auto& w = value(layout_.role_w[static_cast<std::size_t>(r)]);
    uniform(w, fan_in(w));
    value(layout_.role_b[static_cast<std::size_t>(r)]).setZero();
  }
  normal(value(layout_.edge_u), config_.unary_init_std);
  value(layout_.edge_b).setZero();
  normal(value(layout_.label_u), config_.unary_init_std);
  value(layout_.label_b).setZero();
  for (const auto& factors : layout_.trilinear)
    for (std::size_t id : factors) normal(value(id), config_.binary_init_std);
}

std::optional<std::size_t> ParserModel::find(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return i;
  return std::nullopt;
}

void ParserModel::zero_grad() {
  for (auto& g : grads_) g.setZero();
}

Gradients ParserModel::make_gradients() const {
  Gradients g;
  g.reserve(params_.size());
  for (const auto& p : params_) g.push_back(Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
  return g;
}

int ParserModel::input_dim() const {
  return config_.word_dim + config_.pos_dim + (pretrained_.empty() ? 0 : config_.pretrained_out_dim);
}

int ParserModel::context_dim() const {
  return config_.encoder_layers == 0 ? input_dim() : 2 * config_.encoder_hidden;
}

int ParserModel::role_dim(Role r) const {
  return is_unary_role(r) ? config_.unary_dim : config_.binary_dim;
}

std::size_t ParserModel::parameter_count() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += static_cast<std::size_t>(p.value.size());
  return total;
}

}  // namespace sdp
