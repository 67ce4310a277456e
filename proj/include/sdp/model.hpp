#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdp/embeddings.hpp"
#include "sdp/graph.hpp"
#include "sdp/vocab.hpp"

namespace sdp {

// Role projections computed from every context vector.
enum class Role : int {
  EdgeHead,
  EdgeDep,
  LabelHead,
  LabelDep,
  SibHead,
  SibDep,
  CopHead,
  CopDep,
  GpHead,
  GpDep,
  GpHeadDep,
};
inline constexpr int kRoleCount = 11;
const char* role_name(Role r);
inline bool is_unary_role(Role r) { return static_cast<int>(r) < 4; }

struct ModelConfig {
  int word_dim = 16;
  int pos_dim = 16;
  int pretrained_out_dim = 125;  // used only when pretrained vectors are attached
  int encoder_layers = 1;        // 0 passes embeddings straight to the projections
  int encoder_hidden = 32;       // per direction
  int unary_dim = 32;
  int binary_dim = 16;
  double fnn_negative_slope = 0.1;  // 1.0 makes the projections affine
  PartMask parts;
  double unary_init_std = 1.0;
  double binary_init_std = 0.25;

  double dropout_embed = 0.0;
  double dropout_lstm_input = 0.0;
  double dropout_lstm_recurrent = 0.0;
  double dropout_unary_edge = 0.0;
  double dropout_unary_label = 0.0;
  double dropout_binary = 0.0;

  bool operator==(const ModelConfig&) const = default;
};

// Full-scale sizes and dropout rates (desk defaults are the member initializers).
ModelConfig full_scale_model_config();

struct Parameter {
  std::string name;
  Eigen::MatrixXd value;
  bool operator==(const Parameter&) const = default;
};

// One gradient array per parameter, same order and shape.
using Gradients = std::vector<Eigen::MatrixXd>;

struct LstmParamIds {
  std::size_t w = 0;  // 4h x in, gate blocks [input, forget, cell, output]
  std::size_t u = 0;  // 4h x h
  std::size_t b = 0;  // 4h x 1
};

struct ParamLayout {
  std::size_t word_emb = 0;  // word_dim x |forms|, one column per id
  std::size_t pos_emb = 0;   // pos_dim x |tags|
  std::size_t top_emb = 0;   // input_dim x 1
  std::optional<std::size_t> pretrained_proj;  // pretrained_out_dim x pretrained dim
  std::vector<std::array<LstmParamIds, 2>> lstm;  // [layer][forward, backward]
  std::array<std::size_t, kRoleCount> role_w{};   // dim x context_dim
  std::array<std::size_t, kRoleCount> role_b{};   // dim x 1
  std::size_t edge_u = 0;   // d_u x d_u
  std::size_t edge_b = 0;   // 1 x 1
  std::size_t label_u = 0;  // d_u x c: the diagonal slab u_{m,l,m}
  std::size_t label_b = 0;  // c x 1
  std::array<std::array<std::size_t, 3>, 3> trilinear{};  // [part type][factor]
};

class ParserModel {
 public:
  // All parameters start at zero; call initialize() for random weights.
  ParserModel(ModelConfig config, Vocabulary vocab, PretrainedEmbeddings pretrained = {});

  void initialize(std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  const PretrainedEmbeddings& pretrained() const { return pretrained_; }
  const ParamLayout& layout() const { return layout_; }

  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  Eigen::MatrixXd& value(std::size_t id) { return params_[id].value; }
  const Eigen::MatrixXd& value(std::size_t id) const { return params_[id].value; }
  std::optional<std::size_t> find(const std::string& name) const;

  // Accumulators owned by the model.
  Gradients& gradients() { return grads_; }
  const Gradients& gradients() const { return grads_; }
  void zero_grad();
  Gradients make_gradients() const;

  int input_dim() const;
  int context_dim() const;
  int role_dim(Role r) const;
  int label_count() const { return vocab_.label_count(); }
  std::size_t parameter_count() const;

 private:
  std::size_t add(std::string name, int rows, int cols);

  ModelConfig config_;
  Vocabulary vocab_;
  PretrainedEmbeddings pretrained_;
  std::vector<Parameter> params_;
  Gradients grads_;
  ParamLayout layout_;
};

}  // namespace sdp
