#include "sdp/scorer.hpp"

#include <cmath>
#include <random>

#include "sdp/error.hpp"

namespace sdp {
namespace {

// Which role feeds each factor of the trilinear score, per part type.
constexpr std::array<std::array<Role, 3>, 3> kFactorRoles = {{
    {Role::SibHead, Role::SibDep, Role::SibDep},
    {Role::CopHead, Role::CopDep, Role::CopHead},
    {Role::GpHead, Role::GpHeadDep, Role::GpDep},
}};

// Columns (a, b, c) of the trilinear arguments for a part.
struct PartColumns {
  Eigen::Index a, b, c;
};

PartColumns columns(PartType t, const Part& p) {
  const Eigen::Index third = t == PartType::Coparent ? p.second.head : p.second.dep;
  return {p.first.head, p.first.dep, third};
}

double dropout_rate(const ModelConfig& c, Role r) {
  switch (r) {
    case Role::EdgeHead:
    case Role::EdgeDep: return c.dropout_unary_edge;
    case Role::LabelHead:
    case Role::LabelDep: return c.dropout_unary_label;
    default: return c.dropout_binary;
  }
}

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                             std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = keep(rng) ? scale : 0.0;
  return m;
}

bool dropout_on(const ForwardOptions& o, double rate) { return o.training && rate > 0.0; }

Eigen::MatrixXd embed_ids(const EncodedSentence& ids, const ParserModel& model) {
  const auto& L = model.layout();
  const ModelConfig& c = model.config();
  const auto n_cols = static_cast<Eigen::Index>(ids.words.size());
  Eigen::MatrixXd out(model.input_dim(), n_cols);
  out.col(0) = model.value(L.top_emb).col(0);
  for (Eigen::Index t = 1; t < n_cols; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    out.col(t).segment(0, c.word_dim) = model.value(L.word_emb).col(ids.words[ut]);
    out.col(t).segment(c.word_dim, c.pos_dim) = model.value(L.pos_emb).col(ids.tags[ut]);
    if (L.pretrained_proj)
      out.col(t).segment(c.word_dim + c.pos_dim, c.pretrained_out_dim) =
          model.value(*L.pretrained_proj) * model.pretrained().table.col(ids.pretrained[ut]);
  }
  return out;
}

Eigen::MatrixXd apply_activation(const Eigen::MatrixXd& pre, double slope) {
  return pre.unaryExpr([slope](double x) { return x > 0.0 ? x : slope * x; });
}

Eigen::MatrixXd run_encoder(const Eigen::MatrixXd& inputs, const ParserModel& model,
                            ScorerRecord& rec, const ForwardOptions& options,
                            std::mt19937_64& rng) {
  const ModelConfig& c = model.config();
  const auto& L = model.layout();
  Eigen::MatrixXd x = inputs;
  rec.lstm.assign(L.lstm.size(), {});
  rec.lstm_input_mask.assign(L.lstm.size(), Eigen::MatrixXd());
  for (std::size_t layer = 0; layer < L.lstm.size(); ++layer) {
    if (dropout_on(options, c.dropout_lstm_input)) {
      rec.lstm_input_mask[layer] = dropout_mask(x.rows(), x.cols(), c.dropout_lstm_input, rng);
      x = x.cwiseProduct(rec.lstm_input_mask[layer]);
    }
    const Eigen::Index h = c.encoder_hidden;
    Eigen::MatrixXd next(2 * h, x.cols());
    for (int d = 0; d < 2; ++d) {
      const auto& ids = L.lstm[layer][static_cast<std::size_t>(d)];
      Eigen::VectorXd recur;
      if (dropout_on(options, c.dropout_lstm_recurrent))
        recur = dropout_mask(h, 1, c.dropout_lstm_recurrent, rng).col(0);
      const auto& hidden = lstm_forward(model.value(ids.w), model.value(ids.u), model.value(ids.b),
                                        x, d == 1, recur, rec.lstm[layer][static_cast<std::size_t>(d)]);
      next.block(d * h, 0, h, x.cols()) = hidden;
    }
    x = std::move(next);
  }
  return x;
}

}  // namespace

ScoreSet ScoreSet::zeros(const CandidateEdgeSet& edges, const PartList& parts, int labels) {
  ScoreSet s;
  s.edge.assign(edges.size(), 0.0);
  s.label = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(edges.size()), labels);
  for (PartType t : kPartTypes) s.of(t).assign(parts.of(t).size(), 0.0);
  return s;
}

bool ScoreSet::all_finite() const {
  for (double v : edge)
    if (!std::isfinite(v)) return false;
  if (!label.allFinite()) return false;
  for (const auto& list : part)
    for (double v : list)
      if (!std::isfinite(v)) return false;
  return true;
}

EncodedSentence encode_ids(const Sentence& sentence, const ParserModel& model) {
  EncodedSentence ids;
  const auto& vocab = model.vocab();
  ids.words.push_back(Vocabulary::kTop);
  ids.tags.push_back(Vocabulary::kTop);
  ids.pretrained.push_back(0);
  for (const auto& tok : sentence.words) {
    ids.words.push_back(vocab.form_id(tok.form));
    ids.tags.push_back(vocab.pos_id(tok.pos));
    ids.pretrained.push_back(model.pretrained().empty() ? 0 : model.pretrained().lookup(tok.form));
  }
  return ids;
}

Eigen::MatrixXd embed(const Sentence& sentence, const ParserModel& model) {
  return embed_ids(encode_ids(sentence, model), model);
}

Eigen::MatrixXd encode(const Eigen::MatrixXd& inputs, const ParserModel& model) {
  if (inputs.cols() == 0) throw InvalidArgument("encode: empty input sequence");
  if (inputs.rows() != model.input_dim()) throw InvalidArgument("encode: input width mismatch");
  ScorerRecord scratch;
  std::mt19937_64 rng(0);
  return run_encoder(inputs, model, scratch, {}, rng);
}

std::array<Eigen::MatrixXd, kRoleCount> project_roles(const Eigen::MatrixXd& context,
                                                      const ParserModel& model) {
  if (context.rows() != model.context_dim()) throw InvalidArgument("project_roles: width mismatch");
  std::array<Eigen::MatrixXd, kRoleCount> out;
  const auto& L = model.layout();
  for (std::size_t r = 0; r < kRoleCount; ++r) {
    const Eigen::MatrixXd pre = (model.value(L.role_w[r]) * context).colwise() +
                                model.value(L.role_b[r]).col(0);
    out[r] = apply_activation(pre, model.config().fnn_negative_slope);
  }
  return out;
}

ScoreSet score_sentence(const Sentence& sentence, const ParserModel& model,
                        const CandidateEdgeSet& edges, const PartList& parts,
                        ScorerRecord* record, const ForwardOptions& options) {
  if (sentence.size() != edges.words())
    throw InvalidArgument("score_sentence: candidate set does not match sentence length");
  ScorerRecord local;
  ScorerRecord& rec = record ? *record : local;
  rec = ScorerRecord{};
  const ModelConfig& c = model.config();
  const auto& L = model.layout();
  std::mt19937_64 rng(options.dropout_seed);

  rec.ids = encode_ids(sentence, model);
  Eigen::MatrixXd x = embed_ids(rec.ids, model);
  if (dropout_on(options, c.dropout_embed)) {
    rec.embed_mask = dropout_mask(x.rows(), x.cols(), c.dropout_embed, rng);
    x = x.cwiseProduct(rec.embed_mask);
  }
  rec.context = run_encoder(x, model, rec, options, rng);

  for (std::size_t r = 0; r < kRoleCount; ++r) {
    rec.pre[r] = (model.value(L.role_w[r]) * rec.context).colwise() + model.value(L.role_b[r]).col(0);
    rec.role[r] = apply_activation(rec.pre[r], c.fnn_negative_slope);
    const double rate = dropout_rate(c, static_cast<Role>(r));
    if (dropout_on(options, rate)) {
      rec.role_mask[r] = dropout_mask(rec.role[r].rows(), rec.role[r].cols(), rate, rng);
      rec.role[r] = rec.role[r].cwiseProduct(rec.role_mask[r]);
    }
  }

  ScoreSet s = ScoreSet::zeros(edges, parts, model.label_count());
  const auto& head = rec.role[static_cast<std::size_t>(Role::EdgeHead)];
  const auto& dep = rec.role[static_cast<std::size_t>(Role::EdgeDep)];
  const Eigen::MatrixXd pair_scores = dep.transpose() * model.value(L.edge_u) * head;  // (dep, head)
  const double edge_bias = model.value(L.edge_b)(0, 0);
  const auto& lhead = rec.role[static_cast<std::size_t>(Role::LabelHead)];
  const auto& ldep = rec.role[static_cast<std::size_t>(Role::LabelDep)];
  const Eigen::MatrixXd& lu = model.value(L.label_u);
  const Eigen::VectorXd lb = model.value(L.label_b).col(0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    s.edge[e] = pair_scores(ed.dep, ed.head) + edge_bias;
    s.label.row(static_cast<Eigen::Index>(e)) =
        (lu.transpose() * ldep.col(ed.dep).cwiseProduct(lhead.col(ed.head)) + lb).transpose();
  }

  for (PartType t : kPartTypes) {
    const auto ti = static_cast<std::size_t>(t);
    for (std::size_t f = 0; f < 3; ++f)
      rec.factor[ti][f] =
          model.value(L.trilinear[ti][f]) * rec.role[static_cast<std::size_t>(kFactorRoles[ti][f])];
    const auto& list = parts.of(t);
    auto& out = s.of(t);
    const auto& f0 = rec.factor[ti][0];
    const auto& f1 = rec.factor[ti][1];
    const auto& f2 = rec.factor[ti][2];
    for (std::size_t p = 0; p < list.size(); ++p) {
      const PartColumns col = columns(t, list[p]);
      out[p] = (f0.col(col.a).array() * f1.col(col.b).array() * f2.col(col.c).array()).sum();
    }
  }
  rec.valid = true;
  return s;
}

void backward(const ScoreSet& grad, const ParserModel& model, const ScorerRecord& rec,
              const CandidateEdgeSet& edges, const PartList& parts, Gradients& out) {
  if (!rec.valid) throw InvalidArgument("backward: no recorded forward pass");
  if (out.size() != model.parameters().size())
    throw InvalidArgument("backward: gradient buffer does not match model");
  if (grad.edge.size() != edges.size() ||
      grad.label.rows() != static_cast<Eigen::Index>(edges.size()))
    throw InvalidArgument("backward: score gradient does not match candidate edges");
  const ModelConfig& c = model.config();
  const auto& L = model.layout();
  const Eigen::Index n_cols = rec.context.cols();

  std::array<Eigen::MatrixXd, kRoleCount> g_role;
  for (std::size_t r = 0; r < kRoleCount; ++r) g_role[r] = Eigen::MatrixXd::Zero(rec.role[r].rows(), n_cols);

  // Edge biaffine.
  {
    Eigen::MatrixXd g_pair = Eigen::MatrixXd::Zero(n_cols, n_cols);
    double g_bias = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      g_pair(edges[e].dep, edges[e].head) += grad.edge[e];
      g_bias += grad.edge[e];
    }
    const auto& head = rec.role[static_cast<std::size_t>(Role::EdgeHead)];
    const auto& dep = rec.role[static_cast<std::size_t>(Role::EdgeDep)];
    const auto& u = model.value(L.edge_u);
    out[L.edge_u].noalias() += dep * g_pair * head.transpose();
    out[L.edge_b](0, 0) += g_bias;
    g_role[static_cast<std::size_t>(Role::EdgeDep)].noalias() += u * head * g_pair.transpose();
    g_role[static_cast<std::size_t>(Role::EdgeHead)].noalias() += u.transpose() * dep * g_pair;
  }

  // Diagonal label biaffine.
  {
    const auto& head = rec.role[static_cast<std::size_t>(Role::LabelHead)];
    const auto& dep = rec.role[static_cast<std::size_t>(Role::LabelDep)];
    const auto& u = model.value(L.label_u);
    auto& g_head = g_role[static_cast<std::size_t>(Role::LabelHead)];
    auto& g_dep = g_role[static_cast<std::size_t>(Role::LabelDep)];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const Edge& ed = edges[e];
      const Eigen::VectorXd g = grad.label.row(static_cast<Eigen::Index>(e)).transpose();
      if (g.isZero(0.0)) continue;
      const Eigen::VectorXd prod = dep.col(ed.dep).cwiseProduct(head.col(ed.head));
      out[L.label_u].noalias() += prod * g.transpose();
      out[L.label_b].col(0) += g;
      const Eigen::VectorXd g_prod = u * g;
      g_dep.col(ed.dep) += g_prod.cwiseProduct(head.col(ed.head));
      g_head.col(ed.head) += g_prod.cwiseProduct(dep.col(ed.dep));
    }
  }

  // Trilinear part scores.
  for (PartType t : kPartTypes) {
    const auto ti = static_cast<std::size_t>(t);
    const auto& list = parts.of(t);
    const auto& g_scores = grad.of(t);
    if (g_scores.size() != list.size())
      throw InvalidArgument("backward: part gradient does not match part list");
    const auto& f0 = rec.factor[ti][0];
    const auto& f1 = rec.factor[ti][1];
    const auto& f2 = rec.factor[ti][2];
    std::array<Eigen::MatrixXd, 3> g_f;
    for (auto& m : g_f) m = Eigen::MatrixXd::Zero(c.binary_dim, n_cols);
    for (std::size_t p = 0; p < list.size(); ++p) {
      const double g = g_scores[p];
      if (g == 0.0) continue;
      const PartColumns col = columns(t, list[p]);
      g_f[0].col(col.a).array() += g * f1.col(col.b).array() * f2.col(col.c).array();
      g_f[1].col(col.b).array() += g * f0.col(col.a).array() * f2.col(col.c).array();
      g_f[2].col(col.c).array() += g * f0.col(col.a).array() * f1.col(col.b).array();
    }
    for (std::size_t f = 0; f < 3; ++f) {
      const auto role = static_cast<std::size_t>(kFactorRoles[ti][f]);
      out[L.trilinear[ti][f]].noalias() += g_f[f] * rec.role[role].transpose();
      g_role[role].noalias() += model.value(L.trilinear[ti][f]).transpose() * g_f[f];
    }
  }

  // Role projections.
  Eigen::MatrixXd g_context = Eigen::MatrixXd::Zero(rec.context.rows(), n_cols);
  const double slope = c.fnn_negative_slope;
  for (std::size_t r = 0; r < kRoleCount; ++r) {
    Eigen::MatrixXd g = g_role[r];
    if (rec.role_mask[r].size()) g = g.cwiseProduct(rec.role_mask[r]);
    g = g.cwiseProduct(rec.pre[r].unaryExpr([slope](double x) { return x > 0.0 ? 1.0 : slope; }));
    out[L.role_w[r]].noalias() += g * rec.context.transpose();
    out[L.role_b[r]].col(0) += g.rowwise().sum();
    g_context.noalias() += model.value(L.role_w[r]).transpose() * g;
  }

  // Encoder, top layer first.
  Eigen::MatrixXd g_x = std::move(g_context);
  for (std::size_t layer = L.lstm.size(); layer-- > 0;) {
    const Eigen::Index h = c.encoder_hidden;
    Eigen::MatrixXd g_in;
    for (int d = 0; d < 2; ++d) {
      const auto& ids = L.lstm[layer][static_cast<std::size_t>(d)];
      const Eigen::MatrixXd g_hidden = g_x.block(d * h, 0, h, n_cols);
      Eigen::MatrixXd g = lstm_backward(model.value(ids.w), model.value(ids.u),
                                        rec.lstm[layer][static_cast<std::size_t>(d)], g_hidden,
                                        out[ids.w], out[ids.u], out[ids.b]);
      if (d == 0) g_in = std::move(g);
      else g_in += g;
    }
    if (rec.lstm_input_mask[layer].size()) g_in = g_in.cwiseProduct(rec.lstm_input_mask[layer]);
    g_x = std::move(g_in);
  }

  // Embeddings.
  if (rec.embed_mask.size()) g_x = g_x.cwiseProduct(rec.embed_mask);
  out[L.top_emb].col(0) += g_x.col(0);
  for (Eigen::Index t = 1; t < n_cols; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    out[L.word_emb].col(rec.ids.words[ut]) += g_x.col(t).segment(0, c.word_dim);
    out[L.pos_emb].col(rec.ids.tags[ut]) += g_x.col(t).segment(c.word_dim, c.pos_dim);
    if (L.pretrained_proj)
      out[*L.pretrained_proj].noalias() +=
          g_x.col(t).segment(c.word_dim + c.pos_dim, c.pretrained_out_dim) *
          model.pretrained().table.col(rec.ids.pretrained[ut]).transpose();
  }
}

}  // namespace sdp
