#include "sdp/mean_field.hpp"

#include <algorithm>

#include "sdp/error.hpp"
#include "sdp/layers.hpp"

namespace sdp {
namespace {

void push_logits(BeliefState& state, std::vector<double> raw) {
  std::vector<double> clamped(raw.size());
  for (std::size_t e = 0; e < raw.size(); ++e)
    clamped[e] = std::clamp(raw[e], -state.clamp, state.clamp);
  state.raw.push_back(std::move(raw));
  state.logits.push_back(std::move(clamped));
}

bool passes_clamp(const BeliefState& s, int t, std::size_t e) {
  const double r = s.raw[static_cast<std::size_t>(t)][e];
  return r >= -s.clamp && r <= s.clamp;
}

}  // namespace

std::vector<double> BeliefState::q(int t) const {
  const auto& z = logits.at(static_cast<std::size_t>(t));
  std::vector<double> out(z.size());
  for (std::size_t e = 0; e < z.size(); ++e) out[e] = logistic(z[e]);
  return out;
}

BeliefState mf_init(const LogPotentials& pot, double clamp) {
  BeliefState state;
  state.clamp = clamp;
  push_logits(state, pot.unary);
  return state;
}

double mf_second_order_field(std::span<const double> q_prev, const LogPotentials& pot,
                             std::size_t edge) {
  double f = 0.0;
  for (PartType t : kPartTypes) {
    const auto& list = pot.parts->of(t);
    const auto& s = pot.of(t);
    for (std::size_t p = 0; p < list.size(); ++p) {
      if (list[p].first_id == edge) f += q_prev[list[p].second_id] * s[p];
      else if (list[p].second_id == edge) f += q_prev[list[p].first_id] * s[p];
    }
  }
  return f;
}

std::vector<double> mf_field(std::span<const double> q_prev, const LogPotentials& pot) {
  std::vector<double> f(pot.unary.size(), 0.0);
  for (PartType t : kPartTypes) {
    const auto& list = pot.parts->of(t);
    const auto& s = pot.of(t);
    for (std::size_t p = 0; p < list.size(); ++p) {
      f[list[p].first_id] += q_prev[list[p].second_id] * s[p];
      f[list[p].second_id] += q_prev[list[p].first_id] * s[p];
    }
  }
  return f;
}

void mf_step(BeliefState& state, const LogPotentials& pot) {
  if (state.logits.empty()) throw InvalidArgument("mf_step: uninitialized state");
  const std::vector<double> q_prev = state.q(state.iterations());
  std::vector<double> raw = mf_field(q_prev, pot);
  for (std::size_t e = 0; e < raw.size(); ++e) raw[e] += pot.unary[e];
  push_logits(state, std::move(raw));
}

BeliefState mf_run(const LogPotentials& pot, int iterations, double clamp) {
  if (iterations < 1) throw InvalidArgument("mf_run: need at least one iteration");
  BeliefState state = mf_init(pot, clamp);
  for (int t = 0; t < iterations; ++t) mf_step(state, pot);
  return state;
}

PotentialGradients mf_backward_logits(std::span<const double> grad_logits,
                                      const BeliefState& state, const LogPotentials& pot) {
  if (state.logits.empty()) throw InvalidArgument("mf_backward: no trajectory recorded");
  const std::size_t n_edges = pot.unary.size();
  if (grad_logits.size() != n_edges) throw InvalidArgument("mf_backward: gradient size");
  PotentialGradients g = PotentialGradients::zeros(pot);

  const int T = state.iterations();
  // d loss / d raw logit at iteration t
  std::vector<double> g_raw(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e)
    g_raw[e] = passes_clamp(state, T, e) ? grad_logits[e] : 0.0;

  for (int t = T; t >= 1; --t) {
    const std::vector<double> q_prev = state.q(t - 1);
    std::vector<double> g_q(n_edges, 0.0);
    for (std::size_t e = 0; e < n_edges; ++e) g.unary[e] += g_raw[e];
    for (PartType type : kPartTypes) {
      const auto& list = pot.parts->of(type);
      const auto& s = pot.of(type);
      auto& gs = g.of(type);
      for (std::size_t p = 0; p < list.size(); ++p) {
        const std::size_t a = list[p].first_id;
        const std::size_t b = list[p].second_id;
        gs[p] += g_raw[a] * q_prev[b] + g_raw[b] * q_prev[a];
        g_q[b] += g_raw[a] * s[p];
        g_q[a] += g_raw[b] * s[p];
      }
    }
    for (std::size_t e = 0; e < n_edges; ++e)
      g_raw[e] = passes_clamp(state, t - 1, e) ? g_q[e] * q_prev[e] * (1.0 - q_prev[e]) : 0.0;
  }
  for (std::size_t e = 0; e < n_edges; ++e) g.unary[e] += g_raw[e];
  return g;
}

PotentialGradients mf_backward(std::span<const double> grad_q, const BeliefState& state,
                               const LogPotentials& pot) {
  if (state.logits.empty()) throw InvalidArgument("mf_backward: no trajectory recorded");
  const std::vector<double> q = state.posteriors();
  if (grad_q.size() != q.size()) throw InvalidArgument("mf_backward: gradient size");
  std::vector<double> g(q.size());
  for (std::size_t e = 0; e < q.size(); ++e) g[e] = grad_q[e] * q[e] * (1.0 - q[e]);
  return mf_backward_logits(g, state, pot);
}

}  // namespace sdp
