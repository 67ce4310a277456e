#pragma once

#include <vector>

#include "sdp/potentials.hpp"

namespace sdp {

inline constexpr double kDefaultLogitClamp = 30.0;

// Per-edge posterior logits for iterations 0..T; Q(1) = logistic(logit) and
// Q(0) = 1 - Q(1).
struct BeliefState {
  std::vector<std::vector<double>> logits;  // after clamping
  std::vector<std::vector<double>> raw;     // before clamping
  double clamp = kDefaultLogitClamp;

  int iterations() const { return static_cast<int>(logits.size()) - 1; }
  std::vector<double> q(int t) const;
  std::vector<double> posteriors() const { return q(iterations()); }
  const std::vector<double>& final_logits() const { return logits.back(); }
};

// Q^(0)(1) = logistic(s_edge).
BeliefState mf_init(const LogPotentials& pot, double clamp = kDefaultLogitClamp);

// Second-order field for one edge from the posteriors `q_prev` = Q^(t-1)(1):
// every part containing the edge contributes Q(other edge) * s_part.
double mf_second_order_field(std::span<const double> q_prev, const LogPotentials& pot,
                             std::size_t edge);
// The same for all edges at once.
std::vector<double> mf_field(std::span<const double> q_prev, const LogPotentials& pot);

// Appends iteration t from iteration t-1, all edges from the same snapshot.
void mf_step(BeliefState& state, const LogPotentials& pot);

BeliefState mf_run(const LogPotentials& pot, int iterations, double clamp = kDefaultLogitClamp);

// Reverse mode through every unrolled step. `grad_logits` is d loss / d
// final logit.
PotentialGradients mf_backward_logits(std::span<const double> grad_logits,
                                      const BeliefState& state, const LogPotentials& pot);
// Upstream given on Q^(T)(1).
PotentialGradients mf_backward(std::span<const double> grad_q, const BeliefState& state,
                               const LogPotentials& pot);

}  // namespace sdp
