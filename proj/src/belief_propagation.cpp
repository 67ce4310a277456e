#include "sdp/belief_propagation.hpp"

#include <map>
#include <string>

#include "sdp/error.hpp"
#include "sdp/layers.hpp"

namespace sdp {
namespace {

// Merged message for Boolean variables. With cavity log-odds d of the sender
// and coupling s, the outgoing log-odds are
//   log[(Q0/M0 + e^s Q1/M1) / (Q0/M0 + Q1/M1)] = softplus(s + d) - softplus(d).
double message_ratio(double s, double d) { return softplus(s + d) - softplus(d); }

double part_score(const LogPotentials& pot, const MessageLink& link) {
  return pot.of(link.type)[link.part];
}

}  // namespace

std::vector<std::vector<Neighbor>> neighbor_sets(const CandidateEdgeSet& edges,
                                                 const PartList& parts) {
  std::vector<std::vector<Neighbor>> out(edges.size());
  std::map<std::pair<std::size_t, std::size_t>, PartType> seen;
  for (PartType t : kPartTypes) {
    const auto& list = parts.of(t);
    for (std::size_t p = 0; p < list.size(); ++p) {
      const std::size_t a = list[p].first_id;
      const std::size_t b = list[p].second_id;
      const auto key = std::minmax(a, b);
      auto [it, inserted] = seen.emplace(key, t);
      if (!inserted)
        throw InvalidArgument(std::string("edge pair joined by both ") +
                              part_type_name(it->second) + " and " + part_type_name(t) + " parts");
      out[a].push_back({b, t, p});
      out[b].push_back({a, t, p});
    }
  }
  return out;
}

std::vector<MessageLink> message_links(const PartList& parts) {
  std::vector<MessageLink> links;
  links.reserve(2 * parts.total());
  for (PartType t : kPartTypes) {
    const auto& list = parts.of(t);
    for (std::size_t p = 0; p < list.size(); ++p) {
      links.push_back({list[p].first_id, list[p].second_id, t, p});
      links.push_back({list[p].second_id, list[p].first_id, t, p});
    }
  }
  return links;
}

std::pair<double, double> MessageState::log_message(int t, std::size_t link) const {
  const double r = ratio.at(static_cast<std::size_t>(t))[link];
  return {-softplus(r), -softplus(-r)};
}

std::vector<double> MessageState::q(int t) const {
  const auto& b = belief.at(static_cast<std::size_t>(t));
  std::vector<double> out(b.size());
  for (std::size_t e = 0; e < b.size(); ++e) out[e] = logistic(b[e]);
  return out;
}

MessageState lbp_init(const LogPotentials& pot, double damping) {
  if (damping < 0.0 || damping >= 1.0) throw InvalidArgument("lbp: damping must be in [0, 1)");
  MessageState state;
  state.damping = damping;
  state.links = message_links(*pot.parts);
  state.ratio.emplace_back(state.links.size(), 0.0);
  state.belief.push_back(pot.unary);
  return state;
}

void lbp_step(MessageState& state, const LogPotentials& pot) {
  if (state.belief.empty()) throw InvalidArgument("lbp_step: uninitialized state");
  const auto& r_prev = state.ratio.back();
  const auto& b_prev = state.belief.back();
  std::vector<double> r(state.links.size());
  for (std::size_t m = 0; m < state.links.size(); ++m) {
    const MessageLink& link = state.links[m];
    const double cavity = b_prev[link.from] - r_prev[m ^ 1];
    const double fresh = message_ratio(part_score(pot, link), cavity);
    r[m] = (1.0 - state.damping) * fresh + state.damping * r_prev[m];
  }
  std::vector<double> b = pot.unary;
  for (std::size_t m = 0; m < state.links.size(); ++m) b[state.links[m].to] += r[m];
  state.ratio.push_back(std::move(r));
  state.belief.push_back(std::move(b));
}

MessageState lbp_run(const LogPotentials& pot, int iterations, double damping) {
  if (iterations < 1) throw InvalidArgument("lbp_run: need at least one iteration");
  MessageState state = lbp_init(pot, damping);
  for (int t = 0; t < iterations; ++t) lbp_step(state, pot);
  return state;
}

PotentialGradients lbp_backward_logits(std::span<const double> grad_logits,
                                       const MessageState& state, const LogPotentials& pot) {
  if (state.belief.empty()) throw InvalidArgument("lbp_backward: no trajectory recorded");
  const std::size_t n_edges = pot.unary.size();
  if (grad_logits.size() != n_edges) throw InvalidArgument("lbp_backward: gradient size");
  PotentialGradients g = PotentialGradients::zeros(pot);
  const std::size_t n_links = state.links.size();
  const double keep = 1.0 - state.damping;

  std::vector<double> g_belief(grad_logits.begin(), grad_logits.end());
  std::vector<double> g_ratio(n_links, 0.0);  // d loss / d ratio^t, excluding the belief path
  for (int t = state.iterations(); t >= 1; --t) {
    const auto ut = static_cast<std::size_t>(t);
    // belief^t = unary + sum of incoming ratio^t
    for (std::size_t e = 0; e < n_edges; ++e) g.unary[e] += g_belief[e];
    for (std::size_t m = 0; m < n_links; ++m) g_ratio[m] += g_belief[state.links[m].to];

    // ratio^t[m] = keep * f(s, belief^{t-1}[from] - ratio^{t-1}[m^1]) + damping * ratio^{t-1}[m]
    const auto& r_prev = state.ratio[ut - 1];
    const auto& b_prev = state.belief[ut - 1];
    std::vector<double> g_belief_prev(n_edges, 0.0);
    std::vector<double> g_ratio_prev(n_links, 0.0);
    for (std::size_t m = 0; m < n_links; ++m) {
      const double gm = g_ratio[m];
      if (gm == 0.0) continue;
      const MessageLink& link = state.links[m];
      const double s = part_score(pot, link);
      const double d = b_prev[link.from] - r_prev[m ^ 1];
      const double ds = logistic(s + d);
      const double dd = ds - logistic(d);
      g.of(link.type)[link.part] += keep * gm * ds;
      g_belief_prev[link.from] += keep * gm * dd;
      g_ratio_prev[m ^ 1] -= keep * gm * dd;
      g_ratio_prev[m] += state.damping * gm;
    }
    g_belief = std::move(g_belief_prev);
    g_ratio = std::move(g_ratio_prev);
  }
  // belief^0 = unary; ratio^0 is constant.
  for (std::size_t e = 0; e < n_edges; ++e) g.unary[e] += g_belief[e];
  return g;
}

PotentialGradients lbp_backward(std::span<const double> grad_q, const MessageState& state,
                                const LogPotentials& pot) {
  if (state.belief.empty()) throw InvalidArgument("lbp_backward: no trajectory recorded");
  const std::vector<double> q = state.posteriors();
  if (grad_q.size() != q.size()) throw InvalidArgument("lbp_backward: gradient size");
  std::vector<double> g(q.size());
  for (std::size_t e = 0; e < q.size(); ++e) g[e] = grad_q[e] * q[e] * (1.0 - q[e]);
  return lbp_backward_logits(g, state, pot);
}

}  // namespace sdp
