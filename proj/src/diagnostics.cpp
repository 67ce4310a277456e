#include "sdp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sdp/belief_propagation.hpp"
#include "sdp/error.hpp"
#include "sdp/exact.hpp"
#include "sdp/mean_field.hpp"

namespace sdp {
namespace {

nlohmann::json edge_json(const CandidateEdgeSet& edges, std::size_t e) {
  return nlohmann::json::array({edges[e].head, edges[e].dep});
}

}  // namespace

nlohmann::json message_trace(const LogPotentials& pot, const InferenceConfig& config) {
  const CandidateEdgeSet& edges = *pot.edges;
  const InferenceResult result = run_inference(pot, config);
  nlohmann::json out;
  out["engine"] = inference_name(config.kind);
  out["iterations"] = config.iterations;
  out["n"] = edges.words();
  nlohmann::json edge_list = nlohmann::json::array();
  for (std::size_t e = 0; e < edges.size(); ++e) edge_list.push_back(edge_json(edges, e));
  out["edges"] = std::move(edge_list);

  nlohmann::json steps = nlohmann::json::array();
  if (const auto* mf = std::get_if<BeliefState>(&result.trajectory)) {
    const auto neighbors = neighbor_sets(edges, *pot.parts);
    for (int t = 0; t <= mf->iterations(); ++t) {
      nlohmann::json step = {{"t", t}, {"q", mf->q(t)}, {"messages", nlohmann::json::array()}};
      if (t > 0) {
        const auto prev = mf->q(t - 1);
        for (std::size_t a = 0; a < edges.size(); ++a)
          for (const auto& nb : neighbors[a])
            step["messages"].push_back({{"from", edge_json(edges, nb.edge)},
                                        {"to", edge_json(edges, a)},
                                        {"part", part_type_name(nb.type)},
                                        {"value", prev[nb.edge] * pot.of(nb.type)[nb.part]}});
      }
      steps.push_back(std::move(step));
    }
  } else {
    const auto& bp = std::get<MessageState>(result.trajectory);
    for (int t = 0; t <= bp.iterations(); ++t) {
      nlohmann::json step = {{"t", t}, {"q", bp.q(t)}, {"messages", nlohmann::json::array()}};
      if (t > 0)
        for (std::size_t m = 0; m < bp.links.size(); ++m) {
          const auto& link = bp.links[m];
          step["messages"].push_back({{"from", edge_json(edges, link.from)},
                                      {"to", edge_json(edges, link.to)},
                                      {"part", part_type_name(link.type)},
                                      {"value", bp.ratio[static_cast<std::size_t>(t)][m]}});
        }
      steps.push_back(std::move(step));
    }
  }
  out["trace"] = std::move(steps);
  return out;
}

std::vector<OracleErrorRow> oracle_compare(const OracleCompareConfig& config) {
  if (config.n < 1) throw InvalidArgument("oracle-compare: n must be positive");
  if (config.instances < 1) throw InvalidArgument("oracle-compare: instances must be positive");
  const CandidateEdgeSet edges(config.n);
  if (edges.size() > kMaxExactEdges)
    throw InvalidArgument("oracle-compare: n=" + std::to_string(config.n) + " gives " +
                          std::to_string(edges.size()) + " edges, above the enumeration cap of " +
                          std::to_string(kMaxExactEdges));
  const PartList parts = enumerate_parts(edges);

  std::vector<OracleErrorRow> rows;
  for (auto kind : {InferenceKind::MeanField, InferenceKind::BeliefPropagation})
    for (int t : config.iterations) rows.push_back({kind, t, 0.0, 0.0});

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double count = 0.0;
  for (int i = 0; i < config.instances; ++i) {
    std::vector<double> unary(edges.size());
    for (double& u : unary) u = config.unary_scale * normal(rng);
    std::array<std::vector<double>, 3> binary;
    for (int t = 0; t < 3; ++t) {
      binary[static_cast<std::size_t>(t)].resize(parts.of(static_cast<PartType>(t)).size());
      for (double& b : binary[static_cast<std::size_t>(t)]) b = config.coupling_scale * normal(rng);
    }
    const LogPotentials pot = assemble(unary, binary, edges, parts);
    const auto exact = exact_infer(pot).marginals;
    for (auto& row : rows) {
      const auto q = run_inference(pot, {row.kind, row.iterations}).posteriors();
      for (std::size_t e = 0; e < q.size(); ++e) {
        const double err = std::abs(q[e] - exact[e]);
        row.mean_abs_error += err;
        row.max_abs_error = std::max(row.max_abs_error, err);
      }
    }
    count += static_cast<double>(edges.size());
  }
  for (auto& row : rows) row.mean_abs_error /= count;
  return rows;
}

nlohmann::json oracle_compare_json(const OracleCompareConfig& config, const std::vector<OracleErrorRow>& rows) {
  nlohmann::json j = {{"instances", config.instances},
                      {"n", config.n},
                      {"coupling_scale", config.coupling_scale},
                      {"unary_scale", config.unary_scale},
                      {"seed", config.seed},
                      {"rows", nlohmann::json::array()}};
  for (const auto& r : rows)
    j["rows"].push_back({{"engine", inference_name(r.kind)},
                         {"iterations", r.iterations},
                         {"mean_abs_error", r.mean_abs_error},
                         {"max_abs_error", r.max_abs_error}});
  return j;
}

}  // namespace sdp
