#include "sdp/graph.hpp"

#include <string>
#include <utility>

#include "sdp/error.hpp"

namespace sdp {

CandidateEdgeSet::CandidateEdgeSet(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("empty sentence: candidate edges need n >= 1");
  const auto side = static_cast<std::size_t>(n + 1);
  lookup_.assign(side * side, -1);
  edges_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int h = 0; h <= n; ++h) {
    for (int d = 1; d <= n; ++d) {
      if (h == d) continue;
      lookup_[static_cast<std::size_t>(h) * side + static_cast<std::size_t>(d)] =
          static_cast<int>(edges_.size());
      edges_.push_back({h, d});
    }
  }
}

int CandidateEdgeSet::index(int head, int dep) const {
  if (head < 0 || head > n_ || dep < 0 || dep > n_) return -1;
  const auto side = static_cast<std::size_t>(n_ + 1);
  return lookup_[static_cast<std::size_t>(head) * side + static_cast<std::size_t>(dep)];
}

CandidateEdgeSet build_candidate_edges(int n) { return CandidateEdgeSet(n); }

const char* part_type_name(PartType t) {
  switch (t) {
    case PartType::Sibling: return "sib";
    case PartType::Coparent: return "cop";
    case PartType::Grandparent: return "gp";
  }
  return "?";
}

bool PartMask::enabled(PartType t) const {
  switch (t) {
    case PartType::Sibling: return sibling;
    case PartType::Coparent: return coparent;
    case PartType::Grandparent: return grandparent;
  }
  return false;
}

std::size_t PartList::total() const {
  return parts_[0].size() + parts_[1].size() + parts_[2].size();
}

PartList enumerate_parts(const CandidateEdgeSet& edges, PartMask mask) {
  const int n = edges.words();
  PartList parts;
  auto make = [&](Edge a, Edge b) {
    return Part{a, b, static_cast<std::size_t>(edges.index(a)),
                static_cast<std::size_t>(edges.index(b))};
  };

  if (mask.sibling) {
    auto& out = parts.of(PartType::Sibling);
    for (int i = 0; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) {
          if (j == i || k == i) continue;
          out.push_back(make({i, j}, {i, k}));
        }
  }
  if (mask.coparent) {
    auto& out = parts.of(PartType::Coparent);
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        for (int k = i + 1; k <= n; ++k) {
          if (i == j || k == j) continue;
          out.push_back(make({i, j}, {k, j}));
        }
  }
  if (mask.grandparent) {
    auto& out = parts.of(PartType::Grandparent);
    for (int i = 0; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (j == i) continue;
        for (int k = 1; k <= n; ++k) {
          if (k == i || k == j) continue;
          out.push_back(make({i, j}, {j, k}));
        }
      }
  }
  return parts;
}

std::optional<std::size_t> find_part(const PartList& parts, PartType t, Edge a, Edge b) {
  const auto& list = parts.of(t);
  for (std::size_t p = 0; p < list.size(); ++p) {
    const Part& part = list[p];
    if ((part.first == a && part.second == b) || (part.first == b && part.second == a)) return p;
  }
  return std::nullopt;
}

void SemGraph::add(int head, int dep, std::string label) {
  if (dep < 1 || dep > n_ || head < 0 || head > n_)
    throw InvalidArgument("edge (" + std::to_string(head) + "," + std::to_string(dep) +
                          ") out of range for n=" + std::to_string(n_));
  if (head == dep) throw InvalidArgument("self-loop on token " + std::to_string(dep));
  auto [it, inserted] = edges_.emplace(Edge{head, dep}, std::move(label));
  if (!inserted)
    throw InvalidArgument("duplicate edge (" + std::to_string(head) + "," +
                          std::to_string(dep) + ")");
}

SemGraph decode(int n, const std::map<Edge, double>& edge_prob,
                const std::map<Edge, std::string>& label_argmax, double threshold) {
  SemGraph graph(n);
  for (const auto& [edge, p] : edge_prob) {
    if (!(p > threshold)) continue;
    auto it = label_argmax.find(edge);
    if (it == label_argmax.end())
      throw InvalidArgument("no label for included edge (" + std::to_string(edge.head) + "," +
                            std::to_string(edge.dep) + ")");
    graph.add(edge.head, edge.dep, it->second);
  }
  return graph;
}

SemGraph decode(const CandidateEdgeSet& edges, std::span<const double> edge_prob,
                std::span<const std::string> labels, double threshold) {
  if (edge_prob.size() != edges.size() || labels.size() != edges.size())
    throw InvalidArgument("decode: inputs not aligned with candidate edges");
  SemGraph graph(edges.words());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!(edge_prob[e] > threshold)) continue;
    if (labels[e].empty())
      throw InvalidArgument("no label for included edge (" + std::to_string(edges[e].head) +
                            "," + std::to_string(edges[e].dep) + ")");
    graph.add(edges[e].head, edges[e].dep, labels[e]);
  }
  return graph;
}

bool has_cycle(const SemGraph& graph) {
  const int n = graph.words();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n + 1));
  for (const auto& [edge, label] : graph.edges()) {
    if (edge.head == 0) continue;  // nothing enters TOP
    out[static_cast<std::size_t>(edge.head)].push_back(edge.dep);
  }
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> color(static_cast<std::size_t>(n + 1), 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int root = 1; root <= n; ++root) {
    if (color[static_cast<std::size_t>(root)] != 0) continue;
    stack.push_back({root, 0});
    color[static_cast<std::size_t>(root)] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& succ = out[static_cast<std::size_t>(node)];
      if (next == succ.size()) {
        color[static_cast<std::size_t>(node)] = 2;
        stack.pop_back();
        continue;
      }
      const int v = succ[next++];
      if (color[static_cast<std::size_t>(v)] == 1) return true;
      if (color[static_cast<std::size_t>(v)] == 0) {
        color[static_cast<std::size_t>(v)] = 1;
        stack.push_back({v, 0});
      }
    }
  }
  return false;
}

}  // namespace sdp
