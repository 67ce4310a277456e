#pragma once

// Independent oracles and fixtures shared by the unit and acceptance suites.
// Nothing here calls into the code path it is used to check.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sdp/graph.hpp"
#include "sdp/model.hpp"
#include "sdp/potentials.hpp"
#include "sdp/sdp_format.hpp"

namespace sdp::oracle {

// Part triples keyed the same way as enumerate_parts: sib (i,j,k), cop (i,k,j),
// gp (i,j,k).
using Triple = std::tuple<int, int, int>;

struct PartSets {
  std::set<Triple> sib, cop, gp;
};

// Classifies every unordered pair of candidate edges by brute force.
inline PartSets classify_edge_pairs(int n) {
  std::vector<Edge> all;
  for (int h = 0; h <= n; ++h)
    for (int d = 1; d <= n; ++d)
      if (h != d) all.push_back({h, d});
  PartSets out;
  for (std::size_t x = 0; x < all.size(); ++x)
    for (std::size_t y = x + 1; y < all.size(); ++y) {
      const Edge a = all[x];
      const Edge b = all[y];
      if (a.head == b.head) {
        out.sib.insert({a.head, std::min(a.dep, b.dep), std::max(a.dep, b.dep)});
      } else if (a.dep == b.dep) {
        out.cop.insert({std::min(a.head, b.head), std::max(a.head, b.head), a.dep});
      } else if (a.dep == b.head && b.dep != a.head) {
        out.gp.insert({a.head, a.dep, b.dep});
      } else if (b.dep == a.head && a.dep != b.head) {
        out.gp.insert({b.head, b.dep, a.dep});
      }
    }
  return out;
}

inline long choose2(long m) { return m < 2 ? 0 : m * (m - 1) / 2; }

// Random log potentials: unaries ~ N(0, unary_std^2), parts ~ N(0, coupling^2).
inline LogPotentials random_potentials(const CandidateEdgeSet& edges, const PartList& parts,
                                       std::mt19937_64& rng, double coupling,
                                       double unary_std = 1.0) {
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> unary(edges.size());
  for (auto& u : unary) u = unary_std * unit(rng);
  std::array<std::vector<double>, 3> binary;
  for (PartType t : kPartTypes) {
    binary[static_cast<std::size_t>(t)].resize(parts.of(t).size());
    for (auto& s : binary[static_cast<std::size_t>(t)]) s = coupling * unit(rng);
  }
  return assemble(std::move(unary), std::move(binary), edges, parts);
}

// Second exact enumerator: recursive over edges from the last id down, scoring
// each assignment as a product of potentials (not a sum of logs).
struct EnumeratedMarginals {
  double partition = 0.0;
  std::vector<double> marginals;
};

inline EnumeratedMarginals enumerate_by_products(const LogPotentials& pot) {
  const std::size_t E = pot.unary.size();
  std::vector<bool> x(E, false);
  EnumeratedMarginals out;
  out.marginals.assign(E, 0.0);
  std::function<void(std::size_t)> rec = [&](std::size_t remaining) {
    if (remaining == 0) {
      double w = 1.0;
      for (std::size_t e = 0; e < E; ++e) w *= x[e] ? std::exp(pot.unary[e]) : 1.0;
      for (PartType t : kPartTypes) {
        const auto& list = pot.parts->of(t);
        for (std::size_t p = 0; p < list.size(); ++p)
          if (x[list[p].first_id] && x[list[p].second_id]) w *= std::exp(pot.of(t)[p]);
      }
      out.partition += w;
      for (std::size_t e = 0; e < E; ++e)
        if (x[e]) out.marginals[e] += w;
      return;
    }
    const std::size_t e = remaining - 1;
    x[e] = true;
    rec(e);
    x[e] = false;
    rec(e);
  };
  rec(E);
  for (auto& m : out.marginals) m /= out.partition;
  return out;
}

// Two-edge instance: edges (0,1) and (0,2) of a two-word sentence joined by a
// single sibling part with score `coupling`; every other edge is isolated.
struct PairInstance {
  CandidateEdgeSet edges{2};
  PartList parts;
  LogPotentials pot;
  std::size_t a = 0, b = 0;

  explicit PairInstance(double coupling, double unary = 0.0) {
    a = static_cast<std::size_t>(edges.index(0, 1));
    b = static_cast<std::size_t>(edges.index(0, 2));
    parts.of(PartType::Sibling).push_back(Part{{0, 1}, {0, 2}, a, b});
    std::vector<double> u(edges.size(), unary);
    pot = assemble(u, {std::vector<double>{coupling}, {}, {}}, edges, parts);
  }
  PairInstance(const PairInstance&) = delete;
  PairInstance& operator=(const PairInstance&) = delete;
};

inline Sentence make_sentence(const std::vector<std::string>& forms,
                              const std::vector<std::string>& tags) {
  Sentence s;
  for (std::size_t i = 0; i < forms.size(); ++i) s.words.push_back({forms[i], forms[i], tags[i]});
  return s;
}

// Random annotated corpus exercising cycles, multi-predicate rows and
// sentences without a top.
inline std::vector<AnnotatedSentence> random_corpus(std::size_t count, std::mt19937_64& rng,
                                                    int max_len = 8) {
  const std::vector<std::string> forms = {"the", "cat", "sat", "on", "mat", "dog", "ran", "fast"};
  const std::vector<std::string> tags = {"DT", "NN", "VBD", "IN", "JJ"};
  const std::vector<std::string> labels = {"ARG1", "ARG2", "BV", "loc", "mod"};
  std::uniform_int_distribution<int> len(1, max_len);
  std::bernoulli_distribution coin(0.3);
  std::vector<AnnotatedSentence> out;
  for (std::size_t s = 0; s < count; ++s) {
    AnnotatedSentence item;
    const int n = len(rng);
    for (int i = 0; i < n; ++i)
      item.sentence.words.push_back({forms[rng() % forms.size()], forms[rng() % forms.size()],
                                     tags[rng() % tags.size()]});
    item.graph = SemGraph(n);
    if (s % 5 != 0) item.graph.add(0, 1 + static_cast<int>(rng() % static_cast<unsigned>(n)), kTopLabel);
    for (int h = 1; h <= n; ++h)
      for (int d = 1; d <= n; ++d)
        if (h != d && coin(rng)) item.graph.add(h, d, labels[rng() % labels.size()]);
    if (n >= 2 && s % 7 == 3 && !item.graph.contains(1, 2) && !item.graph.contains(2, 1)) {
      item.graph.add(1, 2, "ARG1");
      item.graph.add(2, 1, "ARG2");
    }
    out.push_back(std::move(item));
  }
  return out;
}

// Small dims for gradient checks and fast unit tests.
inline ModelConfig tiny_config() {
  ModelConfig c;
  c.word_dim = 4;
  c.pos_dim = 3;
  c.encoder_layers = 1;
  c.encoder_hidden = 3;
  c.unary_dim = 5;
  c.binary_dim = 4;
  c.binary_init_std = 0.5;
  return c;
}

inline const std::vector<AnnotatedSentence>& tiny_corpus() {
  static const std::vector<AnnotatedSentence> corpus = [] {
    std::vector<AnnotatedSentence> out(2);
    out[0].sentence = make_sentence({"the", "cat", "sat"}, {"DT", "NN", "VB"});
    out[0].graph = SemGraph(3);
    out[0].graph.add(0, 3, kTopLabel);
    out[0].graph.add(3, 2, "ARG1");
    out[0].graph.add(2, 1, "BV");
    out[1].sentence = make_sentence({"a", "dog", "ran"}, {"DT", "NN", "VB"});
    out[1].graph = SemGraph(3);
    out[1].graph.add(0, 3, kTopLabel);
    out[1].graph.add(3, 2, "ARG1");
    out[1].graph.add(2, 1, "BV");
    out[1].graph.add(1, 3, "ARG2");
    return out;
  }();
  return corpus;
}

// Central finite difference of f at x: (f(x+h) - f(x-h)) / 2h.
inline double central_difference(const std::function<double()>& f, double& x, double h) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

}  // namespace sdp::oracle
