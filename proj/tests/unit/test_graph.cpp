#include <gtest/gtest.h>

#include <random>

#include "sdp/error.hpp"
#include "sdp/graph.hpp"
#include "support/test_support.hpp"

using namespace sdp;
using sdp::oracle::choose2;
using sdp::oracle::classify_edge_pairs;
using sdp::oracle::Triple;

TEST(CandidateEdges, SmallSentences) {
  EXPECT_EQ(build_candidate_edges(1).edges(), (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(build_candidate_edges(2).edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}, {2, 1}}));
  EXPECT_EQ(build_candidate_edges(5).size(), 25u);
  EXPECT_THROW(build_candidate_edges(0), InvalidArgument);
}

TEST(CandidateEdges, IndexRoundTrip) {
  const CandidateEdgeSet edges(6);
  for (std::size_t e = 0; e < edges.size(); ++e) EXPECT_EQ(edges.index(edges[e]), static_cast<int>(e));
  EXPECT_EQ(edges.index(3, 3), -1);
  EXPECT_EQ(edges.index(2, 0), -1);
  EXPECT_EQ(edges.index(7, 1), -1);
}

TEST(Parts, TwoWordSentence) {
  const CandidateEdgeSet edges(2);
  const PartList parts = enumerate_parts(edges);
  ASSERT_EQ(parts.sib().size(), 1u);
  ASSERT_EQ(parts.cop().size(), 2u);
  ASSERT_EQ(parts.gp().size(), 2u);
  EXPECT_EQ(parts.sib()[0].first, (Edge{0, 1}));
  EXPECT_EQ(parts.sib()[0].second, (Edge{0, 2}));
  EXPECT_TRUE(find_part(parts, PartType::Coparent, {0, 1}, {2, 1}));
  EXPECT_TRUE(find_part(parts, PartType::Coparent, {0, 2}, {1, 2}));
  EXPECT_TRUE(find_part(parts, PartType::Grandparent, {0, 1}, {1, 2}));
  EXPECT_TRUE(find_part(parts, PartType::Grandparent, {0, 2}, {2, 1}));
  EXPECT_FALSE(find_part(parts, PartType::Grandparent, {1, 2}, {2, 1}));
}

TEST(Parts, SingleWordHasNone) {
  EXPECT_EQ(enumerate_parts(CandidateEdgeSet(1)).total(), 0u);
}

TEST(Parts, CountsMatchFormulasAndBruteForce) {
  for (int n = 1; n <= 6; ++n) {
    const CandidateEdgeSet edges(n);
    const PartList parts = enumerate_parts(edges);
    EXPECT_EQ(static_cast<long>(parts.sib().size()), choose2(n) + n * choose2(n - 1)) << n;
    EXPECT_EQ(static_cast<long>(parts.cop().size()), n * choose2(n)) << n;
    EXPECT_EQ(static_cast<long>(parts.gp().size()), static_cast<long>(n) * (n - 1) * (n - 1)) << n;

    std::set<Triple> sib, cop, gp;
    for (const Part& p : parts.sib()) {
      EXPECT_EQ(p.first.head, p.second.head);
      EXPECT_LT(p.first.dep, p.second.dep);
      sib.insert({p.first.head, p.first.dep, p.second.dep});
    }
    for (const Part& p : parts.cop()) {
      EXPECT_EQ(p.first.dep, p.second.dep);
      EXPECT_LT(p.first.head, p.second.head);
      cop.insert({p.first.head, p.second.head, p.first.dep});
    }
    for (const Part& p : parts.gp()) {
      EXPECT_EQ(p.first.dep, p.second.head);
      gp.insert({p.first.head, p.first.dep, p.second.dep});
    }
    for (PartType t : kPartTypes)
      for (const Part& p : parts.of(t)) {
        EXPECT_EQ(edges.index(p.first), static_cast<int>(p.first_id));
        EXPECT_EQ(edges.index(p.second), static_cast<int>(p.second_id));
      }
    const auto oracle = classify_edge_pairs(n);
    EXPECT_EQ(sib, oracle.sib) << n;
    EXPECT_EQ(cop, oracle.cop) << n;
    EXPECT_EQ(gp, oracle.gp) << n;
  }
}

TEST(Parts, MaskDisablesTypes) {
  const CandidateEdgeSet edges(4);
  const PartList parts = enumerate_parts(edges, {true, false, true});
  EXPECT_FALSE(parts.sib().empty());
  EXPECT_TRUE(parts.cop().empty());
  EXPECT_FALSE(parts.gp().empty());
  EXPECT_EQ(enumerate_parts(edges, PartMask::none()).total(), 0u);
}

TEST(SemGraphTest, RejectsBadEdges) {
  SemGraph g(3);
  g.add(0, 1, "TOP");
  EXPECT_THROW(g.add(0, 1, "x"), InvalidArgument);
  EXPECT_THROW(g.add(2, 2, "x"), InvalidArgument);
  EXPECT_THROW(g.add(1, 0, "x"), InvalidArgument);
  EXPECT_THROW(g.add(1, 4, "x"), InvalidArgument);
}

TEST(Decode, Examples) {
  SemGraph g = decode(2, {{{0, 1}, 0.9}}, {{{0, 1}, "root"}});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edges().at({0, 1}), "root");

  EXPECT_EQ(decode(2, {{{0, 1}, 0.5}}, {{{0, 1}, "root"}}).size(), 0u);

  g = decode(2, {{{1, 2}, 0.51}, {{2, 1}, 0.51}}, {{{1, 2}, "a"}, {{2, 1}, "b"}});
  EXPECT_TRUE(g.contains(1, 2));
  EXPECT_TRUE(g.contains(2, 1));
  EXPECT_TRUE(has_cycle(g));

  EXPECT_THROW(decode(2, {{{0, 1}, 0.9}}, {}), InvalidArgument);
  // Excluded edges need no label.
  EXPECT_NO_THROW(decode(2, {{{0, 1}, 0.1}}, {}));
}

TEST(Decode, MonotoneInThreshold) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const CandidateEdgeSet edges(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(edges.size());
    for (auto& x : p) x = u(rng);
    std::vector<std::string> labels(edges.size(), "L");
    SemGraph prev = decode(edges, p, labels, 0.0);
    for (double t = 0.05; t <= 1.0; t += 0.05) {
      SemGraph next = decode(edges, p, labels, t);
      for (const auto& [e, l] : next.edges()) EXPECT_TRUE(prev.contains(e.head, e.dep));
      prev = next;
    }
  }
}

TEST(Cycles, Examples) {
  SemGraph a(2);
  a.add(0, 1, "TOP");
  a.add(1, 2, "x");
  EXPECT_FALSE(has_cycle(a));
  SemGraph b(2);
  b.add(1, 2, "x");
  b.add(2, 1, "x");
  EXPECT_TRUE(has_cycle(b));
  SemGraph c(3);
  c.add(1, 2, "x");
  c.add(2, 3, "x");
  c.add(3, 1, "x");
  EXPECT_TRUE(has_cycle(c));
}

TEST(Cycles, AgreesWithReachabilityClosure) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const double density = (1 + rng() % 4) * 0.08;
    std::bernoulli_distribution coin(density);
    SemGraph g(n);
    std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(n + 1, false));
    for (int h = 0; h <= n; ++h)
      for (int d = 1; d <= n; ++d)
        if (h != d && coin(rng)) {
          g.add(h, d, "x");
          reach[h][d] = true;
        }
    // Warshall closure; a cycle exists iff some node reaches itself.
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    bool cyclic = false;
    for (int i = 0; i <= n; ++i) cyclic = cyclic || reach[i][i];
    EXPECT_EQ(has_cycle(g), cyclic);
  }
}
