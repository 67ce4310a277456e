#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "sdp/belief_propagation.hpp"
#include "sdp/error.hpp"
#include "sdp/exact.hpp"
#include "sdp/inference.hpp"
#include "sdp/layers.hpp"
#include "sdp/mean_field.hpp"
#include "sdp/potentials.hpp"
#include "support/test_support.hpp"

using namespace sdp;
using sdp::oracle::PairInstance;
using sdp::oracle::random_potentials;

namespace {

std::vector<bool> bits(std::size_t n, unsigned mask) {
  std::vector<bool> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1U;
  return x;
}

// A permutation of word indices 1..n (TOP fixed) applied to a potential set.
LogPotentials permute(const LogPotentials& pot, const std::vector<int>& perm,
                      const CandidateEdgeSet& edges, const PartList& parts) {
  auto map = [&](Edge e) { return Edge{e.head == 0 ? 0 : perm[e.head], perm[e.dep]}; };
  std::vector<double> unary(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    unary[static_cast<std::size_t>(edges.index(map(edges[e])))] = pot.unary[e];
  std::array<std::vector<double>, 3> binary;
  for (PartType t : kPartTypes) {
    const auto& list = parts.of(t);
    auto& out = binary[static_cast<std::size_t>(t)];
    out.assign(list.size(), 0.0);
    for (std::size_t p = 0; p < list.size(); ++p)
      out[*find_part(parts, t, map(list[p].first), map(list[p].second))] = pot.of(t)[p];
  }
  return assemble(std::move(unary), std::move(binary), edges, parts);
}

}  // namespace

TEST(Potentials, Definition) {
  const CandidateEdgeSet edges(2);
  const PartList parts = enumerate_parts(edges);
  ScoreSet s = ScoreSet::zeros(edges, parts, 1);
  s.edge[0] = 2.0;
  s.of(PartType::Sibling)[0] = -1.5;
  const LogPotentials pot = assemble(s, edges, parts);
  EXPECT_EQ(pot.log_unary(0, true), 2.0);
  EXPECT_EQ(pot.log_unary(0, false), 0.0);
  EXPECT_DOUBLE_EQ(std::exp(pot.log_unary(0, true)), std::exp(2.0));
  EXPECT_EQ(pot.log_binary(PartType::Sibling, 0, true, true), -1.5);
  EXPECT_EQ(pot.log_binary(PartType::Sibling, 0, true, false), 0.0);
  EXPECT_EQ(pot.log_binary(PartType::Sibling, 0, false, true), 0.0);
  EXPECT_EQ(pot.log_binary(PartType::Sibling, 0, false, false), 0.0);

  s.of(PartType::Coparent).pop_back();
  EXPECT_THROW(assemble(s, edges, parts), InvalidArgument);
  s = ScoreSet::zeros(edges, parts, 1);
  s.edge[1] = std::nan("");
  EXPECT_THROW(assemble(s, edges, parts), NumericError);
}

TEST(Potentials, ZeroScoresAreUniform) {
  const CandidateEdgeSet edges(2);
  const PartList parts = enumerate_parts(edges);
  const ExactResult r = exact_infer(assemble(ScoreSet::zeros(edges, parts, 1), edges, parts));
  for (double m : r.marginals) EXPECT_NEAR(m, 0.5, 1e-15);
  EXPECT_NEAR(r.log_partition, 4 * std::log(2.0), 1e-12);
}

TEST(Potentials, JointScoreMatchesPotentialProduct) {
  std::mt19937_64 rng(21);
  const CandidateEdgeSet edges(3);
  const PartList parts = enumerate_parts(edges);
  for (int trial = 0; trial < 10; ++trial) {
    const LogPotentials pot = random_potentials(edges, parts, rng, 1.0);
    for (unsigned mask = 0; mask < (1U << edges.size()); mask += 37) {
      const auto x = bits(edges.size(), mask);
      double product = 1.0;
      for (std::size_t e = 0; e < edges.size(); ++e) product *= std::exp(pot.log_unary(e, x[e]));
      for (PartType t : kPartTypes)
        for (std::size_t p = 0; p < parts.of(t).size(); ++p)
          product *= std::exp(pot.log_binary(t, p, x[parts.of(t)[p].first_id], x[parts.of(t)[p].second_id]));
      EXPECT_NEAR(joint_log_score(pot, x), std::log(product), 1e-10);
    }
  }
}

TEST(Exact, Examples) {
  {
    const CandidateEdgeSet edges(1);
    const PartList parts;
    const auto r = exact_infer(assemble({0.0}, {}, edges, parts));
    EXPECT_NEAR(r.marginals[0], 0.5, 1e-15);
    EXPECT_NEAR(r.log_partition, std::log(2.0), 1e-15);
    EXPECT_EQ(exact_map(assemble({1.0}, {}, edges, parts)), std::vector<bool>{true});
    EXPECT_EQ(exact_map(assemble({-1.0}, {}, edges, parts)), std::vector<bool>{false});
  }
  {
    PairInstance pair(std::log(2.0));
    const auto r = exact_infer(pair.pot);
    EXPECT_NEAR(r.marginals[pair.a], 0.6, 1e-14);
    EXPECT_NEAR(r.marginals[pair.b], 0.6, 1e-14);
    // Four configurations of the pair {1,1,1,2}; the two free edges contribute 2 each.
    EXPECT_NEAR(r.log_partition, std::log(5.0) + 2 * std::log(2.0), 1e-13);
  }
  {
    PairInstance pair(1.0, -0.1);
    const auto x = exact_map(pair.pot);
    EXPECT_TRUE(x[pair.a]);
    EXPECT_TRUE(x[pair.b]);
    EXPECT_EQ(std::count(x.begin(), x.end(), true), 2);
  }
  EXPECT_THROW(exact_infer(assemble(std::vector<double>(25, 0.0), {}, CandidateEdgeSet(5), PartList{})),
               InvalidArgument);
}

TEST(Exact, MapTieBreakIsLexicographic) {
  const CandidateEdgeSet edges(2);
  const PartList parts;
  // Every assignment scores 0; the all-off assignment comes first.
  const auto x = exact_map(assemble(std::vector<double>(4, 0.0), {}, edges, parts));
  EXPECT_EQ(std::count(x.begin(), x.end(), true), 0);
}

TEST(Exact, AgreesWithSecondEnumerator) {
  std::mt19937_64 rng(33);
  for (int n = 1; n <= 4; ++n) {
    const CandidateEdgeSet edges(n);
    const PartList parts = enumerate_parts(edges);
    for (int trial = 0; trial < (n == 4 ? 2 : 10); ++trial) {
      const LogPotentials pot = random_potentials(edges, parts, rng, 0.7);
      const auto a = exact_infer(pot);
      const auto b = oracle::enumerate_by_products(pot);
      EXPECT_NEAR(a.log_partition, std::log(b.partition), 1e-10);
      for (std::size_t e = 0; e < edges.size(); ++e) EXPECT_NEAR(a.marginals[e], b.marginals[e], 1e-12);
      EXPECT_NEAR(a.map_score, joint_log_score(pot, a.map_assignment), 1e-12);
      EXPECT_LE(a.map_score, a.log_partition);
    }
  }
}

TEST(MeanField, InitExamples) {
  const CandidateEdgeSet edges(2);
  const PartList parts;
  const LogPotentials pot =
      assemble({0.0, std::log(3.0), -1e6, 1e6}, {}, edges, parts);
  const auto q = mf_init(pot).q(0);
  EXPECT_DOUBLE_EQ(q[0], 0.5);
  EXPECT_NEAR(q[1], 0.75, 1e-15);
  // logistic(-30) is about 9.4e-14.
  EXPECT_DOUBLE_EQ(q[2], logistic(-kDefaultLogitClamp));
  EXPECT_GT(q[2], 9e-14);
  EXPECT_LT(q[3], 1.0);
  EXPECT_EQ(mf_init(pot).final_logits()[2], -kDefaultLogitClamp);
}

TEST(MeanField, FieldExamples) {
  const CandidateEdgeSet edges(2);
  const PartList parts = enumerate_parts(edges);
  ScoreSet s = ScoreSet::zeros(edges, parts, 1);
  const LogPotentials zero = assemble(s, edges, parts);
  const std::vector<double> half(4, 0.5);
  for (std::size_t e = 0; e < 4; ++e) EXPECT_EQ(mf_second_order_field(half, zero, e), 0.0);

  PairInstance pair(2.0);
  std::vector<double> q(4, 0.0);
  q[pair.b] = 0.5;
  EXPECT_DOUBLE_EQ(mf_second_order_field(q, pair.pot, pair.a), 1.0);

  // Hand evaluation for edge (0,1) at n=2: sib with (0,2), cop with (2,1),
  // gp with (1,2) where (0,1) is the grandparent edge. Nothing enters TOP.
  std::mt19937_64 rng(4);
  const LogPotentials pot = random_potentials(edges, parts, rng, 1.0);
  std::vector<double> qq = {0.1, 0.7, 0.3, 0.9};
  const double s_sib = pot.of(PartType::Sibling)[*find_part(parts, PartType::Sibling, {0, 1}, {0, 2})];
  const double s_cop = pot.of(PartType::Coparent)[*find_part(parts, PartType::Coparent, {0, 1}, {2, 1})];
  const double s_gp = pot.of(PartType::Grandparent)[*find_part(parts, PartType::Grandparent, {0, 1}, {1, 2})];
  const double hand = qq[1] * s_sib + qq[3] * s_cop + qq[2] * s_gp;
  EXPECT_NEAR(mf_second_order_field(qq, pot, 0), hand, 1e-15);
  // Edge (1,2): cop with (0,2), gp as child of (0,1), gp as parent of (2,1) does not exist (k = i).
  const double s_cop2 = pot.of(PartType::Coparent)[*find_part(parts, PartType::Coparent, {1, 2}, {0, 2})];
  EXPECT_NEAR(mf_second_order_field(qq, pot, 2), qq[1] * s_cop2 + qq[0] * s_gp, 1e-15);
  const auto all = mf_field(qq, pot);
  for (std::size_t e = 0; e < 4; ++e) EXPECT_DOUBLE_EQ(all[e], mf_second_order_field(qq, pot, e));
}

TEST(MeanField, TwoEdgeFixedPoint) {
  PairInstance pair(std::log(2.0));
  const BeliefState st = mf_run(pair.pot, 40);
  const double rounded[] = {0.5, 0.5858, 0.6001, 0.6025};
  // Scalar oracle: q <- logistic(q ln 2), starting from logistic(0).
  double q = 0.5;
  for (int t = 0; t <= 40; ++t) {
    EXPECT_NEAR(st.q(t)[pair.a], q, 1e-14) << t;
    EXPECT_NEAR(st.q(t)[pair.b], q, 1e-14) << t;
    if (t < 4) EXPECT_NEAR(st.q(t)[pair.a], rounded[t], 1e-3) << t;
    q = 1.0 / (1.0 + std::exp(-q * std::log(2.0)));
  }
  EXPECT_NEAR(st.posteriors()[pair.a], 0.603, 1e-3);
}

TEST(MeanField, RunEqualsInitPlusSteps) {
  std::mt19937_64 rng(8);
  const CandidateEdgeSet edges(3);
  const PartList parts = enumerate_parts(edges);
  const LogPotentials pot = random_potentials(edges, parts, rng, 1.0);
  BeliefState manual = mf_init(pot);
  mf_step(manual, pot);
  EXPECT_EQ(mf_run(pot, 1).logits, manual.logits);
  mf_step(manual, pot);
  mf_step(manual, pot);
  EXPECT_EQ(mf_run(pot, 3).logits, manual.logits);
}

TEST(MeanField, ClampBoundsLogits) {
  PairInstance pair(200.0, 5.0);
  const BeliefState st = mf_run(pair.pot, 3);
  for (const auto& step : st.logits)
    for (double z : step) EXPECT_LE(std::abs(z), kDefaultLogitClamp);
  EXPECT_GT(st.raw[1][pair.a], kDefaultLogitClamp);
}

TEST(MeanField, NormalizationAndEquivariance) {
  std::mt19937_64 rng(12);
  const CandidateEdgeSet edges(4);
  const PartList parts = enumerate_parts(edges);
  std::vector<int> perm = {0, 3, 1, 4, 2};
  for (int trial = 0; trial < 5; ++trial) {
    const LogPotentials pot = random_potentials(edges, parts, rng, 0.5);
    const LogPotentials moved = permute(pot, perm, edges, parts);
    for (InferenceKind kind : {InferenceKind::MeanField, InferenceKind::BeliefPropagation}) {
      const InferenceResult a = run_inference(pot, {kind, 3});
      const InferenceResult b = run_inference(moved, {kind, 3});
      for (int t = 0; t <= 3; ++t) {
        const auto qa = a.q(t);
        const auto qb = b.q(t);
        for (std::size_t e = 0; e < edges.size(); ++e) {
          const Edge ed = edges[e];
          const int me = edges.index(ed.head == 0 ? 0 : perm[ed.head], perm[ed.dep]);
          EXPECT_NEAR(qa[e], qb[static_cast<std::size_t>(me)], 1e-12);
          EXPECT_GE(qa[e], 0.0);
          EXPECT_LE(qa[e], 1.0);
          const double q0 = 1.0 - qa[e];
          EXPECT_NEAR(q0 + qa[e], 1.0, 1e-15);
        }
      }
    }
  }
}

TEST(Engines, ZeroCouplingIsExact) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 5; ++n) {
    const CandidateEdgeSet edges(n);
    const PartList parts = enumerate_parts(edges);
    const LogPotentials pot = random_potentials(edges, parts, rng, 0.0, 2.0);
    for (int T = 1; T <= 3; ++T)
      for (InferenceKind kind : {InferenceKind::MeanField, InferenceKind::BeliefPropagation}) {
        const auto q = run_inference(pot, {kind, T}).posteriors();
        for (std::size_t e = 0; e < edges.size(); ++e) EXPECT_NEAR(q[e], logistic(pot.unary[e]), 1e-12);
      }
  }
}

TEST(Engines, ZeroCouplingGradientIsSigmoidSlope) {
  std::mt19937_64 rng(2);
  const CandidateEdgeSet edges(3);
  const PartList parts = enumerate_parts(edges);
  const LogPotentials pot = random_potentials(edges, parts, rng, 0.0);
  for (std::size_t probe = 0; probe < edges.size(); probe += 4) {
    std::vector<double> up(edges.size(), 0.0);
    up[probe] = 1.0;
    const auto mf = mf_backward(up, mf_run(pot, 3), pot);
    const auto bp = lbp_backward(up, lbp_run(pot, 3), pot);
    const double s = logistic(pot.unary[probe]);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      EXPECT_NEAR(mf.unary[e], e == probe ? s * (1 - s) : 0.0, 1e-14);
      EXPECT_NEAR(bp.unary[e], e == probe ? s * (1 - s) : 0.0, 1e-14);
    }
    const std::vector<double> zeros(edges.size(), 0.0);
    for (const auto& g : {mf_backward(zeros, mf_run(pot, 3), pot), lbp_backward(zeros, lbp_run(pot, 3), pot)}) {
      for (double v : g.unary) EXPECT_EQ(v, 0.0);
      for (const auto& list : g.binary)
        for (double v : list) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Engines, WeakCouplingTracksOracle) {
  std::mt19937_64 rng(2718);
  for (int n = 2; n <= 4; ++n) {
    const CandidateEdgeSet edges(n);
    const PartList parts = enumerate_parts(edges);
    const int instances = n == 4 ? 5 : 40;
    for (InferenceKind kind : {InferenceKind::MeanField, InferenceKind::BeliefPropagation}) {
      double max_err = 0.0, sum = 0.0;
      std::size_t count = 0;
      std::mt19937_64 local(rng());
      for (int i = 0; i < instances; ++i) {
        const LogPotentials pot = random_potentials(edges, parts, local, 0.1);
        const auto exact = exact_infer(pot).marginals;
        const auto q = run_inference(pot, {kind, 3}).posteriors();
        for (std::size_t e = 0; e < edges.size(); ++e) {
          const double err = std::abs(q[e] - exact[e]);
          max_err = std::max(max_err, err);
          sum += err;
          ++count;
        }
      }
      EXPECT_LE(max_err, 0.05) << inference_name(kind) << " n=" << n;
      EXPECT_LE(sum / static_cast<double>(count), 0.02) << inference_name(kind) << " n=" << n;
    }
  }
}

TEST(Engines, AgreeUnderWeakCoupling) {
  std::mt19937_64 rng(77);
  const CandidateEdgeSet edges(4);
  const PartList parts = enumerate_parts(edges);
  for (int i = 0; i < 10; ++i) {
    const LogPotentials pot = random_potentials(edges, parts, rng, 0.1);
    const auto a = mf_run(pot, 3).posteriors();
    const auto b = lbp_run(pot, 3).posteriors();
    for (std::size_t e = 0; e < edges.size(); ++e) EXPECT_NEAR(a[e], b[e], 0.05);
  }
}

TEST(BeliefPropagation, NeighborSets) {
  const CandidateEdgeSet edges(2);
  const PartList parts = enumerate_parts(edges);
  const auto nb = neighbor_sets(edges, parts);
  const auto& n01 = nb[static_cast<std::size_t>(edges.index(0, 1))];
  ASSERT_EQ(n01.size(), 3u);
  std::map<std::size_t, PartType> got;
  for (const auto& x : n01) got[x.edge] = x.type;
  EXPECT_EQ(got.at(static_cast<std::size_t>(edges.index(0, 2))), PartType::Sibling);
  EXPECT_EQ(got.at(static_cast<std::size_t>(edges.index(2, 1))), PartType::Coparent);
  EXPECT_EQ(got.at(static_cast<std::size_t>(edges.index(1, 2))), PartType::Grandparent);

  EXPECT_TRUE(neighbor_sets(CandidateEdgeSet(1), enumerate_parts(CandidateEdgeSet(1)))[0].empty());
  for (int n = 2; n <= 5; ++n) {
    const CandidateEdgeSet e(n);
    const PartList p = enumerate_parts(e);
    std::size_t total = 0;
    for (const auto& list : neighbor_sets(e, p)) total += list.size();
    EXPECT_EQ(total, 2 * p.total());
  }

  PartList dup;
  dup.of(PartType::Sibling).push_back(parts.sib()[0]);
  dup.of(PartType::Coparent).push_back(parts.sib()[0]);
  EXPECT_THROW(neighbor_sets(edges, dup), InvalidArgument);
}

TEST(BeliefPropagation, InitIsUniform) {
  PairInstance pair(std::log(2.0), std::log(3.0));
  const MessageState st = lbp_init(pair.pot);
  for (std::size_t m = 0; m < st.links.size(); ++m) {
    const auto [m0, m1] = st.log_message(0, m);
    EXPECT_EQ(m0, m1);
  }
  EXPECT_NEAR(st.q(0)[pair.a], 0.75, 1e-15);
  PairInstance flat(std::log(2.0));
  EXPECT_EQ(lbp_init(flat.pot).q(0)[flat.a], 0.5);
}

TEST(BeliefPropagation, TwoEdgeTreeIsExact) {
  PairInstance pair(std::log(2.0));
  const MessageState st = lbp_run(pair.pot, 3);
  // M(1)/M(0) = (0.5 + 2 * 0.5) / (0.5 + 0.5) = 1.5.
  std::size_t into_a = st.links.size();
  for (std::size_t m = 0; m < st.links.size(); ++m)
    if (st.links[m].to == pair.a) into_a = m;
  ASSERT_LT(into_a, st.links.size());
  EXPECT_NEAR(std::exp(st.ratio[1][into_a]), 1.5, 1e-14);
  for (int t = 1; t <= 3; ++t) {
    EXPECT_NEAR(st.q(t)[pair.a], 0.6, 1e-14);
    EXPECT_NEAR(st.q(t)[pair.b], 0.6, 1e-14);
  }
}

TEST(BeliefPropagation, SinglePartTreesAreExact) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.5);
  const CandidateEdgeSet edges(3);
  const PartList all = enumerate_parts(edges);
  for (PartType t : kPartTypes)
    for (std::size_t p = 0; p < all.of(t).size(); p += 2) {
      PartList one;
      one.of(t).push_back(all.of(t)[p]);
      std::vector<double> unary(edges.size());
      for (auto& u : unary) u = g(rng);
      std::array<std::vector<double>, 3> binary;
      binary[static_cast<std::size_t>(t)] = {3.0 * g(rng)};
      const LogPotentials pot = assemble(unary, binary, edges, one);
      const auto exact = exact_infer(pot).marginals;
      const auto q = lbp_run(pot, 2).posteriors();
      for (std::size_t e = 0; e < edges.size(); ++e) EXPECT_NEAR(q[e], exact[e], 1e-9);
    }
}

TEST(BeliefPropagation, MessagesStayNormalized) {
  std::mt19937_64 rng(6);
  const CandidateEdgeSet edges(4);
  const PartList parts = enumerate_parts(edges);
  const LogPotentials pot = random_potentials(edges, parts, rng, 2.0, 3.0);
  for (double damping : {0.0, 0.5}) {
    const MessageState st = lbp_run(pot, 5, damping);
    for (int t = 0; t <= 5; ++t)
      for (std::size_t m = 0; m < st.links.size(); ++m) {
        const auto [l0, l1] = st.log_message(t, m);
        EXPECT_NEAR(std::exp(l0) + std::exp(l1), 1.0, 1e-12);
      }
    for (std::size_t m = 0; m < st.links.size(); ++m) {
      EXPECT_EQ(st.links[m].from, st.links[m ^ 1].to);
      EXPECT_EQ(st.links[m].to, st.links[m ^ 1].from);
    }
  }
  EXPECT_THROW(lbp_init(pot, 1.0), InvalidArgument);
}

TEST(BeliefPropagation, RunEqualsInitPlusSteps) {
  std::mt19937_64 rng(9);
  const CandidateEdgeSet edges(3);
  const PartList parts = enumerate_parts(edges);
  const LogPotentials pot = random_potentials(edges, parts, rng, 1.0);
  MessageState manual = lbp_init(pot);
  lbp_step(manual, pot);
  EXPECT_EQ(lbp_run(pot, 1).belief, manual.belief);
  EXPECT_EQ(lbp_run(pot, 1).ratio, manual.ratio);
}

// Finite differences of a loss on Q^(T) through either unrolled engine, with
// respect to every unary and part score.
TEST(Engines, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  const CandidateEdgeSet edges(3);
  const PartList parts = enumerate_parts(edges);
  for (double damping : {0.0, 0.3})
    for (InferenceKind kind : {InferenceKind::MeanField, InferenceKind::BeliefPropagation})
      for (int T = 1; T <= 3; ++T) {
        if (kind == InferenceKind::MeanField && damping > 0) continue;
        LogPotentials pot = random_potentials(edges, parts, rng, 1.0);
        std::vector<double> w(edges.size());
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& v : w) v = g(rng);
        const InferenceConfig cfg{kind, T, 1e9, damping};
        auto loss = [&] {
          const auto q = run_inference(pot, cfg).posteriors();
          return std::inner_product(q.begin(), q.end(), w.begin(), 0.0);
        };
        const InferenceResult res = run_inference(pot, cfg);
        const PotentialGradients grad = kind == InferenceKind::MeanField
                                            ? mf_backward(w, std::get<BeliefState>(res.trajectory), pot)
                                            : lbp_backward(w, std::get<MessageState>(res.trajectory), pot);
        auto check = [&](double& x, double analytic) {
          const double numeric = oracle::central_difference(loss, x, 1e-6);
          EXPECT_NEAR(analytic, numeric, 1e-8 + 1e-6 * std::abs(numeric))
              << inference_name(kind) << " T=" << T << " damping=" << damping;
        };
        for (std::size_t e = 0; e < edges.size(); ++e) check(pot.unary[e], grad.unary[e]);
        for (PartType t : kPartTypes)
          for (std::size_t p = 0; p < parts.of(t).size(); ++p) check(pot.of(t)[p], grad.of(t)[p]);
      }
}

TEST(Engines, BackwardLogitsComposeWithLoss) {
  // d/ds of sum_e w_e * logit_e(T) through inference_backward.
  std::mt19937_64 rng(41);
  const CandidateEdgeSet edges(3);
  const PartList parts = enumerate_parts(edges);
  for (InferenceKind kind : {InferenceKind::MeanField, InferenceKind::BeliefPropagation}) {
    LogPotentials pot = random_potentials(edges, parts, rng, 1.0);
    std::vector<double> w(edges.size());
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& v : w) v = g(rng);
    const InferenceConfig cfg{kind, 3, 1e9, 0.0};
    auto loss = [&] {
      const auto z = run_inference(pot, cfg).final_logits();
      return std::inner_product(z.begin(), z.end(), w.begin(), 0.0);
    };
    const PotentialGradients grad = inference_backward(w, run_inference(pot, cfg), pot);
    for (std::size_t e = 0; e < edges.size(); ++e)
      EXPECT_NEAR(grad.unary[e], oracle::central_difference(loss, pot.unary[e], 1e-6), 1e-7);
    for (PartType t : kPartTypes)
      for (std::size_t p = 0; p < parts.of(t).size(); ++p)
        EXPECT_NEAR(grad.of(t)[p], oracle::central_difference(loss, pot.of(t)[p], 1e-6), 1e-7);
  }
}

TEST(Engines, MeanFieldClampBlocksGradient) {
  PairInstance pair(0.5, 40.0);
  const BeliefState st = mf_run(pair.pot, 2);
  std::vector<double> up(pair.edges.size(), 1.0);
  const auto g = mf_backward_logits(up, st, pair.pot);
  for (double v : g.unary) EXPECT_EQ(v, 0.0);
}

TEST(Inference, KindNames) {
  EXPECT_EQ(parse_inference_kind("mf"), InferenceKind::MeanField);
  EXPECT_EQ(parse_inference_kind("lbp"), InferenceKind::BeliefPropagation);
  EXPECT_THROW(parse_inference_kind("gibbs"), ConfigError);
  EXPECT_THROW(mf_run(PairInstance(1.0).pot, 0), InvalidArgument);
}
