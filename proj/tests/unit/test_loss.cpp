#include <gtest/gtest.h>

#include "sdp/layers.hpp"
#include "sdp/loss.hpp"
#include "support/test_support.hpp"

using namespace sdp;

namespace {

Vocabulary four_labels() {
  return Vocabulary::from_lists({"<UNK>", "<TOP>"}, {"<UNK>", "<TOP>"}, {"TOP", "A", "B", "C"}, 1);
}

}  // namespace

TEST(EdgeLoss, Examples) {
  const CandidateEdgeSet two(2);
  SemGraph gold(2);
  gold.add(0, 1, "A");
  gold.add(1, 2, "B");
  std::vector<double> perfect = {1.0, 0.0, 1.0, 0.0};
  EXPECT_NEAR(edge_loss(perfect, two, gold), 0.0, 1e-15);
  EXPECT_NEAR(edge_loss(std::vector<double>(4, 0.5), two, gold), 4 * std::log(2.0), 1e-14);

  const CandidateEdgeSet one(1);
  EXPECT_NEAR(edge_loss(std::vector<double>{0.75}, one, SemGraph(1)), -std::log(0.25), 1e-15);
}

TEST(EdgeLoss, LogitFormMatchesProbabilities) {
  const CandidateEdgeSet edges(3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  SemGraph gold(3);
  gold.add(0, 2, "TOP");
  gold.add(2, 1, "A");
  gold.add(1, 3, "B");
  std::vector<double> z(edges.size()), q(edges.size());
  for (std::size_t e = 0; e < z.size(); ++e) {
    z[e] = g(rng);
    q[e] = logistic(z[e]);
  }
  const EdgeLoss from_logits = edge_loss_from_logits(z, edges, gold);
  EXPECT_NEAR(from_logits.value, edge_loss(q, edges, gold), 1e-12);
  for (std::size_t e = 0; e < z.size(); ++e) {
    const double y = gold.contains(edges[e].head, edges[e].dep) ? 1.0 : 0.0;
    EXPECT_NEAR(from_logits.grad_logits[e], q[e] - y, 1e-15);
  }
  // Saturated logits stay finite.
  std::vector<double> huge(edges.size(), -800.0);
  EXPECT_TRUE(std::isfinite(edge_loss_from_logits(huge, edges, gold).value));
}

TEST(LabelLoss, Examples) {
  const Vocabulary v = four_labels();
  const CandidateEdgeSet edges(2);
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(4, 4);
  EXPECT_EQ(label_loss(scores, edges, SemGraph(2), v).value, 0.0);

  SemGraph gold(2);
  gold.add(1, 2, "A");
  EXPECT_NEAR(label_loss(scores, edges, gold, v).value, std::log(4.0), 1e-15);

  scores(edges.index(1, 2), v.label_id("A")) = 10.0;
  const double expected = std::log(std::exp(10.0) + 3.0) - 10.0;
  const LabelLoss l = label_loss(scores, edges, gold, v);
  EXPECT_NEAR(l.value, expected, 1e-15);
  // Three competitors at 0: ln(1 + 3e^-10). A single competitor gives e^-10.
  EXPECT_NEAR(l.value, 1.362e-4, 1e-7);
  const Vocabulary pair = Vocabulary::from_lists({"<UNK>", "<TOP>"}, {"<UNK>", "<TOP>"}, {"TOP", "A"}, 1);
  Eigen::MatrixXd two = Eigen::MatrixXd::Zero(4, 2);
  two(edges.index(1, 2), 1) = 10.0;
  EXPECT_NEAR(label_loss(two, edges, gold, pair).value, 4.54e-5, 1e-7);
  // Rows of non-gold edges receive no gradient; gold rows sum to zero.
  EXPECT_EQ(l.grad.row(0).norm(), 0.0);
  EXPECT_NEAR(l.grad.row(edges.index(1, 2)).sum(), 0.0, 1e-15);
}

TEST(LabelLoss, TopEdgesOptional) {
  const Vocabulary v = four_labels();
  const CandidateEdgeSet edges(2);
  SemGraph gold(2);
  gold.add(0, 1, "TOP");
  const Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(4, 4);
  EXPECT_NEAR(label_loss(scores, edges, gold, v, true).value, std::log(4.0), 1e-15);
  EXPECT_EQ(label_loss(scores, edges, gold, v, false).value, 0.0);
}

TEST(LabelLoss, GradientMatchesFiniteDifferences) {
  const Vocabulary v = four_labels();
  const CandidateEdgeSet edges(2);
  SemGraph gold(2);
  gold.add(1, 2, "A");
  gold.add(2, 1, "C");
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd scores(4, 4);
  for (Eigen::Index i = 0; i < scores.size(); ++i) scores(i) = g(rng);
  const LabelLoss l = label_loss(scores, edges, gold, v);
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double numeric = oracle::central_difference(
        [&] { return label_loss(scores, edges, gold, v).value; }, scores(i), 1e-6);
    EXPECT_NEAR(l.grad(i), numeric, 1e-8);
  }
}

TEST(CombinedLoss, Interpolates) {
  EXPECT_EQ(combined_loss(2.0, 5.0, 0.0), 2.0);
  EXPECT_EQ(combined_loss(2.0, 5.0, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(combined_loss(2.0, 5.0, 0.07), 0.07 * 5.0 + 0.93 * 2.0);
  // Linear in each argument.
  EXPECT_DOUBLE_EQ(combined_loss(1.0 + 3.0, 2.0 + 4.0, 0.3),
                   combined_loss(1.0, 2.0, 0.3) + combined_loss(3.0, 4.0, 0.3));
}
