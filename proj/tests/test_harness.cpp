#include <gtest/gtest.h>

#include "mirror/harness.hpp"
#include "oracles.hpp"

namespace {

using namespace mirror;
using namespace mirror::harness;

TEST(Report, RecordAndMerge) {
  VerificationReport a;
  a.record(-1.0, json{{"k", 1}});
  a.record(0.5, json{{"k", 2}});
  EXPECT_EQ(a.trials, 2);
  EXPECT_EQ(a.failures, 1);
  EXPECT_FALSE(a.passed());
  EXPECT_EQ(a.worst_case.at("k"), 2);
  VerificationReport b;
  b.record(2.0, json{{"k", 3}});
  a.merge(b);
  EXPECT_EQ(a.trials, 3);
  EXPECT_EQ(a.failures, 2);
  EXPECT_DOUBLE_EQ(a.worst_violation, 2.0);
  EXPECT_EQ(a.worst_case.at("k"), 3);
  for (int i = 0; i < 50; ++i) a.record(1.0, json{{"k", i}});
  EXPECT_EQ(a.details.size(), VerificationReport::kMaxDetails);
  const json j = a.to_json();
  EXPECT_EQ(j.at("failures"), a.failures);
  EXPECT_EQ(j.at("passed"), false);
}

TEST(Generators, ControlledRank) {
  SplitMix64 rng(1);
  for (Eigen::Index d = 1; d <= 6; ++d) {
    for (Eigen::Index s = 1; s <= d; ++s) {
      const auto p = random_probs_with_rank(d, s, rng);
      EXPECT_NEAR(p.sum(), 1.0, 1e-14);
      EXPECT_EQ((p.array() > 0).count(), s);
      EXPECT_GE(p.maxCoeff(), 1.0 / static_cast<double>(s) - 1e-12);
      for (Eigen::Index i = 0; i < d; ++i)
        if (p(i) > 0) {
          EXPECT_GE(p(i), 0.01);
        }
    }
  }
  EXPECT_THROW(random_probs_with_rank(3, 4, rng), ValidationError);
}

TEST(Generators, Spectra) {
  SplitMix64 rng(2);
  for (Eigen::Index d = 2; d <= 7; ++d) {
    for (Eigen::Index r = 1; r <= d; ++r) EXPECT_EQ(degeneracy(random_degenerate_spectrum(d, r, rng)), r);
    const auto nd = random_nondegenerate_spectrum(d, rng, 0.02);
    EXPECT_EQ(degeneracy(nd), 1);
    EXPECT_GE(nd.gaps().minCoeff(), 0.02 - 1e-12);
    const auto sx = random_simplex(d, rng);
    EXPECT_NEAR(sx.sum(), 1.0, 1e-14);
    EXPECT_GE(sx.minCoeff(), 0.0);
  }
}

TEST(Hierarchy, Examples) {
  const auto rep = theorem3_suite(3, 2, 50, 7);
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump(2);
  EXPECT_LE(rep.summary.at("max_me_rank_le_r").get<double>(), 1e-12);
  EXPECT_GE(rep.summary.at("min_me_rank_gt_r").get<double>(), 1e-8);
  EXPECT_TRUE(theorem3_suite(4, 1, 40, 8).passed());

  // The rank-3 example against a two-fold degenerate spectrum, by brute force.
  const double me = mirror_entanglement(Eigen::Vector3d(0.5, 0.3, 0.2), LUSpectrum::from_phases({0.0, 0.0, 2.0}));
  EXPECT_GT(me, 1e-8);
  EXPECT_NEAR(me, 1.0 - oracle::fidelity({0.5, 0.3, 0.2}, {0.0, 0.0, 2.0}), 1e-12);
}

TEST(Sandwich, BoundaryFamilies) {
  const auto rep = theorem4_suite(4, 200, 3);
  EXPECT_TRUE(rep.passed()) << rep.worst_case.dump();
  EXPECT_NEAR(rep.summary.at("coefficient").get<double>(), 0.75, 1e-15);
  EXPECT_GE(rep.summary.at("min_estar_minus_lower").get<double>(), -1e-10);
  EXPECT_TRUE(theorem4_suite(2, 100, 0).passed());
  EXPECT_THROW(theorem4_suite(1, 10, 0), ValidationError);
}

TEST(Witness, Examples) {
  const auto w0 = appendix_a_witness(4, 0.0);
  EXPECT_NEAR(w0.q(0), 1.0, 1e-15);
  EXPECT_NEAR(w0.estar, 0.0, 1e-12);
  const auto w1 = appendix_a_witness(4, 1.0);
  EXPECT_LT((w1.q.array() - 0.25).abs().maxCoeff(), 1e-15);
  EXPECT_NEAR(w1.estar, 1.0, 1e-12);
  EXPECT_NEAR(w1.el, 1.0, 1e-12);

  const auto w = appendix_a_witness(4, 0.5);
  // (1 - sqrt(1/2))/4 + sqrt(1/2) and (1 - sqrt(1/2))/4
  const double r = std::sqrt(0.5);
  EXPECT_NEAR(w.q(0), (1 - r) / 4 + r, 1e-15);
  EXPECT_NEAR(w.q(0), 0.780330, 1e-6);
  EXPECT_NEAR(w.q(1), 0.073223, 1e-6);
  EXPECT_NEAR(w.estar, 0.5, 1e-12);
  EXPECT_NEAR(w.el, 0.5, 1e-12);
  EXPECT_NEAR(w.estar, oracle::stellar_me(oracle::to_std(w.q)), 1e-12);
  EXPECT_LE(w.max_permutation_deviation, 1e-12);
  EXPECT_THROW(appendix_a_witness(4, 1.5), ValidationError);
  EXPECT_TRUE(witness_suite(5, {0.0, 0.3, 1.0}).passed());
}

TEST(Scatter, TrivialDimensions) {
  for (const auto& pt : figure3_scatter(1, 20, 0)) {
    EXPECT_EQ(pt.el, 0.0);
    EXPECT_EQ(pt.estar, 0.0);
  }
  for (const auto& pt : figure3_scatter(2, 200, 5)) EXPECT_NEAR(pt.estar, pt.el, 1e-10);
  const auto pts = figure3_scatter(4, 500, 1);
  EXPECT_TRUE(scatter_suite(4, pts, 1).passed());
}

TEST(Determinism, IndependentOfThreadCount) {
  const auto a = figure3_scatter(3, 64, 9, 0, 1);
  const auto b = figure3_scatter(3, 64, 9, 0, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].el, b[i].el);
    EXPECT_EQ(a[i].estar, b[i].estar);
  }
  const auto r1 = locc_suite(2, 3, 2, 20, 4, {stellar(2)}, 1).to_json();
  const auto r4 = locc_suite(2, 3, 2, 20, 4, {stellar(2)}, 4).to_json();
  EXPECT_EQ(r1.dump(), r4.dump());
}

TEST(Suites, SmallRunsPass) {
  EXPECT_TRUE(locc_suite(3, 4, 3, 30, 1, {stellar(3), from_gaps(Eigen::Vector3d(0.5, 0.3, 0.2))}).passed());
  std::vector<MajorizationRow> rows;
  const auto maj = majorization_suite(5, 40, 8, 2, 0, &rows);
  EXPECT_TRUE(maj.passed()) << maj.worst_case.dump();
  EXPECT_FALSE(rows.empty());
  EXPECT_TRUE(lemma1_suite(4, 20, 50, 3).passed());
  EXPECT_TRUE(optimal_unitary_suite(3, 40, 4).passed());
  EXPECT_THROW(locc_suite(3, 4, 2, 10, 0, {stellar(4)}), ValidationError);
}

}  // namespace
