#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tcpkit/error.hpp"
#include "tcpkit/properties.hpp"

using namespace tcpkit;

namespace {

CheckOptions quick(std::uint64_t seed = 42) {
  CheckOptions o;
  o.samples = 4000;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(PCheck, PaperExamples) {
  const auto two_roots = p_tensor_check(fixture::two_roots());
  EXPECT_EQ(two_roots.status, VerdictStatus::kNotDisproved);
  EXPECT_GT(two_roots.stats.min_value, 0.0);
  EXPECT_GE(two_roots.stats.samples, 20000u);

  const auto cubic_diag = p_tensor_check(fixture::cubic_diag());
  EXPECT_EQ(cubic_diag.status, VerdictStatus::kCertifiedFails);
  EXPECT_EQ(cubic_diag.reason, "odd order");
  EXPECT_EQ(cubic_diag.stats.samples, 0u);

  EXPECT_EQ(p_tensor_check(fixture::quartic_skew()).status, VerdictStatus::kNotDisproved);
}

TEST(PCheck, MinimumMatchesCircleOracle) {
  // min phi for the two-root quartic on the unit circle, from a grid plus the
  // branch crossings.
  const double grid_min = oracle::min_phi_on_circle(fixture::two_roots(), 20000, true);
  const auto v = p_tensor_check(fixture::two_roots());
  EXPECT_NEAR(v.stats.min_value, grid_min, 1e-9);
}

TEST(PCheck, NonpositiveDiagonalIsExactWitness) {
  const Tensor a = Tensor::from_entries(4, 2, {{{0, 0, 0, 0}, 1}, {{1, 0, 0, 0}, 5}});
  const auto v = p_tensor_check(a, quick());
  ASSERT_EQ(v.status, VerdictStatus::kFails);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(v.witness->exact);
  EXPECT_EQ(v.witness->x, Vec::Unit(2, 1));
  EXPECT_TRUE(verify_verdict(a, v, quick()));
}

TEST(PCheck, OneDimensional) {
  const auto pos = p_tensor_check(fixture::scalar(4, 2.0));
  EXPECT_EQ(pos.status, VerdictStatus::kNotDisproved);
  EXPECT_TRUE(pos.certified);
  EXPECT_EQ(p_tensor_check(fixture::scalar(4, -2.0)).status, VerdictStatus::kFails);
}

TEST(PCheck, SampledWitnessIsReverified) {
  // Off-diagonal coupling large enough to make phi negative near (1, -1).
  const Tensor a = Tensor::from_entries(
      4, 2, {{{0, 0, 0, 0}, 1}, {{0, 1, 1, 1}, 3}, {{1, 1, 1, 1}, 1}, {{1, 0, 0, 0}, 3}});
  ASSERT_LT(oracle::min_phi_on_circle(a), -1e-3);
  const auto v = p_tensor_check(a, quick());
  ASSERT_EQ(v.status, VerdictStatus::kFails);
  const auto margin = witness_violation(a, Property::kP, *v.witness, quick());
  ASSERT_TRUE(margin);
  EXPECT_GT(*margin, 1e-10);
  EXPECT_LE(p_objective(a, v.witness->x), -1e-10);
}

TEST(SspCheck, Examples) {
  EXPECT_EQ(ssp_check(fixture::two_roots(), quick()).status, VerdictStatus::kNotDisproved);
  EXPECT_EQ(ssp_check(fixture::cubic_diag(), quick()).status, VerdictStatus::kNotDisproved);
  const auto neg = ssp_check(fixture::scalar(3, -1.0), quick());
  ASSERT_EQ(neg.status, VerdictStatus::kFails);
  EXPECT_EQ(neg.witness->x, Vec::Ones(1));
  EXPECT_EQ(ssp_check(Tensor::zero(4, 2), quick()).status, VerdictStatus::kFails);
}

TEST(SspCheck, CubicDiagonalMinimumMatchesOracle) {
  // sigma(x) = max_i min over x_i > 0 ... reduces to max_i x_i^2 on the
  // nonnegative quarter circle; its minimum is at the diagonal, 1/2.
  double grid_min = INFINITY;
  for (int k = 0; k <= 20000; ++k) {
    const double t = 0.5 * std::numbers::pi * k / 20000;
    const Vec x{{std::cos(t), std::sin(t)}};
    grid_min = std::min(grid_min, ssp_objective(fixture::cubic_diag(), x));
  }
  EXPECT_NEAR(grid_min, 0.5, 1e-6);
  EXPECT_EQ(ssp_objective(fixture::cubic_diag(), Vec::Zero(2)), -INFINITY);
}

TEST(RCheck, Examples) {
  EXPECT_EQ(r_tensor_check(fixture::two_roots(), quick()).status, VerdictStatus::kNotDisproved);
  EXPECT_EQ(r_tensor_check(fixture::identity4(), quick()).status,
            VerdictStatus::kNotDisproved);
  const auto neg = r_tensor_check(fixture::scalar(4, -1.0), quick());
  ASSERT_EQ(neg.status, VerdictStatus::kFails);
  EXPECT_EQ(neg.witness->x, Vec::Ones(1));
  EXPECT_EQ(*neg.witness->t, 1.0);
  EXPECT_TRUE(verify_verdict(fixture::scalar(4, -1.0), neg, quick()));

  const std::vector<double> ones(7, 1.0);
  try {
    r_tensor_check(Tensor::diagonal(4, ones), quick());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(RCheck, InteriorWitness) {
  // a111 = a222 = 1 with strong negative coupling: x = (1,1)/sqrt2 solves
  // F(x) + t = 0 with t > 0.
  const Tensor a = Tensor::from_entries(
      4, 2, {{{0, 0, 0, 0}, 1}, {{0, 1, 1, 1}, -3}, {{1, 1, 1, 1}, 1}, {{1, 0, 0, 0}, -3}});
  const auto v = r_tensor_check(a, quick());
  ASSERT_EQ(v.status, VerdictStatus::kFails);
  ASSERT_TRUE(v.witness->t);
  EXPECT_GE(*v.witness->t, 0.0);
  EXPECT_TRUE(verify_verdict(a, v, quick()));
}

TEST(StrongPCheck, QuarticSkew) {
  const Vec x{{2.1, -1.9}}, y{{2, -2}};
  const Vec c = strong_p_components(fixture::quartic_skew(), x, y);
  EXPECT_NEAR(c[0], -0.0299, 1e-9);
  EXPECT_NEAR(c[1], -0.0499, 1e-9);
  EXPECT_NEAR(strong_p_objective(fixture::quartic_skew(), x, y), -0.0299, 1e-9);

  const auto v = strong_p_check(fixture::quartic_skew());
  ASSERT_EQ(v.status, VerdictStatus::kFails);
  ASSERT_TRUE(v.witness && v.witness->y);
  const auto margin = witness_violation(fixture::quartic_skew(), Property::kStrongP, *v.witness);
  ASSERT_TRUE(margin);
  EXPECT_GT(*margin, 1e-10);
  EXPECT_GE((v.witness->x - *v.witness->y).norm(), 1e-8);
}

TEST(StrongPCheck, OtherExamples) {
  EXPECT_EQ(strong_p_check(fixture::identity4(), quick()).status,
            VerdictStatus::kNotDisproved);
  const auto odd = strong_p_check(fixture::cubic_diag());
  EXPECT_EQ(odd.status, VerdictStatus::kCertifiedFails);
  EXPECT_EQ(odd.reason, "odd order");
  EXPECT_EQ(odd.stats.samples, 0u);
  EXPECT_TRUE(strong_p_check(fixture::scalar(4, 1.0)).certified);
}

TEST(StrongP, ObjectiveIgnoresQ) {
  const Vec x{{0.3, -1.2}}, y{{1.1, 0.4}};
  const double a = strong_p_objective(TcpInstance(fixture::quartic_skew(), Vec{{0, 0}}), x, y);
  const double b = strong_p_objective(TcpInstance(fixture::quartic_skew(), Vec{{5, -7}}), x, y);
  EXPECT_EQ(a, b);
}

TEST(WitnessViolation, RejectsBadWitnesses) {
  Witness w{Vec{{1, 1}}, std::nullopt, std::nullopt, false};
  // phi(1,1) > 0 for the two-root quartic, so this is no P witness.
  EXPECT_FALSE(witness_violation(fixture::two_roots(), Property::kP, w));
  w.x = Vec::Zero(3);
  EXPECT_FALSE(witness_violation(fixture::two_roots(), Property::kP, w));
  // Strong P witness without y.
  w.x = Vec{{1, 0}};
  EXPECT_FALSE(witness_violation(fixture::quartic_skew(), Property::kStrongP, w));
}

TEST(VerifyVerdict, CertifiedFailsOnlyForOddOrder) {
  PropertyVerdict v;
  v.property = Property::kP;
  v.status = VerdictStatus::kCertifiedFails;
  EXPECT_TRUE(verify_verdict(fixture::cubic_diag(), v));
  EXPECT_FALSE(verify_verdict(fixture::two_roots(), v));
  v.status = VerdictStatus::kNotDisproved;
  EXPECT_TRUE(verify_verdict(fixture::two_roots(), v));
}

TEST(Modulus, Examples) {
  Box box{Vec::Constant(2, -3), Vec::Constant(2, 3)};
  EXPECT_LT(uniform_p_modulus(fixture::quartic_skew(), box).mu, 0.0);

  const Tensor eye = Tensor::from_entries(2, 2, {{{0, 0}, 1}, {{1, 1}, 1}});
  EXPECT_NEAR(uniform_p_modulus(eye, box, quick()).mu, 1.0, 1e-9);

  // Dense pair oracle over [1,2]^2 for the diagonal identity.
  Box unit{Vec::Constant(2, 1), Vec::Constant(2, 2)};
  double oracle_min = INFINITY;
  const int k = 12;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b)
      for (int c = 0; c <= k; ++c)
        for (int d = 0; d <= k; ++d) {
          const Vec x{{1 + 1.0 * a / k, 1 + 1.0 * b / k}};
          const Vec y{{1 + 1.0 * c / k, 1 + 1.0 * d / k}};
          const double dist = (x - y).lpNorm<Eigen::Infinity>();
          if (dist == 0) continue;
          oracle_min = std::min(
              oracle_min, strong_p_objective(fixture::identity4(), x, y) / (dist * dist));
        }
  const auto est = uniform_p_modulus(fixture::identity4(), unit, quick());
  EXPECT_GE(est.mu, 3.0 - 1e-9);
  EXPECT_LE(est.mu, oracle_min + 1e-9);
}

TEST(Diagonal, Positivity) {
  EXPECT_TRUE(diagonal_positivity(fixture::two_roots()));
  EXPECT_TRUE(diagonal_positivity(fixture::quartic_skew()));
  EXPECT_FALSE(diagonal_positivity(Tensor::zero(4, 2)));
}

TEST(Audit, Examples) {
  const auto ex = implication_audit(fixture::quartic_skew(), quick());
  EXPECT_TRUE(ex.consistent());
  ASSERT_EQ(ex.entries.size(), 3u);
  EXPECT_EQ(ex.entries[0].subset, (std::vector<int>{0, 1}));
  EXPECT_EQ(ex.entries[0].strong_p.status, VerdictStatus::kFails);
  EXPECT_EQ(ex.entries[0].p.status, VerdictStatus::kNotDisproved);

  const auto id = implication_audit(fixture::identity4(), quick());
  EXPECT_TRUE(id.consistent());
  for (const auto& e : id.entries) {
    EXPECT_FALSE(e.p.fails());
    EXPECT_FALSE(e.ssp.fails());
    EXPECT_FALSE(e.r.fails());
    EXPECT_FALSE(e.strong_p.fails());
    EXPECT_TRUE(e.diagonal_positive);
  }

  const auto zero = implication_audit(Tensor::zero(4, 2), quick());
  EXPECT_TRUE(zero.consistent());
  EXPECT_FALSE(zero.entries[0].diagonal_positive);
  EXPECT_EQ(zero.entries[0].ssp.status, VerdictStatus::kFails);
}

TEST(Audit, RandomTensorsAreConsistent) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Tensor a = random_tensor(4, 2, 1.0, -1, 1, 300 + seed);
    const auto r = implication_audit(a, quick(seed));
    EXPECT_TRUE(r.consistent()) << "seed " << seed << ": "
                                << (r.inconsistencies.empty() ? "" : r.inconsistencies[0]);
  }
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Property::kStrongP), "strong-p");
  EXPECT_EQ(to_string(Property::kStrictlySemiPositive), "ssp");
  EXPECT_EQ(to_string(VerdictStatus::kCertifiedFails), "certified_fails");
  EXPECT_EQ(to_string(VerdictStatus::kNotDisproved), "not_disproved");
  EXPECT_EQ(to_string(VerdictStatus::kFails), "fails");
}
