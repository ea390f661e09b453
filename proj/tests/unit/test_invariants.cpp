// Randomized checks of identities that hold for every tensor.

#include <gtest/gtest.h>

#include <cmath>

#include <random>

#include "fixtures.hpp"
#include "tcpkit/properties.hpp"

using namespace tcpkit;

namespace {

struct Draw {
  Tensor a;
  Vec x;
  Vec y;
};

Draw draw(std::mt19937_64& rng, std::uint64_t seed) {
  const int order = std::uniform_int_distribution<int>(2, 5)(rng);
  const int dim = std::uniform_int_distribution<int>(1, 4)(rng);
  std::normal_distribution<double> normal;
  Draw d{random_tensor(order, dim, 0.7, -2, 2, seed), Vec(dim), Vec(dim)};
  for (int i = 0; i < dim; ++i) {
    d.x[i] = normal(rng);
    d.y[i] = normal(rng);
  }
  return d;
}

}  // namespace

TEST(Invariants, ObjectiveSignsAreScaleInvariant) {
  std::mt19937_64 rng(5);
  for (std::uint64_t k = 0; k < 300; ++k) {
    const Draw d = draw(rng, k);
    const double t = std::exp(std::uniform_real_distribution<double>(-3, 3)(rng));
    const int m = d.a.order();
    // Scaling by t multiplies phi and psi by t^m exactly up to rounding.
    const double phi = p_objective(d.a, d.x);
    EXPECT_NEAR(p_objective(d.a, Vec(t * d.x)), std::pow(t, m) * phi,
                1e-11 * std::pow(t, m) * (1 + std::abs(phi) + d.x.squaredNorm() * 10));
    const double psi = strong_p_objective(d.a, d.x, d.y);
    const double psi_t = strong_p_objective(d.a, Vec(t * d.x), Vec(t * d.y));
    if (std::abs(psi) > 1e-9) {
      EXPECT_EQ(std::signbit(psi), std::signbit(psi_t));
    }
  }
}

TEST(Invariants, SspWitnessIsPWitness) {
  std::mt19937_64 rng(6);
  int found = 0;
  for (std::uint64_t k = 0; k < 3000 && found < 300; ++k) {
    Draw d = draw(rng, 1000 + k);
    d.x = d.x.cwiseAbs();
    if (ssp_objective(d.a, d.x) > 0) continue;
    ++found;
    EXPECT_LE(p_objective(d.a, d.x), 0.0);
  }
  EXPECT_GT(found, 50);
}

TEST(Invariants, SspVerdictWitnessTransports) {
  CheckOptions o;
  o.samples = 2000;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Tensor a = random_tensor(4, 3, 1.0, -1, 1, 500 + seed);
    const auto v = ssp_check(a, o);
    if (!v.fails()) continue;
    EXPECT_LE(p_objective(a, v.witness->x), 0.0);
    EXPECT_TRUE(verify_verdict(a, v, o));
    EXPECT_TRUE((v.witness->x.array() >= 0).all());
  }
}

TEST(Invariants, VerdictsAreReproducible) {
  CheckOptions o;
  o.samples = 3000;
  const double shift[] = {1.5, 1.5, 1.5};
  const Tensor a = random_tensor(4, 3, 1.0, -1, 1, 77) + Tensor::diagonal(4, shift);
  const auto v1 = strong_p_check(a, o);
  const auto v2 = strong_p_check(a, o);
  EXPECT_EQ(v1.status, v2.status);
  ASSERT_TRUE(std::isfinite(v1.stats.min_value));
  EXPECT_EQ(v1.stats.min_value, v2.stats.min_value);
  o.threads = 3;
  const auto v3 = strong_p_check(a, o);
  EXPECT_EQ(v1.stats.min_value, v3.stats.min_value);
}
