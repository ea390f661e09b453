#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tcpkit/error.hpp"
#include "tcpkit/tcp.hpp"

using namespace tcpkit;

TEST(Tcp, InstanceValidation) {
  EXPECT_THROW(TcpInstance(fixture::two_roots(), Vec::Zero(3)), Error);
  EXPECT_THROW(TcpInstance(fixture::two_roots(), Vec{{0, std::nan("")}}), Error);
  const TcpInstance inst(fixture::two_roots(), Vec{{0, -1}});
  EXPECT_EQ(inst.dim(), 2);
  EXPECT_EQ(inst, TcpInstance(fixture::two_roots(), Vec{{0, -1}}));
}

TEST(Tcp, EvalF) {
  const TcpInstance two_roots(fixture::two_roots(), Vec{{0, -1}});
  EXPECT_EQ(eval_F(two_roots, Vec{{1, 1}}), Vec::Zero(2));
  EXPECT_EQ(eval_F(two_roots, Vec::Zero(2)), two_roots.q());
  const TcpInstance cubic_diag(fixture::cubic_diag(), Vec{{-4, 1}});
  EXPECT_EQ(eval_F(cubic_diag, Vec{{2, 0}}), (Vec{{0, 1}}));
  EXPECT_THROW(eval_F(cubic_diag, Vec::Zero(3)), Error);
}

TEST(Tcp, Residuals) {
  const TcpInstance inst(fixture::two_roots(), Vec{{0, -1}});
  const auto r = residuals(inst, Vec{{0, 1}});
  EXPECT_EQ(r.primal_violation, 0.0);
  EXPECT_EQ(r.dual_violation, 0.0);
  EXPECT_EQ(r.complementarity_gap, 0.0);
  EXPECT_EQ(r.componentwise_products, Vec::Zero(2));

  // F2 = 0.125 - 1 at x = (0, 0.5).
  EXPECT_DOUBLE_EQ(residuals(inst, Vec{{0, 0.5}}).dual_violation, 0.875);

  // F(x) >= 0 with one negative coordinate.
  const TcpInstance cubic_diag(fixture::cubic_diag(), Vec{{1, 1}});
  const auto neg = residuals(cubic_diag, Vec{{-0.5, 0}});
  EXPECT_EQ(neg.primal_violation, 0.5);
  EXPECT_EQ(neg.dual_violation, 0.0);
  EXPECT_THROW(residuals(inst, Vec::Zero(1)), Error);
}

TEST(Tcp, ResidualFieldsAreNonnegative) {
  const TcpInstance inst(fixture::quartic_skew(), Vec{{0.3, -2}});
  for (int k = 0; k < 50; ++k) {
    const Vec x{{std::sin(k * 1.3) * 3, std::cos(k * 0.7) * 3}};
    const auto r = residuals(inst, x);
    EXPECT_GE(r.primal_violation, 0.0);
    EXPECT_GE(r.dual_violation, 0.0);
    EXPECT_GE(r.complementarity_gap, 0.0);
    EXPECT_TRUE(std::isfinite(r.max_violation()));
    EXPECT_EQ(is_solution(inst, x, 1e-9), r.max_violation() <= 1e-9);
  }
}

TEST(Tcp, IsSolution) {
  const TcpInstance inst(fixture::two_roots(), Vec{{0, -1}});
  EXPECT_TRUE(is_solution(inst, Vec{{1, 1}}, 1e-9));
  EXPECT_TRUE(is_solution(inst, Vec{{0, 1}}));
  EXPECT_FALSE(is_solution(inst, Vec{{0.5, 1}}, 1e-9));
  const TcpInstance pos(fixture::quartic_skew(), Vec{{1, 0}});
  EXPECT_TRUE(is_solution(pos, Vec::Zero(2), 1e-9));
  EXPECT_THROW(is_solution(inst, Vec{{1, 1}}, 0.0), Error);
  EXPECT_THROW(is_solution(inst, Vec{{1, 1}}, -1e-9), Error);
  try {
    is_solution(inst, Vec{{1, 1}}, 0.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadTolerance);
  }
}

TEST(Tcp, PlusPart) {
  EXPECT_EQ(plus_part(Vec{{-1, 2}}), (Vec{{0, 2}}));
  EXPECT_EQ(plus_part(Vec{{0, 0}}), (Vec{{0, 0}}));
  EXPECT_EQ(plus_part(Vec{{-3.5, -0.1}}), (Vec{{0, 0}}));
}

TEST(Tcp, NaturalResidual) {
  const TcpInstance inst(fixture::two_roots(), Vec{{0, -1}});
  EXPECT_LE(natural_residual_norm(inst, Vec{{1, 1}}), 1e-12);
  EXPECT_LE(natural_residual_norm(inst, Vec{{0, 1}}), 1e-12);
  EXPECT_EQ(natural_residual_norm(TcpInstance(fixture::quartic_skew(), Vec{{1, 1}}),
                                  Vec::Zero(2)),
            0.0);
  EXPECT_DOUBLE_EQ(natural_residual_norm(
                       TcpInstance(fixture::quartic_skew(), Vec{{-1, -1}}), Vec::Zero(2)),
                   std::sqrt(2.0));
}
