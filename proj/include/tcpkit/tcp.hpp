#pragma once

#include "tcpkit/tensor.hpp"

namespace tcpkit {

// Default absolute tolerance for accepting a point as a TCP solution.
inline constexpr double kSolutionTol = 1e-9;

// TCP(q, A): find x >= 0 with F(x) = A x^{m-1} + q >= 0 and x . F(x) = 0.
class TcpInstance {
 public:
  // Throws kDimMismatch when q.size() != a.dim(), kBadValue on non-finite q.
  TcpInstance(Tensor a, Vec q);

  const Tensor& tensor() const { return a_; }
  const Vec& q() const { return q_; }
  int dim() const { return a_.dim(); }

  bool operator==(const TcpInstance& other) const {
    return a_ == other.a_ && q_ == other.q_;
  }

 private:
  Tensor a_;
  Vec q_;
};

struct ResidualReport {
  double primal_violation = 0.0;     // max(0, -min_i x_i)
  double dual_violation = 0.0;       // max(0, -min_i F_i(x))
  double complementarity_gap = 0.0;  // |x . F(x)|
  Vec componentwise_products;        // x_i F_i(x)

  double max_violation() const;
};

Vec eval_F(const TcpInstance& inst, const Vec& x);

ResidualReport residuals(const TcpInstance& inst, const Vec& x);

// True iff all three scalar residuals are <= tol. Throws kBadTolerance for
// tol <= 0.
bool is_solution(const TcpInstance& inst, const Vec& x,
                 double tol = kSolutionTol);

// [v]_+ componentwise.
Vec plus_part(const Vec& v);

// || min(x, F(x)) ||_2, the natural residual.
double natural_residual_norm(const TcpInstance& inst, const Vec& x);

}  // namespace tcpkit
