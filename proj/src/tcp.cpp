#include "tcpkit/tcp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tcpkit/error.hpp"

namespace tcpkit {

TcpInstance::TcpInstance(Tensor a, Vec q) : a_(std::move(a)), q_(std::move(q)) {
  if (q_.size() != a_.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "q has length " + std::to_string(q_.size()) +
                    " but the tensor has dimension " +
                    std::to_string(a_.dim()));
  }
  if (!q_.allFinite()) throw Error(ErrorCode::kBadValue, "q is not finite");
}

double ResidualReport::max_violation() const {
  return std::max({primal_violation, dual_violation, complementarity_gap});
}

Vec eval_F(const TcpInstance& inst, const Vec& x) {
  return apply_power(inst.tensor(), x) + inst.q();
}

ResidualReport residuals(const TcpInstance& inst, const Vec& x) {
  const Vec f = eval_F(inst, x);
  ResidualReport r;
  r.primal_violation = std::max(0.0, -x.minCoeff());
  r.dual_violation = std::max(0.0, -f.minCoeff());
  r.complementarity_gap = std::abs(x.dot(f));
  r.componentwise_products = x.cwiseProduct(f);
  return r;
}

bool is_solution(const TcpInstance& inst, const Vec& x, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kBadTolerance, "tolerance must be positive");
  }
  return residuals(inst, x).max_violation() <= tol;
}

Vec plus_part(const Vec& v) { return v.cwiseMax(0.0); }

double natural_residual_norm(const TcpInstance& inst, const Vec& x) {
  return x.cwiseMin(eval_F(inst, x)).norm();
}

}  // namespace tcpkit
