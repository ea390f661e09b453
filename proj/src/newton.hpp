#pragma once

#include <functional>

#include "tcpkit/tensor.hpp"

namespace tcpkit::detail {

// Residual and (optionally) Jacobian of a nonlinear system G(z) = 0. The
// system may be overdetermined, in which case steps are Gauss-Newton.
using SystemFn = std::function<void(const Vec& z, Vec& residual, Mat* jacobian)>;

struct NewtonOptions {
  double tol = 1e-11;       // converged once ||G||_inf <= tol
  int max_iter = 200;
  int max_halvings = 40;
  double step_tol = 1e-14;  // relative step size that ends refinement
  double divergence = 1e8;  // abandon once ||z||_inf exceeds this
};

struct NewtonResult {
  Vec z;
  double residual = 0.0;  // ||G(z)||_inf
  bool converged = false;
  int iterations = 0;
};

// Minimum-norm least-squares solution of J d = rhs. Uses an LU solve when J
// is square and well conditioned.
Vec solve_step(const Mat& jacobian, const Vec& rhs);

// Damped Newton with step halving on ||G||_2. After the tolerance is met the
// iteration keeps going while steps are not negligible and the residual
// still decreases, so that slowly converging multiple roots get pushed as far
// as floating point allows.
NewtonResult damped_newton(const SystemFn& system, Vec z0,
                           const NewtonOptions& opts);

}  // namespace tcpkit::detail
