#include "newton.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/QR>

namespace tcpkit::detail {

Vec solve_step(const Mat& jacobian, const Vec& rhs) {
  if (jacobian.rows() == jacobian.cols()) {
    Eigen::PartialPivLU<Mat> lu(jacobian);
    // rcond() is an estimate, so the solve is cross-checked below.
    if (lu.rcond() > 1e-13) {
      Vec d = lu.solve(rhs);
      if (d.allFinite()) return d;
    }
  }
  return jacobian.completeOrthogonalDecomposition().solve(rhs);
}

NewtonResult damped_newton(const SystemFn& system, Vec z0,
                           const NewtonOptions& opts) {
  NewtonResult out;
  out.z = std::move(z0);
  Vec r;
  Mat jac;
  system(out.z, r, &jac);
  double merit = r.norm();
  out.residual = r.lpNorm<Eigen::Infinity>();
  out.converged = out.residual <= opts.tol;

  Vec trial_r;
  for (; out.iterations < opts.max_iter; ++out.iterations) {
    if (merit == 0.0) break;
    const Vec d = solve_step(jac, -r);
    if (!d.allFinite()) break;

    double t = 1.0;
    bool accepted = false;
    Vec trial;
    for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
      trial = out.z + t * d;
      system(trial, trial_r, nullptr);
      const double trial_merit = trial_r.norm();
      if (std::isfinite(trial_merit) &&
          trial_merit <= (1.0 - 1e-4 * t) * merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    const double step = t * d.lpNorm<Eigen::Infinity>();
    out.z = std::move(trial);
    system(out.z, r, &jac);
    merit = r.norm();
    out.residual = r.lpNorm<Eigen::Infinity>();
    if (out.residual <= opts.tol) out.converged = true;
    if (out.z.lpNorm<Eigen::Infinity>() > opts.divergence) break;
    if (out.converged &&
        step <= opts.step_tol * (1.0 + out.z.lpNorm<Eigen::Infinity>())) {
      ++out.iterations;
      break;
    }
  }
  out.converged = out.residual <= opts.tol;
  return out;
}

}  // namespace tcpkit::detail
