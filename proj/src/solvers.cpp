#include "tcpkit/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "newton.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "tcpkit/error.hpp"

namespace tcpkit {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

bool near_any(const std::vector<Vec>& pts, const Vec& x, double dist) {
  return std::any_of(pts.begin(), pts.end(), [&](const Vec& p) {
    return (p - x).norm() <= dist;
  });
}

void check_size(const Tensor& a, const SolverOptions& opts) {
  if (a.dim() > opts.n_max || a.dim() > 30) {
    throw Error(ErrorCode::kTooLarge,
                "dimension " + std::to_string(a.dim()) +
                    " exceeds the enumeration limit " +
                    std::to_string(opts.n_max));
  }
}

// The |J|-variable system F_J(x) = 0 with x zero off J.
class ActiveSystem {
 public:
  ActiveSystem(const TcpInstance& inst, const std::vector<int>& idx)
      : inst_(inst), idx_(idx) {}

  Vec embed(const Vec& y) const {
    Vec x = Vec::Zero(inst_.dim());
    for (std::size_t k = 0; k < idx_.size(); ++k) x[idx_[k]] = y[k];
    return x;
  }

  Vec value(const Vec& y) const { return eval_F(inst_, embed(y))(idx_); }

  Mat jacobian(const Vec& y) const {
    return power_jacobian(inst_.tensor(), embed(y))(idx_, idx_);
  }

  void operator()(const Vec& y, Vec& r, Mat* jac) const {
    const Vec x = embed(y);
    r = eval_F(inst_, x)(idx_);
    if (jac) *jac = power_jacobian(inst_.tensor(), x)(idx_, idx_);
  }

  // Bordered system in z = (y, v): F_J(y) = 0, J(y) v = 0, v.v = 1.
  void bordered(const Vec& z, Vec& r, Mat* jac) const {
    const Eigen::Index k = static_cast<Eigen::Index>(idx_.size());
    const Vec y = z.head(k);
    const Vec v = z.tail(k);
    const Vec x = embed(y);
    const Mat jy = power_jacobian(inst_.tensor(), x)(idx_, idx_);
    r.resize(2 * k + 1);
    r.head(k) = eval_F(inst_, x)(idx_);
    r.segment(k, k) = jy * v;
    r[2 * k] = v.squaredNorm() - 1.0;
    if (!jac) return;
    jac->setZero(2 * k + 1, 2 * k);
    jac->topLeftCorner(k, k) = jy;
    jac->block(k, 0, k, k) =
        power_hessian_vector(inst_.tensor(), x, embed(v))(idx_, idx_);
    jac->block(k, k, k, k) = jy;
    jac->block(2 * k, k, 1, k) = 2.0 * v.transpose();
  }

 private:
  const TcpInstance& inst_;
  const std::vector<int>& idx_;
};

Vec polish_singular_root(const ActiveSystem& sys, const Vec& y,
                         const SolverOptions& opts) {
  const Mat jac = sys.jacobian(y);
  Eigen::JacobiSVD<Mat> svd(jac, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const Eigen::Index k = y.size();
  if (s[k - 1] > 1e-6 * std::max(1.0, s[0])) return y;
  if (k > 1 && s[k - 2] <= 1e-6 * std::max(1.0, s[0])) return y;

  Vec z0(2 * k);
  z0 << y, svd.matrixV().col(k - 1);
  detail::NewtonOptions nopts;
  nopts.tol = opts.root_tol;
  nopts.max_iter = 50;
  nopts.max_halvings = opts.max_halvings;
  const auto res = detail::damped_newton(
      [&sys](const Vec& z, Vec& r, Mat* j) { sys.bordered(z, r, j); }, z0,
      nopts);
  if (!res.converged) return y;
  const Vec polished = res.z.head(k);
  if ((polished - y).norm() > 1e-3) return y;
  const double before = sys.value(y).lpNorm<Eigen::Infinity>();
  const double after = sys.value(polished).lpNorm<Eigen::Infinity>();
  return after <= std::max(before, opts.root_tol) ? polished : y;
}

std::vector<Vec> solve_active_set_impl(const TcpInstance& inst,
                                       ActiveSet active,
                                       const SolverOptions& opts,
                                       bool* truncated) {
  const int n = inst.dim();
  if (active.mask() >> n) {
    throw Error(ErrorCode::kBadIndexSet, "active set out of range");
  }
  const std::vector<int> idx = active.indices();
  const int k = static_cast<int>(idx.size());
  if (k == 0) return {Vec::Zero(n)};

  int per_axis = std::max(opts.grid_points, 1);
  while (per_axis > 1 &&
         std::pow(static_cast<double>(per_axis), k) >
             static_cast<double>(opts.max_grid_starts)) {
    --per_axis;
  }
  if (truncated) *truncated = per_axis < opts.grid_points;

  std::vector<Vec> starts;
  std::vector<int> counter(k, 0);
  while (true) {
    Vec y(k);
    for (int c = 0; c < k; ++c) {
      y[c] = opts.radius * (counter[c] + 0.5) / per_axis;
    }
    starts.push_back(std::move(y));
    int c = k - 1;
    while (c >= 0 && ++counter[c] == per_axis) counter[c--] = 0;
    if (c < 0) break;
  }
  auto rng = detail::Rng::stream(opts.seed, active.mask());
  for (int s = 0; s < opts.random_starts; ++s) {
    Vec y(k);
    for (int c = 0; c < k; ++c) y[c] = rng.uniform(0.0, opts.radius);
    starts.push_back(std::move(y));
  }

  const ActiveSystem sys(inst, idx);
  detail::NewtonOptions nopts;
  nopts.tol = opts.root_tol;
  nopts.max_iter = opts.max_iter;
  nopts.max_halvings = opts.max_halvings;

  std::vector<Vec> roots;
  for (const Vec& y0 : starts) {
    const auto res = detail::damped_newton(
        [&sys](const Vec& y, Vec& r, Mat* j) { sys(y, r, j); }, y0, nopts);
    if (!res.converged) continue;
    const Vec y = polish_singular_root(sys, res.z, opts);
    if (y.minCoeff() < opts.positivity_floor) continue;
    const Vec x = sys.embed(y);
    if (!near_any(roots, x, opts.dedupe_dist)) roots.push_back(x);
  }
  return roots;
}

}  // namespace

ActiveSet ActiveSet::from_indices(std::span<const int> indices) {
  std::uint32_t mask = 0;
  for (int i : indices) {
    if (i < 0 || i >= 32) {
      throw Error(ErrorCode::kBadIndexSet, "active index out of range");
    }
    mask |= 1U << i;
  }
  return ActiveSet(mask);
}

int ActiveSet::size() const { return std::popcount(mask_); }

std::vector<int> ActiveSet::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::vector<Vec> solve_active_set(const TcpInstance& inst, ActiveSet active,
                                  const SolverOptions& opts) {
  return solve_active_set_impl(inst, active, opts, nullptr);
}

SolutionSet enumerate_solutions(const TcpInstance& inst,
                                const SolverOptions& opts) {
  check_size(inst.tensor(), opts);
  const std::size_t sets = std::size_t{1} << inst.dim();
  std::vector<std::vector<Vec>> candidates(sets);
  std::vector<char> truncated(sets, 0);
  detail::parallel_for(sets, opts.threads, [&](std::size_t mask) {
    bool t = false;
    candidates[mask] = solve_active_set_impl(
        inst, ActiveSet(static_cast<std::uint32_t>(mask)), opts, &t);
    truncated[mask] = t;
  });

  SolutionSet out;
  out.params = opts;
  out.exhaustive = std::none_of(truncated.begin(), truncated.end(),
                                [](char t) { return t != 0; });
  std::vector<Vec> kept;
  for (const auto& group : candidates) {
    for (const Vec& x : group) {
      if (!is_solution(inst, x, opts.solution_tol)) continue;
      if (near_any(kept, x, opts.dedupe_dist)) continue;
      kept.push_back(x);
    }
  }
  std::sort(kept.begin(), kept.end(), lex_less);
  for (Vec& x : kept) {
    ResidualReport r = residuals(inst, x);
    out.solutions.push_back({std::move(x), std::move(r)});
  }
  return out;
}

IterativeResult solve_iterative(const TcpInstance& inst,
                                const IterativeOptions& opts) {
  const int n = inst.dim();
  const Tensor& a = inst.tensor();
  auto rng = detail::Rng::stream(opts.seed, 0);

  IterativeResult best;
  best.x = Vec::Zero(n);
  best.residual = natural_residual_norm(inst, best.x);

  auto finish = [&](Vec x, int iters) {
    // Refine on the active set read off the converged point.
    const Vec f = eval_F(inst, x);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (x[i] > f[i]) idx.push_back(i);
    }
    if (!idx.empty()) {
      const ActiveSystem sys(inst, idx);
      detail::NewtonOptions nopts;
      nopts.max_iter = opts.max_iter;
      nopts.max_halvings = opts.max_halvings;
      const auto res = detail::damped_newton(
          [&sys](const Vec& y, Vec& r, Mat* j) { sys(y, r, j); }, x(idx),
          nopts);
      if (res.converged) {
        SolverOptions sopts;
        const Vec refined = sys.embed(polish_singular_root(sys, res.z, sopts));
        if (is_solution(inst, refined, opts.solution_tol) &&
            residuals(inst, refined).max_violation() <=
                residuals(inst, x).max_violation()) {
          x = refined;
        }
      }
    }
    best.converged = true;
    best.residual = natural_residual_norm(inst, x);
    best.x = std::move(x);
    best.iterations += iters;
  };

  for (int s = 0; s <= opts.restarts; ++s) {
    Vec x;
    if (s == 0) {
      x = opts.start ? plus_part(*opts.start) : Vec::Zero(n);
      if (x.size() != n) {
        throw Error(ErrorCode::kDimMismatch, "start has the wrong length");
      }
    } else {
      x.resize(n);
      for (int i = 0; i < n; ++i) x[i] = rng.uniform(0.0, opts.radius);
    }
    ++best.starts;

    int it = 0;
    for (; it < opts.max_iter; ++it) {
      if (is_solution(inst, x, opts.solution_tol)) {
        finish(std::move(x), it);
        return best;
      }
      const Vec f = eval_F(inst, x);
      const Vec phi = x.cwiseMin(f);
      const Mat jf = power_jacobian(a, x);
      Mat jac(n, n);
      for (int i = 0; i < n; ++i) {
        if (x[i] < f[i]) {
          jac.row(i) = Vec::Unit(n, i).transpose();
        } else {
          jac.row(i) = jf.row(i);
        }
      }
      const Vec d = detail::solve_step(jac, -phi);
      if (!d.allFinite()) break;
      const double merit = phi.norm();
      double t = 1.0;
      bool accepted = false;
      for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
        Vec trial = plus_part(x + t * d);
        if (natural_residual_norm(inst, trial) <= (1.0 - 1e-4 * t) * merit) {
          x = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    best.iterations += it;
    const double r = natural_residual_norm(inst, x);
    if (r < best.residual) {
      best.residual = r;
      best.x = x;
    }
  }
  return best;
}

std::vector<Vec> q_grid(int dim, double lo, double hi, int steps) {
  if (steps < 1 || dim < 1 || !(lo <= hi)) {
    throw Error(ErrorCode::kBadValue, "bad q grid");
  }
  std::vector<double> axis(steps);
  for (int s = 0; s < steps; ++s) {
    axis[s] = steps == 1 ? lo : lo + (hi - lo) * s / (steps - 1);
  }
  std::vector<Vec> out;
  std::vector<int> counter(dim, 0);
  while (true) {
    Vec q(dim);
    for (int i = 0; i < dim; ++i) q[i] = axis[counter[i]];
    out.push_back(std::move(q));
    int c = dim - 1;
    while (c >= 0 && ++counter[c] == steps) counter[c--] = 0;
    if (c < 0) break;
  }
  return out;
}

GusReport gus_probe(const Tensor& a, std::span<const Vec> q_list,
                    const GusOptions& opts) {
  check_size(a, opts.solver);
  std::vector<Vec> qs(q_list.begin(), q_list.end());
  for (const Vec& q : qs) {
    if (q.size() != a.dim()) {
      throw Error(ErrorCode::kDimMismatch, "q of the wrong length");
    }
  }
  if (opts.include_grid) {
    auto grid = q_grid(a.dim(), opts.grid_lo, opts.grid_hi, opts.grid_steps);
    qs.insert(qs.end(), grid.begin(), grid.end());
  }

  GusReport report;
  report.records.resize(qs.size());
  SolverOptions inner = opts.solver;
  inner.threads = 1;
  detail::parallel_for(qs.size(), opts.solver.threads, [&](std::size_t k) {
    const SolutionSet set = enumerate_solutions(TcpInstance(a, qs[k]), inner);
    GusRecord& rec = report.records[k];
    rec.q = qs[k];
    for (const Solution& s : set.solutions) rec.solutions.push_back(s.x);
  });
  for (const GusRecord& rec : report.records) {
    if (rec.count() != 1) report.flags.push_back(rec.q);
  }
  report.violated = !report.flags.empty();
  return report;
}

bool same_point_set(std::span<const Vec> a, std::span<const Vec> b,
                    double dist) {
  if (a.size() != b.size()) return false;
  auto covered = [dist](std::span<const Vec> from, std::span<const Vec> to) {
    return std::all_of(from.begin(), from.end(), [&](const Vec& p) {
      return std::any_of(to.begin(), to.end(), [&](const Vec& r) {
        return p.size() == r.size() && (p - r).norm() <= dist;
      });
    });
  };
  return covered(a, b) && covered(b, a);
}

BoundednessReport boundedness_probe(const TcpInstance& inst,
                                    std::span<const double> radii,
                                    const SolverOptions& opts) {
  check_size(inst.tensor(), opts);
  if (radii.empty()) throw Error(ErrorCode::kBadValue, "no radii given");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] >= 1.0) || (k > 0 && !(radii[k] > radii[k - 1]))) {
      throw Error(ErrorCode::kBadValue,
                  "radii must be >= 1 and strictly increasing");
    }
  }
  BoundednessReport report;
  report.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    SolverOptions o = opts;
    o.radius = r;
    report.sets.push_back(enumerate_solutions(inst, o));
  }
  auto points = [](const SolutionSet& s) {
    std::vector<Vec> out;
    for (const Solution& sol : s.solutions) out.push_back(sol.x);
    return out;
  };
  const auto last = points(report.sets.back());
  report.nonempty = !last.empty();
  if (report.sets.size() >= 2) {
    const auto prev = points(report.sets[report.sets.size() - 2]);
    report.stabilized = same_point_set(prev, last, opts.dedupe_dist);
  } else {
    report.stabilized = false;
  }
  return report;
}

}  // namespace tcpkit
