#include "tcpkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "newton.hpp"
#include "rng.hpp"
#include "tcpkit/error.hpp"

namespace tcpkit {

std::string_view to_string(EigenKind k) {
  return k == EigenKind::kH ? "H" : "Z";
}

namespace {

Vec power_vector(const Vec& x, int p) {
  Vec out = Vec::Ones(x.size());
  for (int k = 0; k < p; ++k) out = out.cwiseProduct(x);
  return out;
}

double eigenvalue_of(const Tensor& a, EigenKind kind, const Vec& x) {
  const Vec f = apply_power(a, x);
  if (kind == EigenKind::kZ) return x.dot(f) / x.squaredNorm();
  Eigen::Index i = 0;
  x.cwiseAbs().maxCoeff(&i);
  const Vec xp = power_vector(x, a.order() - 1);
  return f[i] / xp[i];
}

// x ~ -x is one eigenvector, except for Z pairs of odd order where -x
// belongs to -lambda.
bool sign_symmetric(const Tensor& a, EigenKind kind) {
  return kind == EigenKind::kH || a.order() % 2 == 0;
}

Vec canonical(const Vec& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > 1e-12) return x[i] < 0 ? Vec(-x) : x;
  }
  return x;
}

// Pair at direction x (normalized here), or nothing if the residual test
// fails.
std::optional<EigenPair> make_pair(const Tensor& a, EigenKind kind, Vec x,
                                   const EigenOptions& opts) {
  const double nrm = x.norm();
  if (!(nrm > 0.0) || !x.allFinite()) return std::nullopt;
  x /= nrm;
  if (sign_symmetric(a, kind)) x = canonical(x);
  x.array() += 0.0;  // no negative zeros in output
  EigenPair p{kind, eigenvalue_of(a, kind, x), x, 0.0};
  if (!std::isfinite(p.lambda)) return std::nullopt;
  p.residual = eigen_residual(a, p);
  if (!(p.residual <= opts.residual_tol)) return std::nullopt;
  return p;
}

void add_unique(std::vector<EigenPair>& pairs, EigenPair p,
                const EigenOptions& opts) {
  for (const EigenPair& q : pairs) {
    if (std::abs(q.lambda - p.lambda) <= opts.dedupe &&
        (q.x - p.x).norm() <= opts.dedupe) {
      return;
    }
  }
  pairs.push_back(std::move(p));
}

void sort_pairs(std::vector<EigenPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair& l, const EigenPair& r) {
              if (l.lambda != r.lambda) return l.lambda < r.lambda;
              return std::lexicographical_compare(
                  l.x.data(), l.x.data() + l.x.size(), r.x.data(),
                  r.x.data() + r.x.size());
            });
}

Vec on_circle(double theta) { return Vec{{std::cos(theta), std::sin(theta)}}; }

// Cross function whose zeros on the unit circle are the eigendirections.
double cross(const Tensor& a, EigenKind kind, double theta) {
  const Vec x = on_circle(theta);
  const Vec f = apply_power(a, x);
  if (kind == EigenKind::kZ) return f[0] * x[1] - f[1] * x[0];
  const Vec xp = power_vector(x, a.order() - 1);
  return f[0] * xp[1] - f[1] * xp[0];
}

// Newton on (x, lambda) for A x^{m-1} = lambda b(x), |x| = 1, from x.
// Returns the improved direction, or x itself when Newton does not help.
Vec newton_polish(const Tensor& a, EigenKind kind, const Vec& x,
                  const EigenOptions& opts) {
  const int n = a.dim();
  const int m = a.order();
  auto system = [&](const Vec& z, Vec& r, Mat* jac) {
    const Vec y = z.head(n);
    const double lambda = z[n];
    const Vec f = apply_power(a, y);
    const Vec b = kind == EigenKind::kZ ? y : power_vector(y, m - 1);
    r.resize(n + 1);
    r.head(n) = f - lambda * b;
    r[n] = 0.5 * (y.squaredNorm() - 1.0);
    if (!jac) return;
    jac->setZero(n + 1, n + 1);
    Mat db = Mat::Identity(n, n);
    if (kind == EigenKind::kH) {
      db = ((m - 1) * power_vector(y, m - 2)).asDiagonal();
    }
    jac->topLeftCorner(n, n) = power_jacobian(a, y) - lambda * db;
    jac->block(0, n, n, 1) = -b;
    jac->block(n, 0, 1, n) = y.transpose();
  };
  detail::NewtonOptions nopts;
  nopts.tol = 0.1 * opts.residual_tol;
  nopts.max_iter = 200;
  Vec z0(n + 1);
  z0.head(n) = x / x.norm();
  z0[n] = eigenvalue_of(a, kind, z0.head(n));
  const auto res = detail::damped_newton(system, z0, nopts);
  if (!res.z.allFinite()) return x;
  return res.z.head(n);
}

Spectrum scan_plane(const Tensor& a, EigenKind kind, const EigenOptions& opts) {
  Spectrum out;
  out.kind = kind;
  const int grid = std::max(opts.grid, 8);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> theta(grid), g(grid);
  double gmax = 0.0;
  for (int k = 0; k < grid; ++k) {
    theta[k] = two_pi * k / grid;
    g[k] = cross(a, kind, theta[k]);
    gmax = std::max(gmax, std::abs(g[k]));
  }
  double scale = 0.0;
  for (const Entry& e : a.entries()) scale += std::abs(e.value);

  std::vector<Vec> directions;
  if (gmax <= 1e-13 * scale || scale == 0.0) {
    out.degenerate = true;
    // Representatives: axes, diagonals and the extreme eigenvalues over the
    // grid.
    directions = {Vec{{1, 0}}, Vec{{0, 1}}, Vec{{-1, 0}}, Vec{{0, -1}},
                  Vec{{1, 1}}, Vec{{1, -1}}, Vec{{-1, -1}}, Vec{{-1, 1}}};
    int lo = 0, hi = 0;
    std::vector<double> lam(grid);
    for (int k = 0; k < grid; ++k) {
      lam[k] = eigenvalue_of(a, kind, on_circle(theta[k]));
      if (lam[k] < lam[lo]) lo = k;
      if (lam[k] > lam[hi]) hi = k;
    }
    directions.push_back(on_circle(theta[lo]));
    directions.push_back(on_circle(theta[hi]));
  } else {
    // Axes go first: they can be tangential zeros that the sign test misses,
    // and when they are not they are exact.
    directions = {Vec{{1, 0}}, Vec{{0, 1}}, Vec{{-1, 0}}, Vec{{0, -1}}};
    for (int k = 0; k < grid; ++k) {
      const int next = (k + 1) % grid;
      if (g[k] == 0.0) {
        directions.push_back(on_circle(theta[k]));
        ++out.brackets;
        continue;
      }
      if (!(g[k] * g[next] < 0.0)) continue;
      ++out.brackets;
      double lo = theta[k];
      double hi = next == 0 ? two_pi : theta[next];
      double glo = g[k];
      while (hi - lo > opts.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = cross(a, kind, mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      directions.push_back(on_circle(0.5 * (lo + hi)));
    }
  }
  for (Vec& x : directions) {
    auto p = make_pair(a, kind, x, opts);
    if (!out.degenerate) {
      // Bisection leaves the angle accurate to about bisect_tol; Newton
      // takes the pair to full precision.
      auto q = make_pair(a, kind, newton_polish(a, kind, x, opts), opts);
      if (q && (!p || q->residual <= p->residual)) p = std::move(q);
    }
    if (p) add_unique(out.pairs, std::move(*p), opts);
  }
  sort_pairs(out.pairs);
  return out;
}

Spectrum scan_line(const Tensor& a, EigenKind kind, const EigenOptions& opts) {
  Spectrum out;
  out.kind = kind;
  for (double s : {1.0, -1.0}) {
    if (auto p = make_pair(a, kind, Vec::Constant(1, s), opts)) {
      add_unique(out.pairs, std::move(*p), opts);
    }
  }
  sort_pairs(out.pairs);
  return out;
}

// Newton on (x, lambda) from random starts, both directly and after a
// shifted power iteration.
Spectrum multistart(const Tensor& a, EigenKind kind, const EigenOptions& opts) {
  Spectrum out;
  out.kind = kind;
  out.heuristic = true;
  const int n = a.dim();
  const int m = a.order();
  double shift = 0.0;
  for (const Entry& e : a.entries()) shift += std::abs(e.value);
  shift *= (m - 1);

  auto polish = [&](const Vec& x) {
    auto p = make_pair(a, kind, newton_polish(a, kind, x, opts), opts);
    if (!p) return;
    // H pairs on a coordinate face converge only linearly in the off-face
    // components; snapping those to zero usually gives the exact pair.
    Vec snapped = p->x;
    const double big = snapped.cwiseAbs().maxCoeff();
    for (double& v : snapped) {
      if (std::abs(v) < 1e-3 * big) v = 0.0;
    }
    if (snapped != p->x) {
      if (auto q = make_pair(a, kind, snapped, opts)) {
        if (q->residual <= p->residual) p = std::move(q);
      }
    }
    add_unique(out.pairs, std::move(*p), opts);
  };

  auto rng = detail::Rng(opts.seed);
  for (int s = 0; s < opts.starts; ++s) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    if (x.norm() == 0.0) continue;
    x /= x.norm();
    polish(x);
    const double sign = s % 2 == 0 ? 1.0 : -1.0;  // convex / concave shift
    for (int it = 0; it < opts.power_iters; ++it) {
      const Vec f = sign * apply_power(a, x);
      Vec y;
      if (kind == EigenKind::kZ) {
        y = f + shift * x;
      } else {
        const Vec g = f + shift * power_vector(x, m - 1);
        y = g.unaryExpr([m](double v) {
          return std::copysign(std::pow(std::abs(v), 1.0 / (m - 1)), v);
        });
      }
      const double nrm = y.norm();
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      x = y / nrm;
    }
    polish(x);
  }
  sort_pairs(out.pairs);
  return out;
}

Spectrum eigenpairs(const Tensor& a, EigenKind kind, const EigenOptions& opts) {
  switch (a.dim()) {
    case 1: return scan_line(a, kind, opts);
    case 2: return scan_plane(a, kind, opts);
    default: return multistart(a, kind, opts);
  }
}

}  // namespace

double eigen_residual(const Tensor& a, const EigenPair& pair) {
  if (pair.x.size() != a.dim()) {
    throw Error(ErrorCode::kDimMismatch, "eigenvector of the wrong length");
  }
  if (pair.x.norm() == 0.0) {
    throw Error(ErrorCode::kBadEigenvector, "eigenvector is zero");
  }
  const Vec f = apply_power(a, pair.x);
  if (pair.kind == EigenKind::kZ) return (f - pair.lambda * pair.x).norm();
  return (f - pair.lambda * power_vector(pair.x, a.order() - 1)).norm();
}

Spectrum z_eigenpairs(const Tensor& a, const EigenOptions& opts) {
  return eigenpairs(a, EigenKind::kZ, opts);
}

Spectrum h_eigenpairs(const Tensor& a, const EigenOptions& opts) {
  return eigenpairs(a, EigenKind::kH, opts);
}

PositivityReport positivity_report(const Tensor& a, const EigenOptions& opts,
                                   const CheckOptions& check) {
  PositivityReport r;
  r.h = h_eigenpairs(a, opts);
  r.z = z_eigenpairs(a, opts);
  auto min_lambda = [](const Spectrum& s) {
    double lo = std::numeric_limits<double>::quiet_NaN();
    for (const EigenPair& p : s.pairs) {
      if (!(p.lambda >= lo)) lo = p.lambda;
    }
    return lo;
  };
  r.min_h = min_lambda(r.h);
  r.min_z = min_lambda(r.z);
  r.all_positive = true;
  for (const Spectrum* s : {&r.h, &r.z}) {
    for (const EigenPair& p : s->pairs) {
      if (!(p.lambda > 0.0)) r.all_positive = false;
    }
  }
  r.strong_p = strong_p_check(a, check);
  r.contradiction = !r.strong_p.fails() && !r.all_positive;
  return r;
}

}  // namespace tcpkit
