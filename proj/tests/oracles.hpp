#pragma once

// Reference computations used by the tests. They work from the raw entry
// list or from first principles and share no code with the library
// algorithms they check.

#include <cmath>
#include <numbers>
#include <vector>

#include "tcpkit/tensor.hpp"

namespace oracle {

using tcpkit::Tensor;
using tcpkit::Vec;

// Dense copy of A, row-major over (i1, ..., im).
inline std::vector<double> dense(const Tensor& a) {
  std::size_t size = 1;
  for (int k = 0; k < a.order(); ++k) size *= a.dim();
  std::vector<double> d(size, 0.0);
  for (const auto& e : a.entries()) {
    std::size_t flat = 0;
    for (int i : e.index) flat = flat * a.dim() + i;
    d[flat] = e.value;
  }
  return d;
}

// (A x^{m-1})_i by summing over every index tuple.
inline Vec apply_power(const Tensor& a, const Vec& x) {
  const int n = a.dim(), m = a.order();
  const auto d = dense(a);
  Vec out = Vec::Zero(n);
  std::vector<int> idx(m, 0);
  for (std::size_t flat = 0; flat < d.size(); ++flat) {
    std::size_t rest = flat;
    for (int k = m - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rest % n);
      rest /= n;
    }
    double term = d[flat];
    for (int k = 1; k < m; ++k) term *= x[idx[k]];
    out[idx[0]] += term;
  }
  return out;
}

// A x^m by summing over every index tuple.
inline double form_value(const Tensor& a, const Vec& x) {
  const int n = a.dim(), m = a.order();
  const auto d = dense(a);
  double sum = 0.0;
  for (std::size_t flat = 0; flat < d.size(); ++flat) {
    std::size_t rest = flat;
    double term = d[flat];
    for (int k = 0; k < m; ++k) {
      term *= x[rest % n];
      rest /= n;
    }
    sum += term;
  }
  return sum;
}

// min over the unit circle of max_i x_i (A x^{m-1})_i for n = 2, from
// `points` equally spaced angles. The minimum often sits where the two
// branches cross, so with `crossings` the crossing angles are located by
// bisection and evaluated too.
inline double min_phi_on_circle(const Tensor& a, int points = 720,
                                bool crossings = false);

// Root of f in [lo, hi] with f(lo) < 0 < f(hi).
template <class F>
double bisect(F f, double lo, double hi) {
  for (int k = 0; k < 2000; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Angles in [0, 2 pi) where g changes sign on a fine grid, each refined by
// bisection.
template <class G>
std::vector<double> sign_changes(G g, int points = 200000) {
  std::vector<double> out;
  const double two_pi = 2.0 * std::numbers::pi;
  double prev = g(0.0);
  for (int k = 1; k <= points; ++k) {
    const double t = two_pi * k / points;
    const double cur = g(t);
    if (prev == 0.0) {
      out.push_back(two_pi * (k - 1) / points);
    } else if (prev * cur < 0.0) {
      double lo = two_pi * (k - 1) / points, hi = t;
      const bool rising = prev < 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((g(mid) < 0.0) == rising ? lo : hi) = mid;
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return out;
}

inline double min_phi_on_circle(const Tensor& a, int points, bool crossings) {
  auto branches = [&a](double t) {
    const Vec x{{std::cos(t), std::sin(t)}};
    const Vec f = oracle::apply_power(a, x);
    return std::pair{x[0] * f[0], x[1] * f[1]};
  };
  double best = INFINITY;
  for (int k = 0; k < points; ++k) {
    const auto [p, q] = branches(2.0 * std::numbers::pi * k / points);
    best = std::min(best, std::max(p, q));
  }
  if (crossings) {
    auto diff = [&](double t) {
      const auto [p, q] = branches(t);
      return p - q;
    };
    for (double t : sign_changes(diff)) {
      const auto [p, q] = branches(t);
      best = std::min(best, std::max(p, q));
    }
  }
  return best;
}

}  // namespace oracle
