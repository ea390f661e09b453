#include "tcpkit/properties.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include "newton.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "tcpkit/error.hpp"

namespace tcpkit {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::kP: return "p";
    case Property::kStrictlySemiPositive: return "ssp";
    case Property::kR: return "r";
    case Property::kStrongP: return "strong-p";
  }
  return "unknown";
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kFails: return "fails";
    case VerdictStatus::kNotDisproved: return "not_disproved";
    case VerdictStatus::kCertifiedFails: return "certified_fails";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kChunk = 1000;

struct Candidate {
  double value = kInf;
  Vec z;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return std::lexicographical_compare(a.z.data(), a.z.data() + a.z.size(),
                                      b.z.data(), b.z.data() + b.z.size());
}

struct SearchProblem {
  std::function<double(const Vec&)> objective;
  // Maps a perturbed point back onto the search domain, or rejects it.
  std::function<std::optional<Vec>(const Vec&)> project;
  std::function<Vec(detail::Rng&)> sample;
};

// Opportunistic coordinate pattern search, staying on the projected domain.
Candidate refine(const SearchProblem& prob, Candidate c,
                 const CheckOptions& opts) {
  double step = opts.initial_step;
  for (int it = 0; it < opts.refine_iters && step > 1e-15; ++it) {
    bool improved = false;
    for (Eigen::Index k = 0; k < c.z.size(); ++k) {
      for (double sign : {1.0, -1.0}) {
        Vec trial = c.z;
        trial[k] += sign * step;
        const auto projected = prob.project(trial);
        if (!projected) continue;
        const double v = prob.objective(*projected);
        if (v < c.value) {
          c.value = v;
          c.z = *projected;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= opts.shrink;
  }
  return c;
}

// Seeded sampling in fixed-size chunks (one RNG stream per chunk), then
// refinement of the best `refine_top` samples. The result does not depend on
// the thread count.
Candidate sample_and_refine(const SearchProblem& prob, const CheckOptions& opts,
                            SearchStats& stats) {
  const std::size_t chunks = (opts.samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Candidate>> per_chunk(chunks);
  detail::parallel_for(chunks, opts.threads, [&](std::size_t c) {
    auto rng = detail::Rng::stream(opts.seed, c);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(opts.samples, begin + kChunk);
    for (std::size_t s = begin; s < end; ++s) {
      Vec z = prob.sample(rng);
      const double v = prob.objective(z);
      per_chunk[c].push_back({v, std::move(z)});
    }
  });
  std::vector<Candidate> all;
  all.reserve(opts.samples);
  for (auto& chunk : per_chunk) {
    for (auto& cand : chunk) all.push_back(std::move(cand));
  }
  stats.samples = all.size();
  const std::size_t top =
      std::min(all.size(), static_cast<std::size_t>(std::max(opts.refine_top, 0)));
  std::partial_sort(all.begin(), all.begin() + top, all.end(), candidate_less);
  std::vector<Candidate> refined(top);
  detail::parallel_for(top, opts.threads, [&](std::size_t k) {
    refined[k] = refine(prob, all[k], opts);
  });
  stats.refinements = static_cast<int>(top);
  Candidate best = all.empty() ? Candidate{} : all.front();
  for (const Candidate& c : refined) {
    if (candidate_less(c, best)) best = c;
  }
  stats.min_value = best.value;
  return best;
}

Vec random_sphere(detail::Rng& rng, Eigen::Index n) {
  Vec z(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  } while (z.norm() == 0.0);
  return z / z.norm();
}

std::optional<Vec> normalized(const Vec& z) {
  const double nrm = z.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) return std::nullopt;
  return Vec(z / nrm);
}

Witness point_witness(Vec x) {
  return Witness{std::move(x), std::nullopt, std::nullopt};
}

PropertyVerdict make_verdict(Property p, const CheckOptions& opts) {
  PropertyVerdict v;
  v.property = p;
  v.stats.seed = opts.seed;
  v.stats.min_value = kNaN;
  return v;
}

PropertyVerdict odd_order_verdict(Property p, const CheckOptions& opts) {
  PropertyVerdict v = make_verdict(p, opts);
  v.status = VerdictStatus::kCertifiedFails;
  v.reason = "odd order";
  return v;
}

PropertyVerdict axis_failure(Property p, const CheckOptions& opts, Witness w,
                             std::string reason) {
  PropertyVerdict v = make_verdict(p, opts);
  v.status = VerdictStatus::kFails;
  w.exact = true;
  v.witness = std::move(w);
  v.reason = std::move(reason);
  return v;
}

// First coordinate axis whose diagonal entry is not positive.
std::optional<int> nonpositive_diagonal(const Tensor& a) {
  for (int i = 0; i < a.dim(); ++i) {
    if (!(a.diagonal_entry(i) > 0.0)) return i;
  }
  return std::nullopt;
}

std::string diagonal_reason(int i) {
  return "diagonal entry " + std::to_string(i + 1) + " is not positive";
}

PropertyVerdict certified_holds(Property p, const CheckOptions& opts) {
  PropertyVerdict v = make_verdict(p, opts);
  v.certified = true;
  v.reason = "one-dimensional tensor with positive entry";
  return v;
}

}  // namespace

double p_objective(const Tensor& a, const Vec& x) {
  return x.cwiseProduct(apply_power(a, x)).maxCoeff();
}

double ssp_objective(const Tensor& a, const Vec& x) {
  const Vec f = apply_power(a, x);
  double best = -kInf;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) best = std::max(best, f[i]);
  }
  return best;
}

Vec strong_p_components(const Tensor& a, const Vec& x, const Vec& y) {
  return (x - y).cwiseProduct(apply_power(a, x) - apply_power(a, y));
}

double strong_p_objective(const Tensor& a, const Vec& x, const Vec& y) {
  return strong_p_components(a, x, y).maxCoeff();
}

double strong_p_objective(const TcpInstance& inst, const Vec& x,
                          const Vec& y) {
  return strong_p_objective(inst.tensor(), x, y);
}

PropertyVerdict p_tensor_check(const Tensor& a, const CheckOptions& opts) {
  if (a.order() % 2 == 1) return odd_order_verdict(Property::kP, opts);
  if (auto i = nonpositive_diagonal(a)) {
    return axis_failure(Property::kP, opts, point_witness(Vec::Unit(a.dim(), *i)),
                        diagonal_reason(*i));
  }
  if (a.dim() == 1) return certified_holds(Property::kP, opts);

  const Eigen::Index n = a.dim();
  SearchProblem prob{
      [&a](const Vec& x) { return p_objective(a, x); },
      normalized,
      [n](detail::Rng& rng) { return random_sphere(rng, n); },
  };
  PropertyVerdict v = make_verdict(Property::kP, opts);
  const Candidate best = sample_and_refine(prob, opts, v.stats);
  if (best.value <= -opts.witness_margin) {
    v.status = VerdictStatus::kFails;
    v.witness = point_witness(best.z);
  }
  return v;
}

PropertyVerdict ssp_check(const Tensor& a, const CheckOptions& opts) {
  if (auto i = nonpositive_diagonal(a)) {
    return axis_failure(Property::kStrictlySemiPositive, opts,
                        point_witness(Vec::Unit(a.dim(), *i)),
                        diagonal_reason(*i));
  }
  if (a.dim() == 1) return certified_holds(Property::kStrictlySemiPositive, opts);

  const int n = a.dim();
  // Samples live on random faces with at least two free coordinates; the
  // one-coordinate faces are the axes handled exactly above.
  auto sample = [n](detail::Rng& rng) {
    std::uint64_t mask = 0;
    if (n <= 2) {
      mask = (1ULL << n) - 1;
    } else {
      do {
        mask = rng.next() & ((1ULL << n) - 1);
      } while (std::popcount(mask) < 2);
    }
    Vec z = Vec::Zero(n);
    do {
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1ULL) z[i] = std::abs(rng.normal());
      }
    } while (z.norm() == 0.0);
    return Vec(z / z.norm());
  };
  SearchProblem prob{
      [&a](const Vec& x) { return ssp_objective(a, x); },
      [](const Vec& z) { return normalized(z.cwiseAbs()); },
      sample,
  };
  PropertyVerdict v = make_verdict(Property::kStrictlySemiPositive, opts);
  const Candidate best = sample_and_refine(prob, opts, v.stats);
  if (best.value <= -opts.witness_margin) {
    v.status = VerdictStatus::kFails;
    v.witness = point_witness(best.z);
  }
  return v;
}

PropertyVerdict r_tensor_check(const Tensor& a, const CheckOptions& opts) {
  if (a.dim() > opts.n_max || a.dim() > 30) {
    throw Error(ErrorCode::kTooLarge,
                "dimension exceeds the support enumeration limit");
  }
  const int n = a.dim();
  PropertyVerdict v = make_verdict(Property::kR, opts);

  // Axis witnesses: x = e_i, t = -a_{i..i} >= 0, with (A e_i^{m-1})_j + t >= 0
  // off the axis. Only exact coefficients are involved.
  for (int i = 0; i < n; ++i) {
    const double t = 0.0 - a.diagonal_entry(i);
    if (t < 0.0) continue;
    const Vec f = apply_power(a, Vec::Unit(n, i));
    bool feasible = true;
    for (int j = 0; j < n; ++j) {
      if (j != i && f[j] + t < 0.0) feasible = false;
    }
    if (feasible) {
      Witness w{Vec::Unit(n, i), std::nullopt, t};
      return axis_failure(Property::kR, opts, std::move(w),
                          "axis " + std::to_string(i + 1) +
                              " solves the degenerate system");
    }
  }
  if (n == 1) return certified_holds(Property::kR, opts);

  detail::NewtonOptions nopts;
  nopts.tol = 1e-12;
  nopts.max_iter = 100;

  std::size_t runs = 0;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) idx.push_back(i);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    auto embed = [&](const Vec& z) {
      Vec x = Vec::Zero(n);
      for (Eigen::Index c = 0; c < k; ++c) x[idx[c]] = z[c];
      return x;
    };
    // Unknowns z = (x_J, t): F_J(x) + t = 0, |x_J|^2 = 1.
    auto system = [&](const Vec& z, Vec& r, Mat* jac) {
      const Vec x = embed(z.head(k));
      const double t = z[k];
      r.resize(k + 1);
      r.head(k) = apply_power(a, x)(idx).array() + t;
      r[k] = z.head(k).squaredNorm() - 1.0;
      if (!jac) return;
      jac->setZero(k + 1, k + 1);
      jac->topLeftCorner(k, k) = power_jacobian(a, x)(idx, idx);
      jac->block(0, k, k, 1).setOnes();
      jac->block(k, 0, 1, k) = 2.0 * z.head(k).transpose();
    };
    auto rng = detail::Rng::stream(opts.seed, mask);
    for (int s = 0; s < opts.r_starts; ++s, ++runs) {
      Vec x0(k);
      if (s == 0) {
        x0.setConstant(1.0 / std::sqrt(static_cast<double>(k)));
      } else {
        for (Eigen::Index c = 0; c < k; ++c) x0[c] = std::abs(rng.normal()) + 1e-3;
        x0 /= x0.norm();
      }
      Vec z0(k + 1);
      z0.head(k) = x0;
      z0[k] = std::max(0.0, -apply_power(a, embed(x0))(idx).mean());
      const auto res = detail::damped_newton(system, z0, nopts);
      if (!res.converged) continue;
      Witness w{embed(res.z.head(k)), std::nullopt, std::max(res.z[k], 0.0)};
      if (res.z[k] < -1e-12) continue;
      if (witness_violation(a, Property::kR, w, opts)) {
        v.status = VerdictStatus::kFails;
        v.witness = std::move(w);
        v.stats.samples = runs + 1;
        return v;
      }
    }
  }
  v.stats.samples = runs;
  return v;
}

PropertyVerdict strong_p_check(const Tensor& a, const CheckOptions& opts) {
  if (a.order() % 2 == 1) return odd_order_verdict(Property::kStrongP, opts);
  const int n = a.dim();
  if (auto i = nonpositive_diagonal(a)) {
    Witness w{Vec::Unit(n, *i), Vec(Vec::Zero(n)), std::nullopt};
    return axis_failure(Property::kStrongP, opts, std::move(w),
                        diagonal_reason(*i));
  }
  if (n == 1) return certified_holds(Property::kStrongP, opts);

  const double sep = opts.separation;
  SearchProblem prob{
      [&a, n](const Vec& z) {
        return strong_p_objective(a, z.head(n), z.tail(n));
      },
      [n, sep](const Vec& z) -> std::optional<Vec> {
        auto p = normalized(z);
        if (!p || (p->head(n) - p->tail(n)).norm() < sep) return std::nullopt;
        return p;
      },
      [n, sep](detail::Rng& rng) {
        Vec z;
        do {
          z = random_sphere(rng, 2 * n);
        } while ((z.head(n) - z.tail(n)).norm() < sep);
        return z;
      },
  };
  PropertyVerdict v = make_verdict(Property::kStrongP, opts);
  const Candidate best = sample_and_refine(prob, opts, v.stats);
  if (best.value <= -opts.witness_margin) {
    v.status = VerdictStatus::kFails;
    v.witness = Witness{best.z.head(n), Vec(best.z.tail(n)), std::nullopt};
  }
  return v;
}

PropertyVerdict check_property(Property p, const Tensor& a,
                               const CheckOptions& opts) {
  switch (p) {
    case Property::kP: return p_tensor_check(a, opts);
    case Property::kStrictlySemiPositive: return ssp_check(a, opts);
    case Property::kR: return r_tensor_check(a, opts);
    case Property::kStrongP: return strong_p_check(a, opts);
  }
  throw Error(ErrorCode::kBadValue, "unknown property");
}

std::optional<double> witness_violation(const Tensor& a, Property p,
                                        const Witness& w,
                                        const CheckOptions& opts) {
  const int n = a.dim();
  if (w.x.size() != n || !w.x.allFinite()) return std::nullopt;
  auto judge = [&](double value) -> std::optional<double> {
    // value <= 0 violates the property; demand a margin unless exact.
    if (value <= -opts.witness_margin) return -value;
    if (w.exact && value <= 0.0) return -value;
    return std::nullopt;
  };
  switch (p) {
    case Property::kP:
      if (w.x.norm() == 0.0) return std::nullopt;
      return judge(p_objective(a, w.x));
    case Property::kStrictlySemiPositive:
      if (w.x.minCoeff() < 0.0 || w.x.norm() == 0.0) return std::nullopt;
      return judge(ssp_objective(a, w.x));
    case Property::kStrongP: {
      if (!w.y || w.y->size() != n) return std::nullopt;
      if ((w.x - *w.y).norm() < opts.separation && !w.exact) return std::nullopt;
      if ((w.x - *w.y).norm() == 0.0) return std::nullopt;
      return judge(strong_p_objective(a, w.x, *w.y));
    }
    case Property::kR: {
      if (!w.t || !(*w.t >= 0.0)) return std::nullopt;
      if (w.x.minCoeff() < 0.0 || w.x.norm() == 0.0) return std::nullopt;
      const Vec g = apply_power(a, w.x).array() + *w.t;
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        if (w.x[i] > 0.0) {
          if (w.x[i] < 1e-10 && !w.exact) return std::nullopt;
          worst = std::max(worst, std::abs(g[i]));
        } else {
          worst = std::max(worst, -g[i]);
        }
      }
      if (w.exact) {
        if (worst == 0.0) return 0.0;
        return std::nullopt;
      }
      if (worst <= opts.equation_tol) return opts.equation_tol - worst;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool verify_verdict(const Tensor& a, const PropertyVerdict& v,
                    const CheckOptions& opts) {
  switch (v.status) {
    case VerdictStatus::kNotDisproved:
      return true;
    case VerdictStatus::kCertifiedFails:
      return (v.property == Property::kP || v.property == Property::kStrongP) &&
             a.order() % 2 == 1;
    case VerdictStatus::kFails:
      return v.witness &&
             witness_violation(a, v.property, *v.witness, opts).has_value();
  }
  return false;
}

ModulusEstimate uniform_p_modulus(const Tensor& a, const Box& region,
                                  const CheckOptions& opts) {
  const int n = a.dim();
  if (region.lo.size() != n || region.hi.size() != n) {
    throw Error(ErrorCode::kDimMismatch, "box of the wrong dimension");
  }
  if (!((region.hi - region.lo).minCoeff() >= 0.0) || !region.lo.allFinite() ||
      !region.hi.allFinite()) {
    throw Error(ErrorCode::kBadValue, "empty or unbounded box");
  }
  const double sep = opts.separation;
  auto ratio = [&a, n](const Vec& z) {
    const Vec x = z.head(n);
    const Vec y = z.tail(n);
    const double d = (x - y).lpNorm<Eigen::Infinity>();
    return strong_p_objective(a, x, y) / (d * d);
  };
  SearchProblem prob{
      ratio,
      [&region, n, sep](const Vec& z) -> std::optional<Vec> {
        Vec c = z;
        c.head(n) = c.head(n).cwiseMax(region.lo).cwiseMin(region.hi);
        c.tail(n) = c.tail(n).cwiseMax(region.lo).cwiseMin(region.hi);
        if ((c.head(n) - c.tail(n)).lpNorm<Eigen::Infinity>() < sep) {
          return std::nullopt;
        }
        return c;
      },
      [&region, n, sep](detail::Rng& rng) {
        Vec z(2 * n);
        do {
          for (int i = 0; i < 2 * n; ++i) {
            z[i] = rng.uniform(region.lo[i % n], region.hi[i % n]);
          }
        } while ((z.head(n) - z.tail(n)).lpNorm<Eigen::Infinity>() < sep);
        return z;
      },
  };
  CheckOptions o = opts;
  o.initial_step =
      0.25 * std::max((region.hi - region.lo).maxCoeff(), 1e-12);
  SearchStats stats;
  const Candidate best = sample_and_refine(prob, o, stats);
  ModulusEstimate est;
  est.mu = best.value;
  est.x = best.z.head(n);
  est.y = best.z.tail(n);
  est.samples = stats.samples;
  return est;
}

bool diagonal_positivity(const Tensor& a) {
  return !nonpositive_diagonal(a).has_value();
}

AuditReport implication_audit(const Tensor& a, const CheckOptions& opts) {
  if (a.dim() > opts.n_max || a.dim() > 30) {
    throw Error(ErrorCode::kTooLarge, "dimension exceeds the audit limit");
  }
  const int n = a.dim();
  const std::uint32_t full = (1U << n) - 1;
  std::vector<std::uint32_t> masks{full};
  for (std::uint32_t m = 1; m < full; ++m) masks.push_back(m);

  AuditReport report;
  report.entries.resize(masks.size());
  for (std::size_t k = 0; k < masks.size(); ++k) {
    AuditEntry& e = report.entries[k];
    for (int i = 0; i < n; ++i) {
      if ((masks[k] >> i) & 1U) e.subset.push_back(i);
    }
    const Tensor sub = principal_subtensor(a, e.subset);
    e.p = p_tensor_check(sub, opts);
    e.ssp = ssp_check(sub, opts);
    e.r = r_tensor_check(sub, opts);
    e.strong_p = strong_p_check(sub, opts);
    e.diagonal_positive = diagonal_positivity(sub);
  }

  auto name = [](const AuditEntry& e) {
    std::string s = "{";
    for (std::size_t k = 0; k < e.subset.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(e.subset[k] + 1);
    }
    return s + "}";
  };
  auto& bad = report.inconsistencies;
  for (const AuditEntry& e : report.entries) {
    const std::string where = "sub-tensor " + name(e) + ": ";
    if (!e.strong_p.fails() && e.p.fails()) {
      bad.push_back(where + "strong P not disproved but P fails");
    }
    if (!e.p.fails() && e.ssp.fails()) {
      bad.push_back(where + "P not disproved but strictly semi-positive fails");
    }
    if (!e.p.fails() && e.r.fails()) {
      bad.push_back(where + "P not disproved but R fails");
    }
    if (!e.strong_p.fails() && !e.diagonal_positive) {
      bad.push_back(where + "strong P not disproved but a diagonal entry is not positive");
    }
    for (const auto* v : {&e.p, &e.ssp, &e.r, &e.strong_p}) {
      if (!verify_verdict(principal_subtensor(a, e.subset), *v, opts)) {
        bad.push_back(where + std::string(to_string(v->property)) +
                      " witness does not re-verify");
      }
    }
  }
  const AuditEntry& top = report.entries.front();
  if (!top.strong_p.fails()) {
    for (const AuditEntry& e : report.entries) {
      if (e.strong_p.fails()) {
        bad.push_back("strong P not disproved for the tensor but fails on sub-tensor " +
                      name(e));
      }
    }
  }
  return report;
}

}  // namespace tcpkit
