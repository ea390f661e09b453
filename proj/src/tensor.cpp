#include "tcpkit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "tcpkit/error.hpp"
#include "rng.hpp"

namespace tcpkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateEntry: return "DuplicateEntry";
    case ErrorCode::kBadIndex: return "BadIndex";
    case ErrorCode::kBadValue: return "BadValue";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kBadIndexSet: return "BadIndexSet";
    case ErrorCode::kBadTolerance: return "BadTolerance";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kBadEigenvector: return "BadEigenvector";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string format_index(const std::vector<int>& index) {
  std::string s = "(";
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(index[k]);
  }
  return s + ")";
}

void check_dim(const Tensor& a, const Vec& x) {
  if (x.size() != a.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "vector of length " + std::to_string(x.size()) +
                    " applied to tensor of dimension " +
                    std::to_string(a.dim()));
  }
}

// Product of x over the trailing indices of `e`, skipping positions `skip1`
// and `skip2` (position numbering starts at 1 for the first trailing index).
double trailing_product(const Entry& e, const Vec& x, std::size_t skip1 = 0,
                        std::size_t skip2 = 0) {
  double p = 1.0;
  for (std::size_t s = 1; s < e.index.size(); ++s) {
    if (s == skip1 || s == skip2) continue;
    p *= x[e.index[s]];
  }
  return p;
}

}  // namespace

Tensor Tensor::from_entries(int order, int dim, std::vector<Entry> entries) {
  if (order < 2) {
    throw Error(ErrorCode::kBadIndex,
                "order must be >= 2, got " + std::to_string(order));
  }
  if (dim < 1) {
    throw Error(ErrorCode::kBadIndex,
                "dim must be >= 1, got " + std::to_string(dim));
  }
  for (const Entry& e : entries) {
    if (static_cast<int>(e.index.size()) != order) {
      throw Error(ErrorCode::kBadIndex, "index " + format_index(e.index) +
                                            " does not have " +
                                            std::to_string(order) +
                                            " components");
    }
    for (int i : e.index) {
      if (i < 0 || i >= dim) {
        throw Error(ErrorCode::kBadIndex,
                    "index " + format_index(e.index) + " out of range");
      }
    }
    if (!std::isfinite(e.value)) {
      throw Error(ErrorCode::kBadValue,
                  "non-finite value at " + format_index(e.index));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& l, const Entry& r) { return l.index < r.index; });
  auto dup = std::adjacent_find(
      entries.begin(), entries.end(),
      [](const Entry& l, const Entry& r) { return l.index == r.index; });
  if (dup != entries.end()) {
    throw Error(ErrorCode::kDuplicateEntry,
                "index " + format_index(dup->index) + " given twice");
  }
  return Tensor(order, dim, std::move(entries));
}

Tensor Tensor::zero(int order, int dim) { return from_entries(order, dim, {}); }

Tensor Tensor::diagonal(int order, std::span<const double> values) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    entries.push_back({std::vector<int>(order, static_cast<int>(i)), values[i]});
  }
  return from_entries(order, static_cast<int>(values.size()),
                      std::move(entries));
}

double Tensor::at(std::span<const int> index) const {
  const std::vector<int> key(index.begin(), index.end());
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const Entry& e, const std::vector<int>& k) { return e.index < k; });
  if (it != entries_.end() && it->index == key) return it->value;
  return 0.0;
}

double Tensor::diagonal_entry(int i) const {
  const std::vector<int> key(order_, i);
  return at(key);
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimMismatch, "adding tensors of different shape");
  }
  std::map<std::vector<int>, double> merged;
  for (const Entry& e : a.entries()) merged[e.index] += e.value;
  for (const Entry& e : b.entries()) merged[e.index] += e.value;
  std::vector<Entry> entries;
  entries.reserve(merged.size());
  for (auto& [index, value] : merged) entries.push_back({index, value});
  return Tensor::from_entries(a.order(), a.dim(), std::move(entries));
}

Vec apply_power(const Tensor& a, const Vec& x) {
  check_dim(a, x);
  Vec out = Vec::Zero(a.dim());
  for (const Entry& e : a.entries()) {
    out[e.index[0]] += e.value * trailing_product(e, x);
  }
  return out;
}

double form_value(const Tensor& a, const Vec& x) {
  return x.dot(apply_power(a, x));
}

Mat power_jacobian(const Tensor& a, const Vec& x) {
  check_dim(a, x);
  Mat jac = Mat::Zero(a.dim(), a.dim());
  const std::size_t m = static_cast<std::size_t>(a.order());
  for (const Entry& e : a.entries()) {
    for (std::size_t s = 1; s < m; ++s) {
      jac(e.index[0], e.index[s]) += e.value * trailing_product(e, x, s);
    }
  }
  return jac;
}

Mat power_hessian_vector(const Tensor& a, const Vec& x, const Vec& v) {
  check_dim(a, x);
  check_dim(a, v);
  Mat h = Mat::Zero(a.dim(), a.dim());
  const std::size_t m = static_cast<std::size_t>(a.order());
  for (const Entry& e : a.entries()) {
    for (std::size_t s = 1; s < m; ++s) {
      for (std::size_t r = 1; r < m; ++r) {
        if (r == s) continue;
        h(e.index[0], e.index[r]) +=
            e.value * v[e.index[s]] * trailing_product(e, x, s, r);
      }
    }
  }
  return h;
}

Tensor principal_subtensor(const Tensor& a, std::span<const int> subset) {
  if (subset.empty()) {
    throw Error(ErrorCode::kBadIndexSet, "index set is empty");
  }
  std::vector<int> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kBadIndexSet, "index set has repeated members");
  }
  if (sorted.front() < 0 || sorted.back() >= a.dim()) {
    throw Error(ErrorCode::kBadIndexSet, "index set out of range");
  }
  std::vector<int> position(a.dim(), -1);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    position[sorted[k]] = static_cast<int>(k);
  }
  std::vector<Entry> kept;
  for (const Entry& e : a.entries()) {
    Entry r{std::vector<int>(e.index.size()), e.value};
    bool inside = true;
    for (std::size_t s = 0; s < e.index.size() && inside; ++s) {
      r.index[s] = position[e.index[s]];
      inside = r.index[s] >= 0;
    }
    if (inside) kept.push_back(std::move(r));
  }
  return Tensor::from_entries(a.order(), static_cast<int>(sorted.size()),
                              std::move(kept));
}

Tensor random_tensor(int order, int dim, double density, double lo, double hi,
                     std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw Error(ErrorCode::kBadValue, "density must lie in (0, 1]");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw Error(ErrorCode::kBadValue, "empty value range");
  }
  if (order < 2 || dim < 1) {
    throw Error(ErrorCode::kBadIndex, "bad tensor shape");
  }
  detail::Rng rng(seed);
  std::vector<Entry> entries;
  std::vector<int> index(order, 0);
  while (true) {
    if (rng.unit() < density) {
      entries.push_back({index, lo + (hi - lo) * rng.unit()});
    }
    int k = order - 1;
    while (k >= 0 && ++index[k] == dim) index[k--] = 0;
    if (k < 0) break;
  }
  return Tensor::from_entries(order, dim, std::move(entries));
}

}  // namespace tcpkit
