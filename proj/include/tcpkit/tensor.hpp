#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace tcpkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// One stored coefficient a_{i1 i2 ... im}. Indices are 0-based in the C++ and
// Python APIs; the JSON file format is 1-based.
struct Entry {
  std::vector<int> index;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

// A real m-th order n-dimensional tensor in sparse coordinate storage.
// Entries are kept sorted lexicographically by index with no duplicates, so
// two tensors holding the same coefficients compare equal. No symmetry is
// assumed. Immutable after construction.
class Tensor {
 public:
  // Validates and sorts `entries`. Throws Error with kBadIndex for a bad
  // order, dimension or index tuple, kDuplicateEntry for a repeated tuple and
  // kBadValue for a non-finite coefficient. Explicit zeros are kept.
  static Tensor from_entries(int order, int dim, std::vector<Entry> entries);

  // The all-zero tensor.
  static Tensor zero(int order, int dim);

  // a_{ii...i} = values[i], all other entries zero.
  static Tensor diagonal(int order, std::span<const double> values);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  // Coefficient at `index`, zero when absent.
  double at(std::span<const int> index) const;
  // a_{ii...i}.
  double diagonal_entry(int i) const;

  bool operator==(const Tensor&) const = default;

 private:
  Tensor(int order, int dim, std::vector<Entry> entries)
      : order_(order), dim_(dim), entries_(std::move(entries)) {}

  int order_ = 2;
  int dim_ = 1;
  std::vector<Entry> entries_;
};

// Entrywise sum; coefficients at a shared index are added.
Tensor operator+(const Tensor& a, const Tensor& b);

// (A x^{m-1})_i = sum a_{i i2..im} x_{i2} ... x_{im}. Throws kDimMismatch.
Vec apply_power(const Tensor& a, const Vec& x);

// A x^m = x . (A x^{m-1}).
double form_value(const Tensor& a, const Vec& x);

// Jacobian of x -> A x^{m-1}.
Mat power_jacobian(const Tensor& a, const Vec& x);

// Derivative of x -> power_jacobian(a, x) * v, i.e. the matrix H with
// H(i, k) = sum_j d^2 (A x^{m-1})_i / dx_j dx_k * v_j.
Mat power_hessian_vector(const Tensor& a, const Vec& x, const Vec& v);

// Restriction of every index to `subset` (0-based, any order, no repeats),
// reindexed by the sorted order of the subset. Throws kBadIndexSet.
Tensor principal_subtensor(const Tensor& a, std::span<const int> subset);

// Each of the dim^order index tuples is stored with probability `density`
// and a coefficient drawn uniformly from [lo, hi]. Deterministic in `seed`.
// Throws kBadValue for density outside (0, 1] or an empty or non-finite
// range.
Tensor random_tensor(int order, int dim, double density, double lo, double hi,
                     std::uint64_t seed);

}  // namespace tcpkit
