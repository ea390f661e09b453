#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcpkit/solvers.hpp"
#include "tcpkit/tcp.hpp"

namespace tcpkit {

enum class Property { kP, kStrictlySemiPositive, kR, kStrongP };

std::string_view to_string(Property p);

enum class VerdictStatus { kFails, kNotDisproved, kCertifiedFails };

std::string_view to_string(VerdictStatus s);

// A point x (P, strictly semi-positive), a pair (x, y) (strong P) or a pair
// (x, t) (R) violating the defining condition of a property.
struct Witness {
  Vec x;
  std::optional<Vec> y;
  std::optional<double> t;
  // Set when the violation was confirmed with exact arithmetic at a
  // coordinate axis, in which case the margin may be zero.
  bool exact = false;
};

struct SearchStats {
  std::size_t samples = 0;
  int refinements = 0;
  double min_value = 0.0;  // best objective found; NaN when not applicable
  std::uint64_t seed = kDefaultSeed;
};

// Universal properties can only be disproved by a witness; NotDisproved is
// never a proof, except that `certified` is set when the one-dimensional
// exact rule decided that the property holds.
struct PropertyVerdict {
  Property property = Property::kP;
  VerdictStatus status = VerdictStatus::kNotDisproved;
  std::optional<Witness> witness;
  std::string reason;
  SearchStats stats;
  bool certified = false;

  bool fails() const { return status != VerdictStatus::kNotDisproved; }
};

struct CheckOptions {
  std::size_t samples = 20000;
  int refine_top = 50;
  int refine_iters = 500;
  double shrink = 0.5;
  double initial_step = 0.25;
  double witness_margin = 1e-10;  // tau_wit
  double separation = 1e-8;       // delta_sep for pairs
  double equation_tol = 1e-9;     // R-tensor witness equalities
  int r_starts = 16;              // Newton starts per support (R check)
  int n_max = 6;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

// phi(x) = max_i x_i (A x^{m-1})_i. A is a P tensor iff phi > 0 off zero.
double p_objective(const Tensor& a, const Vec& x);

// max over {i : x_i > 0} of (A x^{m-1})_i for x >= 0, x != 0. A is strictly
// semi-positive iff this is positive on the nonnegative orthant minus zero.
// Returns -infinity for x = 0.
double ssp_objective(const Tensor& a, const Vec& x);

// (x_i - y_i)((A x^{m-1})_i - (A y^{m-1})_i) for each i.
Vec strong_p_components(const Tensor& a, const Vec& x, const Vec& y);

// psi(x, y) = max of strong_p_components.
double strong_p_objective(const Tensor& a, const Vec& x, const Vec& y);

// psi for F(x) = A x^{m-1} + q. The shift q cancels in F(x) - F(y) and is
// not read, so the result does not depend on q.
double strong_p_objective(const TcpInstance& inst, const Vec& x, const Vec& y);

PropertyVerdict p_tensor_check(const Tensor& a, const CheckOptions& opts = {});
PropertyVerdict ssp_check(const Tensor& a, const CheckOptions& opts = {});
// Throws kTooLarge when dim > n_max.
PropertyVerdict r_tensor_check(const Tensor& a, const CheckOptions& opts = {});
PropertyVerdict strong_p_check(const Tensor& a, const CheckOptions& opts = {});

PropertyVerdict check_property(Property p, const Tensor& a,
                               const CheckOptions& opts = {});

// Re-evaluates a Fails witness from apply_power alone. Returns the margin by
// which the defining condition is violated (> 0 for a valid witness, >= 0
// for an exact one), or nullopt when the witness is malformed or does not
// violate the property.
std::optional<double> witness_violation(const Tensor& a, Property p,
                                        const Witness& w,
                                        const CheckOptions& opts = {});

// Fails/CertifiedFails verdicts are re-verified; CertifiedFails is accepted
// only for odd order. NotDisproved verdicts are always consistent.
bool verify_verdict(const Tensor& a, const PropertyVerdict& v,
                    const CheckOptions& opts = {});

struct Box {
  Vec lo;
  Vec hi;
};

struct ModulusEstimate {
  double mu = 0.0;  // min of psi(x, y) / |x - y|_inf^2 over examined pairs
  Vec x;
  Vec y;
  std::size_t samples = 0;
};

// Sampled estimate of the uniform P-function modulus of x -> A x^{m-1} over
// box x box, with the sup norm on x - y. Sampling is followed by direct-search
// refinement of the best pairs inside the box. A negative estimate is a
// strong-P witness.
ModulusEstimate uniform_p_modulus(const Tensor& a, const Box& region,
                                  const CheckOptions& opts = {});

// a_{ii...i} > 0 for every i.
bool diagonal_positivity(const Tensor& a);

struct AuditEntry {
  std::vector<int> subset;  // 0-based indices of the principal sub-tensor
  PropertyVerdict p;
  PropertyVerdict ssp;
  PropertyVerdict r;
  PropertyVerdict strong_p;
  bool diagonal_positive = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;  // full index set first
  std::vector<std::string> inconsistencies;
  bool consistent() const { return inconsistencies.empty(); }
};

// Runs every checker on A and on all of its principal sub-tensors and lists
// verdict combinations that contradict strong P => P => {strictly
// semi-positive, R}, strong P => positive diagonal, and closure of strong P
// under taking principal sub-tensors. Throws kTooLarge when dim > n_max.
AuditReport implication_audit(const Tensor& a, const CheckOptions& opts = {});

}  // namespace tcpkit
