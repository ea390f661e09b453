#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tcpkit/properties.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

enum class EigenKind { kH, kZ };

std::string_view to_string(EigenKind k);

// H: A x^{m-1} = lambda x^[m-1] (componentwise power), x != 0.
// Z: A x^{m-1} = lambda x, |x| = 1.
// Returned vectors have unit 2-norm for both kinds.
struct EigenPair {
  EigenKind kind = EigenKind::kZ;
  double lambda = 0.0;
  Vec x;
  double residual = 0.0;
};

struct EigenOptions {
  int grid = 10000;          // angle grid for n = 2
  double bisect_tol = 1e-13; // angle bracket width
  double residual_tol = 1e-10;
  double dedupe = 1e-6;
  int starts = 64;           // multistart count for n >= 3
  int power_iters = 300;
  std::uint64_t seed = kDefaultSeed;
};

struct Spectrum {
  EigenKind kind = EigenKind::kZ;
  std::vector<EigenPair> pairs;  // sorted by lambda, then x
  bool heuristic = false;   // n >= 3: multistart search, may miss pairs
  bool degenerate = false;  // every direction is an eigenvector; pairs are
                            // representatives only
  int brackets = 0;         // n = 2: zero crossings found on the grid
};

// Norm of the defining equation's residual for pair.kind, evaluated at
// pair.x as given. Throws kBadEigenvector for a zero vector and
// kDimMismatch for a wrong length.
double eigen_residual(const Tensor& a, const EigenPair& pair);

Spectrum z_eigenpairs(const Tensor& a, const EigenOptions& opts = {});
Spectrum h_eigenpairs(const Tensor& a, const EigenOptions& opts = {});

struct PositivityReport {
  Spectrum h;
  Spectrum z;
  double min_h = 0.0;  // NaN when no pair was found
  double min_z = 0.0;
  bool all_positive = false;
  PropertyVerdict strong_p;
  // Strong P was not disproved yet some computed eigenvalue is <= 0. Strong
  // P tensors have only positive H- and Z-eigenvalues, so this points at a
  // bug in a checker or an eigen solver.
  bool contradiction = false;
};

PositivityReport positivity_report(const Tensor& a,
                                   const EigenOptions& opts = {},
                                   const CheckOptions& check = {});

}  // namespace tcpkit
