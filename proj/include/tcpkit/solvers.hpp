#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcpkit/tcp.hpp"

namespace tcpkit {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct SolverOptions {
  double root_tol = 1e-11;      // ||F_J||_inf accepted as a root
  double solution_tol = 1e-9;   // is_solution tolerance
  double dedupe_dist = 1e-6;    // solutions closer than this are one
  double positivity_floor = 1e-10;  // x_i >= this for i in the active set
  int grid_points = 8;          // start points per active coordinate
  double radius = 10.0;         // starts lie in [0, radius]^|J|
  int random_starts = 8;        // seeded extra starts per active set
  std::size_t max_grid_starts = 4096;  // caps grid_points^|J|
  int max_iter = 200;
  int max_halvings = 40;
  int n_max = 6;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

// Index set J of coordinates allowed to be strictly positive. Stored as a
// bitmask over 0-based coordinates.
class ActiveSet {
 public:
  ActiveSet() = default;
  explicit ActiveSet(std::uint32_t mask) : mask_(mask) {}
  static ActiveSet from_indices(std::span<const int> indices);

  std::uint32_t mask() const { return mask_; }
  bool contains(int i) const { return (mask_ >> i) & 1U; }
  int size() const;
  std::vector<int> indices() const;

  bool operator==(const ActiveSet&) const = default;

 private:
  std::uint32_t mask_ = 0;
};

struct Solution {
  Vec x;
  ResidualReport report;
};

struct SolutionSet {
  std::vector<Solution> solutions;  // sorted lexicographically by x
  SolverOptions params;
  bool exhaustive = false;
};

// Roots of F_i(x) = 0 (i in J), x_i = 0 (i not in J) with x_J >= the
// positivity floor, by multistart damped Newton. Feasibility off J is not
// checked. Roots at a singular Jacobian of corank one are polished on the
// bordered system {F_J = 0, J v = 0, |v| = 1}.
std::vector<Vec> solve_active_set(const TcpInstance& inst, ActiveSet active,
                                  const SolverOptions& opts = {});

// Union over all 2^n active sets, filtered by is_solution and deduplicated.
// Throws kTooLarge when dim > n_max.
SolutionSet enumerate_solutions(const TcpInstance& inst,
                                const SolverOptions& opts = {});

struct IterativeOptions {
  std::optional<Vec> start;
  int restarts = 16;  // seeded random starts after `start` (or the origin)
  double radius = 10.0;
  int max_iter = 200;
  int max_halvings = 40;
  double solution_tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
};

struct IterativeResult {
  bool converged = false;
  Vec x;                // solution, or the best point seen on failure
  double residual = 0;  // natural residual norm at x
  int iterations = 0;
  int starts = 0;
};

// Semismooth Newton on min(x, F(x)) = 0 with projection onto x >= 0 and
// seeded restarts. A converged point is refined on its active set.
IterativeResult solve_iterative(const TcpInstance& inst,
                                const IterativeOptions& opts = {});

struct GusOptions {
  SolverOptions solver;
  bool include_grid = true;
  double grid_lo = -2.0;
  double grid_hi = 2.0;
  int grid_steps = 9;
};

struct GusRecord {
  Vec q;
  std::vector<Vec> solutions;
  std::size_t count() const { return solutions.size(); }
};

struct GusReport {
  std::vector<GusRecord> records;  // explicit q first, then the grid
  std::vector<Vec> flags;          // q with zero or several solutions
  bool violated = false;
};

// Uniform grid with `steps` points per axis over [lo, hi]^dim, last axis
// fastest.
std::vector<Vec> q_grid(int dim, double lo, double hi, int steps);

GusReport gus_probe(const Tensor& a, std::span<const Vec> q_list,
                    const GusOptions& opts = {});

struct BoundednessReport {
  std::vector<double> radii;
  std::vector<SolutionSet> sets;  // one per radius
  bool stabilized = false;  // same set at the two largest radii
  bool nonempty = false;    // set at the largest radius is nonempty
};

// Throws kBadValue unless radii are >= 1 and strictly increasing.
BoundednessReport boundedness_probe(const TcpInstance& inst,
                                    std::span<const double> radii,
                                    const SolverOptions& opts = {});

// True when every point of `a` is within `dist` of a point of `b` and vice
// versa, with equal sizes.
bool same_point_set(std::span<const Vec> a, std::span<const Vec> b,
                    double dist);

}  // namespace tcpkit
