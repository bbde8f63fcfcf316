#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stable_alloc/grid.hpp"
#include "stable_alloc/sources.hpp"

namespace stalloc {

inline constexpr std::int32_t kUnclaimed = -1;

enum class Algo { greedy, site_optimal, center_optimal };

/// Deterministic tie handling. Candidate (cell, center) pairs are totally
/// ordered by (squared distance, center index, cell index); a site ranks
/// centers by (distance, center index) and a center ranks cells by
/// (distance, cell index). All three procedures share this order, so exact
/// float ties never introduce nondeterminism.
struct TieRule {
  static bool pair_less(double d2a, std::int32_t ca, std::int64_t xa,
                        double d2b, std::int32_t cb, std::int64_t xb) {
    if (d2a != d2b) return d2a < d2b;
    if (ca != cb) return ca < cb;
    return xa < xb;
  }
};

/// A total assignment of grid cells to centers (or kUnclaimed), together
/// with the instance it was computed for. Owns copies of the (small) grid
/// and center set, so allocations are self-contained values.
struct Allocation {
  Grid grid;
  CenterSet centers;
  double alpha;
  std::int64_t quota;
  Algo algo;
  std::vector<std::int32_t> assignment;  // per cell
  std::vector<std::int64_t> loads;       // per center, cells held
  std::int64_t stages = 0;               // 1 for greedy's single pass

  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(assignment.size());
  }
  std::int64_t unclaimed_count() const;
  std::int64_t unsated_count() const;
  // Squared distance from a cell's center to its assigned center; +inf when
  // unclaimed.
  double assigned_dist2(std::int64_t cell) const;
};

// Per-stage diagnostics from the Gale-Shapley procedures. radii[s][c] is the
// rejection radius (site-optimal) or application radius (center-optimal) of
// center c at stage s, +inf while undefined. Rejection radii are
// nonincreasing and application radii nondecreasing in s.
struct StageTrace {
  std::vector<std::vector<double>> radii;
};

// Single pass over (cell, center) pairs in increasing TieRule order; a pair
// assigns iff the cell is free and the center below quota. Equivalent to
// simultaneously growing spheres. Production default.
Allocation allocate_greedy(const Grid& grid, const CenterSet& cs, double alpha);

// Staged deferred acceptance, sites proposing: each unresolved cell applies
// to the nearest center that has not rejected it; each center keeps its
// quota nearest applicants and rejects the rest.
Allocation allocate_site_optimal(const Grid& grid, const CenterSet& cs,
                                 double alpha, StageTrace* trace = nullptr);

// Staged deferred acceptance, centers proposing: each center applies to its
// quota nearest cells that have not rejected it; each cell shortlists the
// nearest applicant.
Allocation allocate_center_optimal(const Grid& grid, const CenterSet& cs,
                                   double alpha, StageTrace* trace = nullptr);

Allocation allocate(const Grid& grid, const CenterSet& cs, double alpha,
                    Algo algo);

const char* algo_name(Algo algo);
Algo algo_from_name(const std::string& name);

}  // namespace stalloc
