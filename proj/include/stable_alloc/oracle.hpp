#pragma once

#include <cstdint>
#include <vector>

namespace stalloc::oracle {

/// A tiny quota-matching instance given by an explicit cells x centers
/// distance matrix. Strict preference orders on both sides are derived from
/// the distances with ties broken by index (cells order centers by
/// (distance, center index); centers order cells by (distance, cell index)).
/// Shares no geometry or allocator code on purpose.
struct TinyInstance {
  static constexpr int kMaxCells = 16;
  static constexpr int kMaxCenters = 5;

  TinyInstance(int n_cells, int n_centers, std::vector<double> distances,
               std::vector<int> quotas);
  TinyInstance(int n_cells, int n_centers, std::vector<double> distances,
               int uniform_quota);

  double dist(int cell, int center) const {
    return distances[static_cast<std::size_t>(cell * n_centers + center)];
  }

  int n_cells;
  int n_centers;
  std::vector<double> distances;  // row-major, cells x centers
  std::vector<int> quotas;        // per center
};

// Cell -> center index, -1 for unmatched.
using TinyAssignment = std::vector<int>;

enum class Proposer { sites, centers };

// Textbook deferred acceptance with quotas under the derived strict
// preferences. Deterministic.
TinyAssignment oracle_deferred_acceptance(const TinyInstance& inst,
                                          Proposer proposer);

// All quota-respecting assignments with no unstable pair under the strict
// distance inequalities (a pair blocks when the cell is strictly closer than
// its current match or unmatched, and the center is unsated or holds a
// strictly farther cell). Exhaustive search with sound pruning; results are
// in lexicographic order.
std::vector<TinyAssignment> oracle_enumerate(const TinyInstance& inst);

// True when all entries of the distance matrix are pairwise distinct, so no
// preference on either side involves an exact tie.
bool tie_free(const TinyInstance& inst);

}  // namespace stalloc::oracle
