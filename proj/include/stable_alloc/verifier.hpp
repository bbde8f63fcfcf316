#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stable_alloc/allocator.hpp"

namespace stalloc {

/// A site-center pair where the site strictly prefers the center over its
/// current assignment (or is unclaimed) and the center is unsated or holds a
/// strictly farther site. Stability means no such pair exists.
struct UnstablePair {
  std::int64_t cell;
  std::int32_t center;
  double cell_to_center;   // distance from the cell to the coveting center
  double cell_to_current;  // distance to the current center, +inf unclaimed
  bool desires_closer;     // center strictly closer than current
  bool desires_unclaimed;  // cell is unclaimed
  bool covets_unsated;     // center below quota
  bool covets_farther;     // center holds a strictly farther cell
};

// Exhaustive (cell, center) scan. The covet test is O(1) per pair via each
// center's max held distance. Output sorted by (cell, center).
std::vector<UnstablePair> verify_stability(const Allocation& alloc);

// Same predicate with the covet clause evaluated directly against the held
// set, for cross-checking the accelerated test on small instances.
std::vector<UnstablePair> verify_stability_naive(const Allocation& alloc);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::int64_t unclaimed_cells = 0;
  std::int64_t unsated_centers = 0;
};

// Structural validity: loads within quota and consistent with the
// assignment, entries in range, and never both an unclaimed cell and an
// unsated center.
ValidationReport validate(const Allocation& alloc);

struct CompareReport {
  std::vector<std::int64_t> disagreements;  // cells assigned differently
  // Disagreeing cells that are exactly equidistant from two or more centers.
  std::vector<std::int64_t> tie_involved;
};

// Requires identical grid, centers and appetite.
CompareReport compare(const Allocation& a, const Allocation& b);

}  // namespace stalloc
