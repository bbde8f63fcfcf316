#include "stable_alloc/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stable_alloc/errors.hpp"

namespace stalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alloc(const Allocation& a) {
  if (a.cell_count() != a.grid.cell_count() ||
      static_cast<std::int64_t>(a.loads.size()) != a.centers.size() ||
      !(a.grid.region() == a.centers.region())) {
    throw InvalidInputError("allocation inconsistent with its grid/centers");
  }
}

UnstablePair make_pair_entry(std::int64_t cell, std::int32_t c, double d2,
                             double cur2, bool unsated, bool farther) {
  return UnstablePair{cell,
                      c,
                      std::sqrt(d2),
                      cur2 == kInf ? kInf : std::sqrt(cur2),
                      cur2 != kInf && d2 < cur2,
                      cur2 == kInf,
                      unsated,
                      farther};
}

}  // namespace

std::vector<UnstablePair> verify_stability(const Allocation& a) {
  check_alloc(a);
  const std::int64_t n = a.centers.size();
  const std::int64_t cells = a.cell_count();
  const Region& region = a.grid.region();

  // max held squared distance per center, -inf when empty
  std::vector<double> max_held(static_cast<std::size_t>(n), -kInf);
  for (std::int64_t x = 0; x < cells; ++x) {
    std::int32_t c = a.assignment[static_cast<std::size_t>(x)];
    if (c == kUnclaimed) continue;
    double d2 = region.dist2(a.grid.cell_center(x), a.centers.center(c));
    auto& m = max_held[static_cast<std::size_t>(c)];
    m = std::max(m, d2);
  }

  std::vector<UnstablePair> out;
  for (std::int64_t x = 0; x < cells; ++x) {
    const Point p = a.grid.cell_center(x);
    const std::int32_t cur = a.assignment[static_cast<std::size_t>(x)];
    const double cur2 =
        cur == kUnclaimed ? kInf : region.dist2(p, a.centers.center(cur));
    for (std::int32_t c = 0; c < n; ++c) {
      if (c == cur) continue;
      const double d2 = region.dist2(p, a.centers.center(c));
      if (!(d2 < cur2)) continue;  // does not desire
      const bool unsated = a.loads[static_cast<std::size_t>(c)] < a.quota;
      const bool farther = d2 < max_held[static_cast<std::size_t>(c)];
      if (unsated || farther) {
        out.push_back(make_pair_entry(x, c, d2, cur2, unsated, farther));
      }
    }
  }
  return out;  // scan order is already (cell, center)
}

std::vector<UnstablePair> verify_stability_naive(const Allocation& a) {
  check_alloc(a);
  const std::int64_t n = a.centers.size();
  const std::int64_t cells = a.cell_count();
  const Region& region = a.grid.region();

  std::vector<std::vector<std::int64_t>> held(static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < cells; ++x) {
    std::int32_t c = a.assignment[static_cast<std::size_t>(x)];
    if (c != kUnclaimed) held[static_cast<std::size_t>(c)].push_back(x);
  }

  std::vector<UnstablePair> out;
  for (std::int64_t x = 0; x < cells; ++x) {
    const Point p = a.grid.cell_center(x);
    const std::int32_t cur = a.assignment[static_cast<std::size_t>(x)];
    const double cur2 =
        cur == kUnclaimed ? kInf : region.dist2(p, a.centers.center(cur));
    for (std::int32_t c = 0; c < n; ++c) {
      if (c == cur) continue;
      const double d2 = region.dist2(p, a.centers.center(c));
      if (!(d2 < cur2)) continue;
      const bool unsated = a.loads[static_cast<std::size_t>(c)] < a.quota;
      bool farther = false;
      for (std::int64_t y : held[static_cast<std::size_t>(c)]) {
        if (region.dist2(a.grid.cell_center(y), a.centers.center(c)) > d2) {
          farther = true;
          break;
        }
      }
      if (unsated || farther) {
        out.push_back(make_pair_entry(x, c, d2, cur2, unsated, farther));
      }
    }
  }
  return out;
}

ValidationReport validate(const Allocation& a) {
  ValidationReport r;
  const std::int64_t n = a.centers.size();

  std::vector<std::int64_t> counted(static_cast<std::size_t>(n), 0);
  for (std::int64_t x = 0; x < a.cell_count(); ++x) {
    std::int32_t c = a.assignment[static_cast<std::size_t>(x)];
    if (c == kUnclaimed) {
      ++r.unclaimed_cells;
    } else if (c < 0 || c >= n) {
      r.violations.push_back("cell " + std::to_string(x) +
                             " assigned to out-of-range center " +
                             std::to_string(c));
    } else {
      ++counted[static_cast<std::size_t>(c)];
    }
  }
  for (std::int32_t c = 0; c < n; ++c) {
    std::int64_t load = a.loads[static_cast<std::size_t>(c)];
    if (load != counted[static_cast<std::size_t>(c)]) {
      r.violations.push_back("center " + std::to_string(c) +
                             " load field disagrees with assignment");
    }
    if (load > a.quota) {
      r.violations.push_back("center " + std::to_string(c) + " over quota: " +
                             std::to_string(load) + " > " +
                             std::to_string(a.quota));
    }
    if (load < a.quota) ++r.unsated_centers;
  }
  if (r.unclaimed_cells > 0 && r.unsated_centers > 0) {
    r.violations.push_back(
        "unclaimed cells and unsated centers coexist (" +
        std::to_string(r.unclaimed_cells) + " cells, " +
        std::to_string(r.unsated_centers) + " centers)");
  }
  r.ok = r.violations.empty();
  return r;
}

CompareReport compare(const Allocation& a, const Allocation& b) {
  if (!(a.grid == b.grid) || !(a.centers == b.centers) ||
      !(a.alpha == b.alpha || (std::isinf(a.alpha) && std::isinf(b.alpha)))) {
    throw InvalidInputError("compare requires identical grid/centers/appetite");
  }
  CompareReport r;
  const std::int64_t n = a.centers.size();
  const Region& region = a.grid.region();
  for (std::int64_t x = 0; x < a.cell_count(); ++x) {
    if (a.assignment[static_cast<std::size_t>(x)] ==
        b.assignment[static_cast<std::size_t>(x)])
      continue;
    r.disagreements.push_back(x);
    const Point p = a.grid.cell_center(x);
    bool tie = false;
    for (std::int32_t i = 0; i < n && !tie; ++i) {
      double di = region.dist2(p, a.centers.center(i));
      for (std::int32_t j = i + 1; j < n; ++j) {
        if (di == region.dist2(p, a.centers.center(j))) {
          tie = true;
          break;
        }
      }
    }
    if (tie) r.tie_involved.push_back(x);
  }
  return r;
}

}  // namespace stalloc
