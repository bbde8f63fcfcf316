#include "stable_alloc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <string>
#include <unordered_map>

#include "ring_stream.hpp"
#include "stable_alloc/errors.hpp"

namespace stalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_instance(const Grid& grid, const CenterSet& cs) {
  if (!(grid.region() == cs.region())) {
    throw InvalidInputError("grid and center set regions differ");
  }
}

Allocation make_empty(const Grid& grid, const CenterSet& cs, double alpha,
                      std::int64_t quota, Algo algo) {
  Allocation a{grid,
               cs,
               alpha,
               quota,
               algo,
               std::vector<std::int32_t>(
                   static_cast<std::size_t>(grid.cell_count()), kUnclaimed),
               std::vector<std::int64_t>(static_cast<std::size_t>(cs.size()), 0),
               0};
  return a;
}

// Hard cap on deferred-acceptance stages; hitting it means a bug, not input.
std::int64_t stage_limit(const Grid& grid, const CenterSet& cs) {
  return grid.cell_count() * std::max<std::int64_t>(1, cs.size()) + 2;
}

}  // namespace

std::int64_t Allocation::unclaimed_count() const {
  std::int64_t k = 0;
  for (std::int32_t v : assignment) k += (v == kUnclaimed);
  return k;
}

std::int64_t Allocation::unsated_count() const {
  std::int64_t k = 0;
  for (std::int64_t l : loads) k += (l < quota);
  return k;
}

double Allocation::assigned_dist2(std::int64_t cell) const {
  std::int32_t c = assignment[static_cast<std::size_t>(cell)];
  if (c == kUnclaimed) return kInf;
  return grid.region().dist2(grid.cell_center(cell), centers.center(c));
}

Allocation allocate_greedy(const Grid& grid, const CenterSet& cs,
                           double alpha) {
  check_instance(grid, cs);
  const std::int64_t quota = quota_cells(alpha, grid);
  const std::int64_t n = cs.size();
  const std::int64_t cells = grid.cell_count();
  Allocation a = make_empty(grid, cs, alpha, quota, Algo::greedy);
  a.stages = 1;
  if (n == 0 || quota == 0) return a;

  std::vector<std::unique_ptr<detail::CellStream>> streams(
      static_cast<std::size_t>(n));
  using Entry = std::pair<double, std::int32_t>;  // (head dist2, center)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> frontier;
  for (std::int32_t c = 0; c < n; ++c) {
    auto& s = streams[static_cast<std::size_t>(c)];
    s = std::make_unique<detail::CellStream>(grid, cs.center(c));
    frontier.push({s->peek()->first, c});
  }

  std::int64_t assigned = 0;
  while (!frontier.empty() && assigned < cells) {
    const std::int32_t c = frontier.top().second;
    frontier.pop();
    auto& s = streams[static_cast<std::size_t>(c)];
    const detail::Cand* cand = s->peek();
    const std::int64_t cell = cand->second;
    s->pop();
    auto& slot = a.assignment[static_cast<std::size_t>(cell)];
    if (slot == kUnclaimed) {
      slot = c;
      ++assigned;
      if (++a.loads[static_cast<std::size_t>(c)] >= quota) {
        s.reset();  // sated; drop its pending candidates
        continue;
      }
    }
    if (const detail::Cand* next = s->peek()) {
      frontier.push({next->first, c});
    } else {
      s.reset();
    }
  }
  return a;
}

Allocation allocate_site_optimal(const Grid& grid, const CenterSet& cs,
                                 double alpha, StageTrace* trace) {
  check_instance(grid, cs);
  const std::int64_t quota = quota_cells(alpha, grid);
  const std::int64_t n = cs.size();
  const std::int64_t cells = grid.cell_count();
  Allocation a = make_empty(grid, cs, alpha, quota, Algo::site_optimal);
  if (n == 0 || quota == 0) return a;

  detail::CenterBuckets buckets(cs);
  std::vector<std::int32_t> target(static_cast<std::size_t>(cells), kUnclaimed);
  std::vector<std::int32_t> rank(static_cast<std::size_t>(cells), 0);
  // Persistent center streams only for cells that have been rejected; a
  // cell's rejectors are always a prefix of its preference order, so one
  // stream with a cursor is enough.
  std::unordered_map<std::int64_t, detail::CenterStream> streams;

  using App = std::pair<double, std::int64_t>;  // (dist2, cell)
  std::vector<std::vector<App>> apps(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> dirty(static_cast<std::size_t>(n), 1);

  for (std::int64_t cell = 0; cell < cells; ++cell) {
    detail::CenterStream s(buckets, grid.cell_center(cell));
    const detail::Cand* head = s.peek();
    target[static_cast<std::size_t>(cell)] =
        static_cast<std::int32_t>(head->second);
    apps[static_cast<std::size_t>(head->second)].push_back(
        {head->first, cell});
  }

  std::vector<double> radii(static_cast<std::size_t>(n), kInf);
  const std::int64_t max_stages = stage_limit(grid, cs);
  std::vector<std::int64_t> rejected;
  while (true) {
    if (++a.stages > max_stages) {
      throw std::logic_error("site-optimal stage limit exceeded");
    }
    rejected.clear();
    for (std::int32_t c = 0; c < n; ++c) {
      if (!dirty[static_cast<std::size_t>(c)]) continue;
      dirty[static_cast<std::size_t>(c)] = 0;
      auto& as = apps[static_cast<std::size_t>(c)];
      if (static_cast<std::int64_t>(as.size()) > quota) {
        auto nth = as.begin() + static_cast<std::ptrdiff_t>(quota) - 1;
        std::nth_element(as.begin(), nth, as.end());
        for (auto it = nth + 1; it != as.end(); ++it) {
          rejected.push_back(it->second);
        }
        as.resize(static_cast<std::size_t>(quota));
        radii[static_cast<std::size_t>(c)] = std::sqrt(nth->first);
      } else if (trace && static_cast<std::int64_t>(as.size()) == quota &&
                 !as.empty()) {
        double m = 0.0;
        for (const App& e : as) m = std::max(m, e.first);
        radii[static_cast<std::size_t>(c)] = std::sqrt(m);
      }
    }
    if (trace) trace->radii.push_back(radii);
    if (rejected.empty()) break;
    for (std::int64_t cell : rejected) {
      ++rank[static_cast<std::size_t>(cell)];
      auto [it, inserted] =
          streams.try_emplace(cell, buckets, grid.cell_center(cell));
      detail::CenterStream& s = it->second;
      if (inserted) {
        // catch the cursor up past all previous rejectors
        for (std::int32_t i = 0; i < rank[static_cast<std::size_t>(cell)]; ++i) {
          s.pop();
        }
      } else {
        s.pop();
      }
      if (const detail::Cand* head = s.peek()) {
        auto c = static_cast<std::int32_t>(head->second);
        target[static_cast<std::size_t>(cell)] = c;
        apps[static_cast<std::size_t>(c)].push_back({head->first, cell});
        dirty[static_cast<std::size_t>(c)] = 1;
      } else {
        target[static_cast<std::size_t>(cell)] = kUnclaimed;
      }
    }
  }

  a.assignment.assign(target.begin(), target.end());
  for (std::int32_t v : a.assignment) {
    if (v != kUnclaimed) ++a.loads[static_cast<std::size_t>(v)];
  }
  return a;
}

Allocation allocate_center_optimal(const Grid& grid, const CenterSet& cs,
                                   double alpha, StageTrace* trace) {
  check_instance(grid, cs);
  const std::int64_t quota = quota_cells(alpha, grid);
  const std::int64_t n = cs.size();
  const std::int64_t cells = grid.cell_count();
  Allocation a = make_empty(grid, cs, alpha, quota, Algo::center_optimal);
  if (n == 0 || quota == 0) return a;

  std::vector<std::unique_ptr<detail::CellStream>> streams(
      static_cast<std::size_t>(n));
  for (std::int32_t c = 0; c < n; ++c) {
    streams[static_cast<std::size_t>(c)] =
        std::make_unique<detail::CellStream>(grid, cs.center(c));
  }
  // Cells a center has proposed to and that have not rejected it. A stream
  // yields each cell once, so removed (rejecting) cells never come back.
  std::vector<std::int64_t> engaged(static_cast<std::size_t>(n), 0);
  std::vector<double> last_d2(static_cast<std::size_t>(n), 0.0);
  std::vector<std::int32_t> held(static_cast<std::size_t>(cells), kUnclaimed);
  std::vector<double> held_d2(static_cast<std::size_t>(cells), kInf);

  struct Proposal {
    std::int64_t cell;
    std::int32_t center;
    double d2;
  };
  std::vector<Proposal> proposals;
  const std::int64_t max_stages = stage_limit(grid, cs);

  while (true) {
    if (++a.stages > max_stages) {
      throw std::logic_error("center-optimal stage limit exceeded");
    }
    proposals.clear();
    for (std::int32_t c = 0; c < n; ++c) {
      auto& s = streams[static_cast<std::size_t>(c)];
      while (s && engaged[static_cast<std::size_t>(c)] < quota) {
        const detail::Cand* cand = s->peek();
        if (!cand) {
          s.reset();
          break;
        }
        proposals.push_back({cand->second, c, cand->first});
        last_d2[static_cast<std::size_t>(c)] = cand->first;
        ++engaged[static_cast<std::size_t>(c)];
        s->pop();
      }
    }
    if (trace) {
      std::vector<double> row(static_cast<std::size_t>(n), kInf);
      for (std::int32_t c = 0; c < n; ++c) {
        if (engaged[static_cast<std::size_t>(c)] == quota) {
          row[static_cast<std::size_t>(c)] =
              std::sqrt(last_d2[static_cast<std::size_t>(c)]);
        }
      }
      trace->radii.push_back(std::move(row));
    }
    if (proposals.empty()) break;

    std::sort(proposals.begin(), proposals.end(),
              [](const Proposal& a_, const Proposal& b_) {
                if (a_.cell != b_.cell) return a_.cell < b_.cell;
                return a_.center < b_.center;
              });
    std::int64_t rejections = 0;
    for (std::size_t i = 0; i < proposals.size();) {
      const std::int64_t cell = proposals[i].cell;
      std::size_t j = i;
      // best offer among the incoming group and the currently held center
      std::int32_t best = held[static_cast<std::size_t>(cell)];
      double best_d2 = held_d2[static_cast<std::size_t>(cell)];
      for (; j < proposals.size() && proposals[j].cell == cell; ++j) {
        const Proposal& p = proposals[j];
        if (best == kUnclaimed || p.d2 < best_d2 ||
            (p.d2 == best_d2 && p.center < best)) {
          best = p.center;
          best_d2 = p.d2;
        }
      }
      if (held[static_cast<std::size_t>(cell)] != kUnclaimed &&
          held[static_cast<std::size_t>(cell)] != best) {
        --engaged[static_cast<std::size_t>(held[static_cast<std::size_t>(cell)])];
        ++rejections;
      }
      for (std::size_t k = i; k < j; ++k) {
        if (proposals[k].center != best) {
          --engaged[static_cast<std::size_t>(proposals[k].center)];
          ++rejections;
        }
      }
      held[static_cast<std::size_t>(cell)] = best;
      held_d2[static_cast<std::size_t>(cell)] = best_d2;
      i = j;
    }
    if (rejections == 0) break;
  }

  a.assignment.assign(held.begin(), held.end());
  for (std::int32_t v : a.assignment) {
    if (v != kUnclaimed) ++a.loads[static_cast<std::size_t>(v)];
  }
  return a;
}

Allocation allocate(const Grid& grid, const CenterSet& cs, double alpha,
                    Algo algo) {
  switch (algo) {
    case Algo::greedy:
      return allocate_greedy(grid, cs, alpha);
    case Algo::site_optimal:
      return allocate_site_optimal(grid, cs, alpha);
    case Algo::center_optimal:
      return allocate_center_optimal(grid, cs, alpha);
  }
  throw InvalidInputError("unknown algorithm");
}

const char* algo_name(Algo algo) {
  switch (algo) {
    case Algo::greedy:
      return "greedy";
    case Algo::site_optimal:
      return "site";
    case Algo::center_optimal:
      return "center";
  }
  return "?";
}

Algo algo_from_name(const std::string& name) {
  if (name == "greedy") return Algo::greedy;
  if (name == "site") return Algo::site_optimal;
  if (name == "center") return Algo::center_optimal;
  throw InvalidInputError("unknown algorithm \"" + name +
                          "\" (expected site|center|greedy)");
}

}  // namespace stalloc
