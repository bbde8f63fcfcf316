#include "stable_alloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stable_alloc/errors.hpp"

namespace stalloc::oracle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TinyInstance::TinyInstance(int cells, int centers, std::vector<double> d,
                           std::vector<int> q)
    : n_cells(cells), n_centers(centers), distances(std::move(d)),
      quotas(std::move(q)) {
  if (n_cells < 1 || n_cells > kMaxCells || n_centers < 1 ||
      n_centers > kMaxCenters) {
    throw InvalidInputError("tiny instance size limits exceeded");
  }
  if (distances.size() != static_cast<std::size_t>(n_cells * n_centers)) {
    throw InvalidInputError("distance matrix shape mismatch");
  }
  for (double v : distances) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInputError("distances must be finite and >= 0");
    }
  }
  if (quotas.size() != static_cast<std::size_t>(n_centers)) {
    throw InvalidInputError("quota vector shape mismatch");
  }
  for (int v : quotas) {
    if (v < 0) throw InvalidInputError("quotas must be >= 0");
  }
}

TinyInstance::TinyInstance(int cells, int centers, std::vector<double> d,
                           int uniform_quota)
    : TinyInstance(cells, centers, std::move(d),
                   std::vector<int>(static_cast<std::size_t>(centers),
                                    uniform_quota)) {}

bool tie_free(const TinyInstance& inst) {
  std::vector<double> all = inst.distances;
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

TinyAssignment oracle_deferred_acceptance(const TinyInstance& inst,
                                          Proposer proposer) {
  const int nx = inst.n_cells;
  const int nc = inst.n_centers;

  if (proposer == Proposer::sites) {
    // Cell preference lists: centers by (distance, center index).
    std::vector<std::vector<int>> prefs(static_cast<std::size_t>(nx));
    for (int x = 0; x < nx; ++x) {
      auto& ps = prefs[static_cast<std::size_t>(x)];
      ps.resize(static_cast<std::size_t>(nc));
      std::iota(ps.begin(), ps.end(), 0);
      std::sort(ps.begin(), ps.end(), [&](int a, int b) {
        if (inst.dist(x, a) != inst.dist(x, b))
          return inst.dist(x, a) < inst.dist(x, b);
        return a < b;
      });
    }
    std::vector<int> cursor(static_cast<std::size_t>(nx), 0);
    TinyAssignment held(static_cast<std::size_t>(nx), -1);
    std::vector<std::vector<int>> holds(static_cast<std::size_t>(nc));
    bool progress = true;
    while (progress) {
      progress = false;
      for (int x = 0; x < nx; ++x) {
        if (held[static_cast<std::size_t>(x)] != -1) continue;
        auto& cur = cursor[static_cast<std::size_t>(x)];
        if (cur >= nc) continue;
        int c = prefs[static_cast<std::size_t>(x)][static_cast<std::size_t>(cur)];
        ++cur;
        progress = true;
        if (inst.quotas[static_cast<std::size_t>(c)] == 0) continue;
        auto& hs = holds[static_cast<std::size_t>(c)];
        hs.push_back(x);
        held[static_cast<std::size_t>(x)] = c;
        if (static_cast<int>(hs.size()) >
            inst.quotas[static_cast<std::size_t>(c)]) {
          // reject the worst by (distance, cell index)
          auto worst = std::max_element(hs.begin(), hs.end(), [&](int a, int b) {
            if (inst.dist(a, c) != inst.dist(b, c))
              return inst.dist(a, c) < inst.dist(b, c);
            return a < b;
          });
          held[static_cast<std::size_t>(*worst)] = -1;
          hs.erase(worst);
        }
      }
    }
    return held;
  }

  // Centers propose down their (distance, cell index) lists while unsated.
  std::vector<std::vector<int>> prefs(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    auto& ps = prefs[static_cast<std::size_t>(c)];
    ps.resize(static_cast<std::size_t>(nx));
    std::iota(ps.begin(), ps.end(), 0);
    std::sort(ps.begin(), ps.end(), [&](int a, int b) {
      if (inst.dist(a, c) != inst.dist(b, c))
        return inst.dist(a, c) < inst.dist(b, c);
      return a < b;
    });
  }
  std::vector<int> cursor(static_cast<std::size_t>(nc), 0);
  std::vector<int> load(static_cast<std::size_t>(nc), 0);
  TinyAssignment held(static_cast<std::size_t>(nx), -1);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int c = 0; c < nc; ++c) {
      while (load[static_cast<std::size_t>(c)] <
                 inst.quotas[static_cast<std::size_t>(c)] &&
             cursor[static_cast<std::size_t>(c)] < nx) {
        int x = prefs[static_cast<std::size_t>(c)]
                     [static_cast<std::size_t>(cursor[static_cast<std::size_t>(c)])];
        ++cursor[static_cast<std::size_t>(c)];
        progress = true;
        int cur = held[static_cast<std::size_t>(x)];
        bool accept;
        if (cur == -1) {
          accept = true;
        } else if (inst.dist(x, c) != inst.dist(x, cur)) {
          accept = inst.dist(x, c) < inst.dist(x, cur);
        } else {
          accept = c < cur;
        }
        if (accept) {
          if (cur != -1) --load[static_cast<std::size_t>(cur)];
          held[static_cast<std::size_t>(x)] = c;
          ++load[static_cast<std::size_t>(c)];
        }
      }
    }
  }
  return held;
}

namespace {

struct Search {
  const TinyInstance& inst;
  TinyAssignment assign;
  std::vector<int> load;
  std::vector<double> max_held;  // farthest held distance per center, -inf if none
  std::vector<TinyAssignment> out;

  explicit Search(const TinyInstance& i)
      : inst(i),
        assign(static_cast<std::size_t>(i.n_cells), -1),
        load(static_cast<std::size_t>(i.n_centers), 0),
        max_held(static_cast<std::size_t>(i.n_centers), -kInf) {}

  // A pair (y, c) is already hopeless when y desires c and c is certain to
  // covet y because it holds a strictly farther cell (held sets only grow).
  bool certain_instability(int x) const {
    int cx = assign[static_cast<std::size_t>(x)];
    double dcur = cx == -1 ? kInf : inst.dist(x, cx);
    for (int c = 0; c < inst.n_centers; ++c) {
      if (c == cx) continue;
      double d = inst.dist(x, c);
      if (d < dcur && max_held[static_cast<std::size_t>(c)] > d) return true;
    }
    if (cx != -1) {
      // Earlier cells that desire cx and are strictly closer than x.
      for (int y = 0; y < x; ++y) {
        if (assign[static_cast<std::size_t>(y)] == cx) continue;
        double dy = inst.dist(y, cx);
        int cy = assign[static_cast<std::size_t>(y)];
        double dycur = cy == -1 ? kInf : inst.dist(y, cy);
        if (dy < dycur && dy < inst.dist(x, cx)) return true;
      }
    }
    return false;
  }

  bool leaf_stable() const {
    for (int c = 0; c < inst.n_centers; ++c) {
      if (load[static_cast<std::size_t>(c)] >=
          inst.quotas[static_cast<std::size_t>(c)])
        continue;
      // unsated: covets every cell, so any desiring cell blocks
      for (int x = 0; x < inst.n_cells; ++x) {
        int cx = assign[static_cast<std::size_t>(x)];
        if (cx == c) continue;
        double dcur = cx == -1 ? kInf : inst.dist(x, cx);
        if (inst.dist(x, c) < dcur) return false;
      }
    }
    return true;
  }

  void dfs(int x) {
    if (x == inst.n_cells) {
      if (leaf_stable()) out.push_back(assign);
      return;
    }
    for (int choice = -1; choice < inst.n_centers; ++choice) {
      if (choice >= 0 &&
          load[static_cast<std::size_t>(choice)] >=
              inst.quotas[static_cast<std::size_t>(choice)])
        continue;
      assign[static_cast<std::size_t>(x)] = choice;
      double saved = 0.0;
      if (choice >= 0) {
        ++load[static_cast<std::size_t>(choice)];
        saved = max_held[static_cast<std::size_t>(choice)];
        max_held[static_cast<std::size_t>(choice)] =
            std::max(saved, inst.dist(x, choice));
      }
      if (!certain_instability(x)) dfs(x + 1);
      if (choice >= 0) {
        --load[static_cast<std::size_t>(choice)];
        max_held[static_cast<std::size_t>(choice)] = saved;
      }
      assign[static_cast<std::size_t>(x)] = -1;
    }
  }
};

}  // namespace

std::vector<TinyAssignment> oracle_enumerate(const TinyInstance& inst) {
  Search s(inst);
  s.dfs(0);
  return s.out;
}

}  // namespace stalloc::oracle
