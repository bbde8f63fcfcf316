#include "stable_alloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stable_alloc/errors.hpp"

namespace stalloc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PhaseStats phase_stats(const Allocation& a) {
  PhaseStats s{};
  const std::int64_t n = a.centers.size();
  s.lambda_hat = a.centers.lambda_hat();
  s.alpha = a.alpha;
  s.unclaimed_fraction = static_cast<double>(a.unclaimed_count()) /
                         static_cast<double>(a.cell_count());
  if (n > 0) {
    double total = 0.0;
    for (std::int64_t l : a.loads) {
      total += static_cast<double>(a.quota - l) * a.grid.cell_mass();
    }
    s.mean_residual_appetite = total / static_cast<double>(n);
  }
  s.quota_quantization_error = quota_quantization_error(a.alpha, a.grid);
  double crit = s.lambda_hat * a.alpha;  // 0 * inf handled below
  if (n == 0) {
    s.phase = Phase::subcritical;
  } else if (std::isinf(a.alpha)) {
    s.phase = Phase::supercritical;
  } else if (crit < 1.0) {
    s.phase = Phase::subcritical;
  } else if (crit > 1.0) {
    s.phase = Phase::supercritical;
  } else {
    s.phase = Phase::critical;
  }
  return s;
}

double phase_identity_gap(const PhaseStats& s) {
  if (std::isinf(s.alpha) || !s.mean_residual_appetite) return kInf;
  double lhs = s.lambda_hat * *s.mean_residual_appetite - s.unclaimed_fraction;
  return std::fabs(lhs - (s.lambda_hat * s.alpha - 1.0));
}

std::vector<double> distance_samples(const Allocation& a) {
  std::vector<double> out(static_cast<std::size_t>(a.cell_count()));
  for (std::int64_t x = 0; x < a.cell_count(); ++x) {
    double d2 = a.assigned_dist2(x);
    out[static_cast<std::size_t>(x)] = d2 == kInf ? kInf : std::sqrt(d2);
  }
  return out;
}

std::optional<double> mean_distance_power(const Allocation& a, double p) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::int64_t x = 0; x < a.cell_count(); ++x) {
    double d2 = a.assigned_dist2(x);
    if (d2 == kInf) continue;
    sum += std::pow(std::sqrt(d2), p);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

TrendReport tail_trend(const std::vector<TailWindow>& windows, double exponent,
                       double stabilize_threshold) {
  if (windows.size() < 3) {
    throw InvalidInputError("tail_trend needs at least 3 window sizes");
  }
  TrendReport r{};
  r.exponent = exponent;
  r.threshold = stabilize_threshold;
  double prev_window = -kInf;
  for (const TailWindow& w : windows) {
    if (!(w.window > prev_window)) {
      throw InvalidInputError("window sizes must be strictly increasing");
    }
    prev_window = w.window;
    if (w.per_seed_distances.size() < 5) {
      throw InvalidInputError("tail_trend needs at least 5 seeds per window");
    }
    std::vector<double> means;
    for (const auto& samples : w.per_seed_distances) {
      double sum = 0.0;
      std::int64_t count = 0;
      for (double x : samples) {
        if (std::isinf(x)) continue;  // claimed cells only
        sum += std::pow(x, exponent);
        ++count;
      }
      if (count == 0) {
        throw InvalidInputError("a seed has no claimed cells");
      }
      means.push_back(sum / static_cast<double>(count));
    }
    double m = std::accumulate(means.begin(), means.end(), 0.0) /
               static_cast<double>(means.size());
    double var = 0.0;
    for (double v : means) var += (v - m) * (v - m);
    var /= static_cast<double>(means.size() - 1);
    r.rows.push_back({w.window, static_cast<int>(means.size()), m,
                      std::sqrt(var / static_cast<double>(means.size()))});
  }
  r.increasing = true;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    if (!(r.rows[i].mean > r.rows[i - 1].mean)) r.increasing = false;
  }
  const auto& last = r.rows[r.rows.size() - 1];
  const auto& prev = r.rows[r.rows.size() - 2];
  r.last_rel_change = std::fabs(last.mean - prev.mean) / std::fabs(prev.mean);
  r.stabilized = r.last_rel_change < stabilize_threshold;
  return r;
}

namespace {

struct UnionFind {
  std::vector<std::int64_t> parent;
  explicit UnionFind(std::int64_t n)
      : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), std::int64_t{0});
  }
  std::int64_t find(std::int64_t v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  void unite(std::int64_t a, std::int64_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

TerritoryReport territory_geometry(const Allocation& a) {
  Point probe;
  probe.dim = a.grid.dim();
  double min_side = kInf;
  for (int i = 0; i < a.grid.dim(); ++i) {
    probe[i] = 0.5 * a.grid.region().side(i);
    min_side = std::min(min_side, a.grid.region().side(i));
  }
  return territory_geometry(a, probe, 0.25 * min_side);
}

TerritoryReport territory_geometry(const Allocation& a, const Point& probe,
                                   double probe_radius,
                                   bool diagonal_adjacency) {
  const std::int64_t n = a.centers.size();
  const std::int64_t cells = a.cell_count();
  const Region& region = a.grid.region();
  const bool wrap = region.kind() == RegionKind::torus;
  const int dim = a.grid.dim();

  // Forward neighbor offsets: +1 on one axis (faces), or all offsets in
  // {-1,0,1}^d that are lexicographically positive when diagonals are on.
  std::vector<std::array<std::int64_t, kMaxDim>> offsets;
  if (!diagonal_adjacency) {
    for (int axis = 0; axis < dim; ++axis) {
      std::array<std::int64_t, kMaxDim> o{};
      o[static_cast<std::size_t>(axis)] = 1;
      offsets.push_back(o);
    }
  } else {
    std::array<std::int64_t, kMaxDim> o{};
    for (int i = 0; i < dim; ++i) o[static_cast<std::size_t>(i)] = -1;
    while (true) {
      bool positive = false;
      for (int i = 0; i < dim; ++i) {
        if (o[static_cast<std::size_t>(i)] != 0) {
          positive = o[static_cast<std::size_t>(i)] > 0;
          break;
        }
      }
      if (positive) offsets.push_back(o);
      int i = dim - 1;
      for (; i >= 0; --i) {
        if (++o[static_cast<std::size_t>(i)] <= 1) break;
        o[static_cast<std::size_t>(i)] = -1;
      }
      if (i < 0) break;
    }
  }

  UnionFind uf(cells);
  std::int64_t k[kMaxDim];
  std::int64_t nb[kMaxDim];
  for (std::int64_t x = 0; x < cells; ++x) {
    const std::int32_t c = a.assignment[static_cast<std::size_t>(x)];
    if (c == kUnclaimed) continue;
    a.grid.unravel(x, k);
    for (const auto& o : offsets) {
      bool valid = true;
      for (int axis = 0; axis < dim; ++axis) {
        const std::int64_t m = a.grid.res(axis);
        std::int64_t v = k[axis] + o[static_cast<std::size_t>(axis)];
        if (v < 0 || v >= m) {
          if (!wrap || m < 2) {
            valid = false;
            break;
          }
          v = v < 0 ? v + m : v - m;
        }
        nb[axis] = v;
      }
      if (!valid) continue;
      std::int64_t y = a.grid.ravel(nb);
      if (y != x && a.assignment[static_cast<std::size_t>(y)] == c) {
        uf.unite(x, y);
      }
    }
  }

  TerritoryReport report;
  report.probe = probe;
  report.probe_radius = probe_radius;
  report.per_center.resize(static_cast<std::size_t>(n));
  for (std::int32_t c = 0; c < n; ++c) {
    report.per_center[static_cast<std::size_t>(c)] =
        TerritoryGeometry{c, a.loads[static_cast<std::size_t>(c)], 0.0, 0};
  }

  std::vector<std::uint8_t> root_seen(static_cast<std::size_t>(cells), 0);
  std::vector<std::uint8_t> probe_hit(static_cast<std::size_t>(n), 0);
  const double probe_r2 = probe_radius * probe_radius;
  for (std::int64_t x = 0; x < cells; ++x) {
    const std::int32_t c = a.assignment[static_cast<std::size_t>(x)];
    if (c == kUnclaimed) continue;
    auto& geo = report.per_center[static_cast<std::size_t>(c)];
    const Point p = a.grid.cell_center(x);
    geo.radius = std::max(geo.radius,
                          std::sqrt(region.dist2(p, a.centers.center(c))));
    std::int64_t root = uf.find(x);
    if (!root_seen[static_cast<std::size_t>(root)]) {
      root_seen[static_cast<std::size_t>(root)] = 1;
      ++geo.components;
    }
    if (region.dist2(p, probe) < probe_r2) {
      probe_hit[static_cast<std::size_t>(c)] = 1;
    }
  }
  report.probe_ball_territories = 0;
  for (std::int32_t c = 0; c < n; ++c) {
    report.probe_ball_territories += probe_hit[static_cast<std::size_t>(c)];
  }
  return report;
}

std::vector<std::vector<double>> territory_distances(const Allocation& a) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(a.centers.size()));
  for (std::int64_t x = 0; x < a.cell_count(); ++x) {
    std::int32_t c = a.assignment[static_cast<std::size_t>(x)];
    if (c == kUnclaimed) continue;
    out[static_cast<std::size_t>(c)].push_back(std::sqrt(a.assigned_dist2(x)));
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

DemandReport demand_diagnostics(const Allocation& a, const Point& probe) {
  const std::int64_t n = a.centers.size();
  if (n == 0) throw InvalidInputError("demand diagnostics need >= 1 center");
  const Region& region = a.grid.region();

  DemandReport r{};
  double best = kInf;
  for (std::int32_t c = 0; c < n; ++c) {
    double d2 = region.dist2(probe, a.centers.center(c));
    if (d2 < best) {
      best = d2;
      r.center = c;
    }
  }
  r.cell = a.grid.locate(probe);

  const Point target = a.centers.center(r.center);
  double desire_mass = 0.0;
  for (std::int64_t x = 0; x < a.cell_count(); ++x) {
    if (a.assignment[static_cast<std::size_t>(x)] == r.center) continue;
    double d2 = region.dist2(a.grid.cell_center(x), target);
    if (d2 < a.assigned_dist2(x)) desire_mass += a.grid.cell_mass();
  }
  r.desire_volume = desire_mass;

  std::vector<double> max_held(static_cast<std::size_t>(n), -kInf);
  for (std::int64_t x = 0; x < a.cell_count(); ++x) {
    std::int32_t c = a.assignment[static_cast<std::size_t>(x)];
    if (c == kUnclaimed) continue;
    max_held[static_cast<std::size_t>(c)] =
        std::max(max_held[static_cast<std::size_t>(c)],
                 region.dist2(a.grid.cell_center(x), a.centers.center(c)));
  }
  const Point cell_pos = a.grid.cell_center(r.cell);
  r.covet_count = 0;
  for (std::int32_t c = 0; c < n; ++c) {
    bool unsated = a.loads[static_cast<std::size_t>(c)] < a.quota;
    bool farther = region.dist2(cell_pos, a.centers.center(c)) <
                   max_held[static_cast<std::size_t>(c)];
    if (unsated || farther) ++r.covet_count;
  }
  return r;
}

}  // namespace stalloc
