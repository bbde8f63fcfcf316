#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stable_alloc/allocator.hpp"

namespace stalloc {

enum class Phase { subcritical, critical, supercritical };

struct PhaseStats {
  double lambda_hat;
  double alpha;
  double unclaimed_fraction;  // unclaimed mass / total mass
  // (quota - load) * cell_mass averaged over centers; unavailable when there
  // are no centers.
  std::optional<double> mean_residual_appetite;
  Phase phase;
  double quota_quantization_error;
};

PhaseStats phase_stats(const Allocation& alloc);

// | lambda_hat * mean_residual - unclaimed_fraction - (lambda_hat * alpha - 1) |
// This vanishes up to the quota quantization error. +inf for infinite alpha
// or an empty center set, where the identity does not apply.
double phase_identity_gap(const PhaseStats& s);

// Distance from each cell to its assigned center, +inf for unclaimed cells.
std::vector<double> distance_samples(const Allocation& alloc);

// Mean of X^p over claimed cells; empty when nothing is claimed.
std::optional<double> mean_distance_power(const Allocation& alloc, double p);

struct TailWindow {
  double window;  // linear window size L
  std::vector<std::vector<double>> per_seed_distances;  // raw samples per seed
};

struct TrendRow {
  double window;
  int seeds;
  double mean;  // mean over seeds of the per-seed mean of X^p (claimed only)
  double sem;   // standard error over seeds
};

struct TrendReport {
  std::vector<TrendRow> rows;
  double exponent;
  bool increasing;       // window means strictly increasing
  bool stabilized;       // relative change between the last two windows below
  double last_rel_change;
  double threshold;
};

// Requires >= 3 strictly increasing window sizes and >= 5 seeds each.
TrendReport tail_trend(const std::vector<TailWindow>& windows, double exponent,
                       double stabilize_threshold = 0.10);

struct TerritoryGeometry {
  std::int32_t center;
  std::int64_t load;
  double radius;            // max distance to a held cell, 0 when empty
  std::int64_t components;  // face-adjacency flood-fill components
};

struct TerritoryReport {
  std::vector<TerritoryGeometry> per_center;
  // Number of distinct territories whose cells intersect the probe ball.
  std::int64_t probe_ball_territories;
  Point probe;
  double probe_radius;
};

// Probe defaults to the region midpoint with radius = min side / 4.
// Components use face adjacency; diagonal adjacency is available but off by
// default.
TerritoryReport territory_geometry(const Allocation& alloc);
TerritoryReport territory_geometry(const Allocation& alloc, const Point& probe,
                                   double probe_radius,
                                   bool diagonal_adjacency = false);

// Sorted held distances per center (ascending); the within-r load of center
// c at radius r is the count of entries < r.
std::vector<std::vector<double>> territory_distances(const Allocation& alloc);

struct DemandReport {
  std::int32_t center;    // center nearest the probe point
  double desire_volume;   // mass of cells strictly preferring that center
  std::int64_t cell;      // cell containing the probe point
  std::int64_t covet_count;  // centers coveting that cell
};

DemandReport demand_diagnostics(const Allocation& alloc, const Point& probe);

}  // namespace stalloc
