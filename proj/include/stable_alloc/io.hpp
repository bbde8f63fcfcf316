#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stable_alloc/analysis.hpp"
#include "stable_alloc/allocator.hpp"
#include "stable_alloc/verifier.hpp"

namespace stalloc {

struct SourceSpec {
  enum class Kind { poisson, lattice, file };
  Kind kind = Kind::poisson;
  double lambda = 1.0;   // poisson
  double spacing = 1.0;  // lattice
  double jitter = 0.0;   // lattice
  std::string path;      // file
};

struct RenderSpec {
  enum class Style { flat, annuli };
  double pixels_per_unit = 8.0;
  std::uint64_t palette_seed = 0;
  Style style = Style::annuli;
  double annulus_width = 0.25;
  std::array<std::uint8_t, 3> unclaimed_color{0, 0, 0};
  int marker_px = 2;
};

/// One experiment: region + grid + source + appetite + algorithm + seed.
/// JSON round-trips exactly; infinite alpha serializes as "inf".
struct ExperimentConfig {
  RegionKind region_kind = RegionKind::torus;
  std::vector<double> sides{1.0, 1.0};
  std::vector<int> resolution{64, 64};
  SourceSpec source;
  double alpha = 1.0;
  Algo algo = Algo::greedy;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::optional<RenderSpec> render;

  Region region() const { return Region(region_kind, sides); }
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// Allocation persistence: a CSV with header "cell_index,center_index" (-1
// for unclaimed) plus a JSON sidecar carrying region/grid/alpha/algo/seed
// and the centers CSV name.
void save_allocation(const Allocation& alloc, std::uint64_t seed,
                     const std::filesystem::path& dir);
Allocation load_allocation(const std::filesystem::path& dir);
std::uint64_t load_allocation_seed(const std::filesystem::path& dir);

std::string stability_report_json(const Allocation& alloc,
                                  const std::vector<UnstablePair>& pairs,
                                  const ValidationReport& validation,
                                  std::size_t max_listed = 32);

std::string stats_json(const Allocation& alloc, bool stable,
                       std::int64_t unstable_pairs, bool valid);

// Binary PPM (P6) rendering of a 2-d allocation. Each pixel takes its cell's
// territory color: one flat color per territory, or two alternating colors
// by annulus index floor(dist / annulus_width). Centers are overdrawn as
// square markers. Bit-deterministic in (allocation, spec).
std::vector<std::uint8_t> render_ppm(const Allocation& alloc,
                                     const RenderSpec& spec);

struct RunResult {
  std::filesystem::path out_dir;
  bool stable = false;
  bool valid = false;
  std::int64_t unstable_pairs = 0;
  PhaseStats phase{};
};

// Generate/load centers, build the grid, allocate, verify, and write
// centers.csv, allocation.csv, allocation.json, stats.json and render.ppm
// (when a render spec is present) under cfg.out_dir.
RunResult run(const ExperimentConfig& cfg);

struct SweepConfig {
  RegionKind region_kind = RegionKind::torus;
  std::vector<std::vector<double>> sides_list;
  int res_per_unit = 8;         // used when resolution is empty
  std::vector<int> resolution;  // fixed resolution override
  SourceSpec source;
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds;
  Algo algo = Algo::greedy;
  double tail_exponent = 1.0;
  int threads = 0;  // 0 = hardware, capped by STABLE_ALLOC_THREADS
};

struct SweepRow {
  bool summary = false;
  std::vector<double> sides;
  std::vector<int> resolution;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // nonempty for failed runs
  // per-run values (means over seeds in summary rows)
  double lambda_hat = 0.0;
  std::int64_t n_centers = 0;
  double unclaimed_fraction = 0.0;
  double mean_residual = 0.0;
  double mean_x = 0.0;
  double mean_xp = 0.0;
  double max_x = 0.0;
  double desire_volume_mid = 0.0;
  std::int64_t covet_count_mid = 0;
  bool stable = false;
  // summary-only standard errors
  double se_unclaimed = 0.0;
  double se_residual = 0.0;
  double se_mean_x = 0.0;
  double se_mean_xp = 0.0;
  int seeds_ok = 0;
};

// Runs the (sides x alpha x seed) grid, concurrently where allowed, and
// returns one row per run plus a summary row per (sides, alpha) point,
// ordered by (sides, alpha, seed) regardless of completion order. Failed
// runs carry their error and do not abort the sweep.
std::vector<SweepRow> sweep(const SweepConfig& cfg);

void write_sweep_csv(const std::vector<SweepRow>& rows, double tail_exponent,
                     const std::filesystem::path& path);

}  // namespace stalloc
