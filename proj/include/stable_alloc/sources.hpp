#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "stable_alloc/geometry.hpp"

namespace stalloc {

/// An ordered set of pairwise-distinct centers inside a region. The index of
/// a center in the list is its label everywhere else in the library.
class CenterSet {
 public:
  CenterSet(Region region, std::vector<Point> centers);

  const Region& region() const { return region_; }
  std::int64_t size() const { return static_cast<std::int64_t>(centers_.size()); }
  const Point& center(std::int64_t i) const {
    return centers_[static_cast<std::size_t>(i)];
  }
  const std::vector<Point>& points() const { return centers_; }

  // Empirical intensity n / Vol(region).
  double lambda_hat() const;

  friend bool operator==(const CenterSet&, const CenterSet&) = default;

 private:
  Region region_;
  std::vector<Point> centers_;
};

// Draw N ~ Poisson(intensity * volume), then N independent uniform points.
// Deterministic in (intensity, region, seed); exact duplicate points are
// redrawn.
CenterSet sample_poisson(double intensity, const Region& region,
                         std::uint64_t seed);

// One center per lattice cell at the cell corner plus an independent uniform
// offset in [-jitter, jitter]^d (wrapped into the region). jitter = 0 gives
// the exact lattice and consumes no randomness. Every side length must be an
// integer multiple of spacing.
CenterSet sample_lattice(const Region& region, double spacing, double jitter,
                         std::uint64_t seed);

// CSV persistence: header "x0,...,x{d-1}", one center per row, shortest
// round-trip-exact decimal formatting. load(save(cs)) == cs bit-exactly.
CenterSet load_centers(const std::filesystem::path& path, const Region& region);
void save_centers(const CenterSet& cs, const std::filesystem::path& path);

}  // namespace stalloc
