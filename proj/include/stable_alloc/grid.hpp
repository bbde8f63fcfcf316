#pragma once

#include <cstdint>
#include <vector>

#include "stable_alloc/geometry.hpp"

namespace stalloc {

/// Discretization of Lebesgue measure on a region into equal-mass cells.
/// Cell k (multi-index) has its center at ((k_i + 0.5) * L_i / m_i). Flat
/// indices are row-major over the multi-index with the last axis fastest:
/// index = (k_0 * m_1 + k_1) * m_2 + k_2 in 3D.
class Grid {
 public:
  Grid(Region region, std::vector<int> resolution);

  const Region& region() const { return region_; }
  int dim() const { return region_.dim(); }
  int res(int axis) const { return res_[static_cast<std::size_t>(axis)]; }
  std::vector<int> resolution() const;
  std::int64_t cell_count() const { return cell_count_; }
  double cell_mass() const { return cell_mass_; }
  double cell_size(int axis) const {
    return region_.side(axis) / static_cast<double>(res(axis));
  }

  Point cell_center(std::int64_t index) const;
  // Cell containing a point (coordinates clamped into range at the boundary).
  std::int64_t locate(const Point& p) const;

  void unravel(std::int64_t index, std::int64_t k[kMaxDim]) const;
  std::int64_t ravel(const std::int64_t k[kMaxDim]) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Region region_;
  std::array<int, kMaxDim> res_{1, 1, 1};
  std::int64_t cell_count_;
  double cell_mass_;
};

// Number of whole cells a center may hold: round(appetite / cell_mass).
// An infinite appetite maps to the total cell count (the Voronoi limit).
std::int64_t quota_cells(double appetite, const Grid& grid);

// |quota * cell_mass - appetite|, at most cell_mass / 2; 0 for infinite.
double quota_quantization_error(double appetite, const Grid& grid);

}  // namespace stalloc
