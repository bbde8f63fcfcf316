#include "stable_alloc/grid.hpp"

#include <cmath>
#include <limits>

#include "stable_alloc/errors.hpp"

namespace stalloc {

Grid::Grid(Region region, std::vector<int> resolution)
    : region_(std::move(region)) {
  if (static_cast<int>(resolution.size()) != region_.dim()) {
    throw InvalidInputError("grid resolution rank must match region dimension");
  }
  cell_count_ = 1;
  for (int i = 0; i < region_.dim(); ++i) {
    int m = resolution[static_cast<std::size_t>(i)];
    if (m < 1) throw InvalidInputError("grid resolution must be >= 1 per axis");
    res_[static_cast<std::size_t>(i)] = m;
    if (cell_count_ > std::numeric_limits<std::int64_t>::max() / m) {
      throw InvalidInputError("grid cell count overflows");
    }
    cell_count_ *= m;
  }
  cell_mass_ = region_.volume() / static_cast<double>(cell_count_);
}

std::vector<int> Grid::resolution() const {
  return std::vector<int>(res_.begin(), res_.begin() + dim());
}

void Grid::unravel(std::int64_t index, std::int64_t k[kMaxDim]) const {
  for (int i = dim() - 1; i >= 0; --i) {
    k[i] = index % res(i);
    index /= res(i);
  }
}

std::int64_t Grid::ravel(const std::int64_t k[kMaxDim]) const {
  std::int64_t idx = 0;
  for (int i = 0; i < dim(); ++i) idx = idx * res(i) + k[i];
  return idx;
}

Point Grid::cell_center(std::int64_t index) const {
  std::int64_t k[kMaxDim];
  unravel(index, k);
  Point p;
  p.dim = dim();
  for (int i = 0; i < dim(); ++i) {
    p[i] = (static_cast<double>(k[i]) + 0.5) * cell_size(i);
  }
  return p;
}

std::int64_t Grid::locate(const Point& p) const {
  if (p.dim != dim()) throw InvalidInputError("point/grid dimension mismatch");
  std::int64_t k[kMaxDim];
  for (int i = 0; i < dim(); ++i) {
    auto c = static_cast<std::int64_t>(std::floor(p[i] / cell_size(i)));
    if (c < 0) c = 0;
    if (c >= res(i)) c = res(i) - 1;
    k[i] = c;
  }
  return ravel(k);
}

std::int64_t quota_cells(double appetite, const Grid& grid) {
  if (std::isnan(appetite) || appetite < 0.0) {
    throw InvalidInputError("appetite must be >= 0 (or infinite)");
  }
  if (std::isinf(appetite)) return grid.cell_count();
  double q = appetite / grid.cell_mass();
  if (q > 4.0e18) {
    throw InvalidInputError("appetite too large for this grid; use infinity");
  }
  return std::llround(q);
}

double quota_quantization_error(double appetite, const Grid& grid) {
  if (std::isinf(appetite)) return 0.0;
  std::int64_t q = quota_cells(appetite, grid);
  return std::fabs(static_cast<double>(q) * grid.cell_mass() - appetite);
}

}  // namespace stalloc
