#include "stable_alloc/geometry.hpp"

#include <cmath>
#include <string>

#include "stable_alloc/errors.hpp"

namespace stalloc {

Point::Point(std::initializer_list<double> coords) {
  if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim)) {
    throw InvalidInputError("point dimension must be in [1, " +
                            std::to_string(kMaxDim) + "]");
  }
  dim = static_cast<int>(coords.size());
  int i = 0;
  for (double c : coords) x[static_cast<std::size_t>(i++)] = c;
}

Region::Region(RegionKind kind, std::vector<double> sides) : kind_(kind) {
  if (sides.empty() || sides.size() > static_cast<std::size_t>(kMaxDim)) {
    throw InvalidInputError("region dimension must be in [1, " +
                            std::to_string(kMaxDim) + "]");
  }
  dim_ = static_cast<int>(sides.size());
  for (int i = 0; i < dim_; ++i) {
    double L = sides[static_cast<std::size_t>(i)];
    if (!(L > 0.0) || !std::isfinite(L)) {
      throw InvalidInputError("region side lengths must be positive finite");
    }
    sides_[static_cast<std::size_t>(i)] = L;
  }
}

std::vector<double> Region::sides() const {
  return std::vector<double>(sides_.begin(), sides_.begin() + dim_);
}

double Region::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim_; ++i) v *= side(i);
  return v;
}

double Region::diameter() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += side(i) * side(i);
  double d = std::sqrt(s);
  return kind_ == RegionKind::torus ? 0.5 * d : d;
}

bool Region::contains(const Point& p) const {
  if (p.dim != dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    double c = p[i];
    if (!std::isfinite(c) || c < 0.0) return false;
    if (kind_ == RegionKind::torus ? c >= side(i) : c > side(i)) return false;
  }
  return true;
}

Point Region::wrap(Point p) const {
  if (p.dim != dim_) throw InvalidInputError("point/region dimension mismatch");
  if (kind_ == RegionKind::box) return p;
  for (int i = 0; i < dim_; ++i) {
    double L = side(i);
    double c = std::fmod(p[i], L);
    if (c < 0.0) c += L;
    if (c >= L) c = 0.0;  // fmod rounding can land exactly on L
    p[i] = c;
  }
  return p;
}

double Region::dist2(const Point& p, const Point& q) const {
  if (p.dim != dim_ || q.dim != dim_) {
    throw InvalidInputError("point/region dimension mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double d = std::fabs(p[i] - q[i]);
    if (kind_ == RegionKind::torus) {
      double L = side(i);
      if (d > 0.5 * L) d = L - d;
    }
    s += d * d;
  }
  return s;
}

double Region::distance(const Point& p, const Point& q) const {
  return std::sqrt(dist2(p, q));
}

double distance(const Point& p, const Point& q, const Region& region) {
  return region.distance(p, q);
}

}  // namespace stalloc
