#pragma once

#include <array>
#include <initializer_list>
#include <vector>

namespace stalloc {

inline constexpr int kMaxDim = 3;

// A point in R^d with d <= kMaxDim. Unused coordinates stay zero so that
// equality and hashing work on the whole array.
struct Point {
  std::array<double, kMaxDim> x{};
  int dim = 0;

  Point() = default;
  Point(std::initializer_list<double> coords);

  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Point&, const Point&) = default;
};

enum class RegionKind { torus, box };

/// The ambient space: a d-dimensional torus or box with side lengths L_i.
/// Torus is the default in experiments; the box has free boundaries and is
/// intended for diagnostics only.
class Region {
 public:
  Region(RegionKind kind, std::vector<double> sides);

  RegionKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double side(int axis) const { return sides_[static_cast<std::size_t>(axis)]; }
  std::vector<double> sides() const;

  double volume() const;
  // Torus: (1/2) sqrt(sum L_i^2); box: sqrt(sum L_i^2).
  double diameter() const;

  // Coordinates valid for this region: torus [0, L_i), box [0, L_i].
  bool contains(const Point& p) const;
  // Reduce coordinates into [0, L_i) (identity for in-range box points).
  Point wrap(Point p) const;

  // Squared distance; per-axis differences are reduced to [-L_i/2, L_i/2]
  // on the torus. All comparisons in the library are done on dist2 so that
  // exact ties mean exactly equal doubles.
  double dist2(const Point& p, const Point& q) const;
  double distance(const Point& p, const Point& q) const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  RegionKind kind_;
  int dim_;
  std::array<double, kMaxDim> sides_{};
};

double distance(const Point& p, const Point& q, const Region& region);

}  // namespace stalloc
