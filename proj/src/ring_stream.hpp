#pragma once

// Lazy nearest-first enumeration over a periodic (or bounded) lattice of
// boxes: grid cells around a center, or buckets of centers around a cell.
// Shell k holds the lattice offsets with Chebyshev norm k, restricted to
// canonical wrap offsets on the torus so every box appears exactly once.
// Everything in shells >= k is at least (k - slack) * min_step from the
// origin (slack 0.5 when targets sit at box centers, 1.0 when they can sit
// anywhere in the box), which is what lets a heap of generated candidates
// emit in globally nondecreasing order.

#include <cstdint>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "stable_alloc/geometry.hpp"
#include "stable_alloc/grid.hpp"
#include "stable_alloc/sources.hpp"

namespace stalloc::detail {

struct RingLattice {
  int dim = 0;
  std::int64_t counts[kMaxDim] = {1, 1, 1};
  double step[kMaxDim] = {0, 0, 0};
  bool wrap = false;

  std::int64_t ravel(const std::int64_t b[kMaxDim]) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * counts[i] + b[i];
    return idx;
  }
};

class ShellWalker {
 public:
  ShellWalker() = default;
  ShellWalker(const RingLattice& lat, const std::int64_t anchor[kMaxDim],
              double slack);

  bool exhausted() const { return shell_ > max_shell_; }
  // Lower bound on dist^2 for anything in shells not yet expanded.
  double bound2() const;
  // Emit the flat indices of the next shell's boxes and advance.
  void expand(const std::function<void(std::int64_t)>& emit);

 private:
  void emit_box(const std::int64_t dk[kMaxDim],
                const std::function<void(std::int64_t)>& emit) const;

  RingLattice lat_;
  std::int64_t anchor_[kMaxDim] = {0, 0, 0};
  std::int64_t lo_[kMaxDim] = {0, 0, 0};
  std::int64_t hi_[kMaxDim] = {0, 0, 0};
  double slack_ = 0.5;
  double min_step_ = 0.0;
  std::int64_t shell_ = 0;
  std::int64_t max_shell_ = 0;
};

using Cand = std::pair<double, std::int64_t>;  // (dist2, index), min on both

class CandHeap {
 public:
  bool empty() const { return heap_.empty(); }
  const Cand& top() const { return heap_.top(); }
  void push(Cand c) { heap_.push(c); }
  void pop() { heap_.pop(); }

 private:
  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> heap_;
};

// Grid cells in nondecreasing (dist2 from origin, cell index) order.
class CellStream {
 public:
  CellStream(const Grid& grid, const Point& origin);
  const Cand* peek();
  void pop();

 private:
  const Grid* grid_;
  Point origin_;
  ShellWalker walker_;
  CandHeap heap_;
};

// Uniform bucket grid over a center set, sized at roughly one center per
// bucket, for nearest-center queries.
class CenterBuckets {
 public:
  explicit CenterBuckets(const CenterSet& cs);

  const CenterSet& centers() const { return *cs_; }
  const RingLattice& lattice() const { return lat_; }
  void anchor_of(const Point& p, std::int64_t b[kMaxDim]) const;
  // centers in bucket (CSR layout, ascending index within a bucket)
  const std::int32_t* bucket_begin(std::int64_t flat) const;
  const std::int32_t* bucket_end(std::int64_t flat) const;

 private:
  const CenterSet* cs_;
  RingLattice lat_;
  std::vector<std::int64_t> offsets_;
  std::vector<std::int32_t> items_;
};

// Centers in nondecreasing (dist2 from origin, center index) order.
class CenterStream {
 public:
  CenterStream(const CenterBuckets& buckets, const Point& origin);
  const Cand* peek();
  void pop();

 private:
  const CenterBuckets* buckets_;
  Point origin_;
  ShellWalker walker_;
  CandHeap heap_;
};

}  // namespace stalloc::detail
