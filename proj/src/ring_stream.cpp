#include "ring_stream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stalloc::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ShellWalker::ShellWalker(const RingLattice& lat,
                         const std::int64_t anchor[kMaxDim], double slack)
    : lat_(lat), slack_(slack) {
  min_step_ = kInf;
  max_shell_ = 0;
  for (int i = 0; i < lat_.dim; ++i) {
    anchor_[i] = anchor[i];
    if (lat_.wrap) {
      lo_[i] = -((lat_.counts[i] - 1) / 2);
      hi_[i] = lat_.counts[i] / 2;
    } else {
      lo_[i] = -anchor[i];
      hi_[i] = lat_.counts[i] - 1 - anchor[i];
    }
    max_shell_ = std::max({max_shell_, -lo_[i], hi_[i]});
    min_step_ = std::min(min_step_, lat_.step[i]);
  }
}

double ShellWalker::bound2() const {
  if (exhausted()) return kInf;
  double b = (static_cast<double>(shell_) - slack_) * min_step_;
  if (b <= 0.0) return 0.0;
  return b * b;
}

void ShellWalker::emit_box(const std::int64_t dk[kMaxDim],
                           const std::function<void(std::int64_t)>& emit) const {
  std::int64_t b[kMaxDim] = {0, 0, 0};
  for (int i = 0; i < lat_.dim; ++i) {
    std::int64_t v = anchor_[i] + dk[i];
    if (lat_.wrap) {
      v %= lat_.counts[i];
      if (v < 0) v += lat_.counts[i];
    }
    b[i] = v;
  }
  emit(lat_.ravel(b));
}

void ShellWalker::expand(const std::function<void(std::int64_t)>& emit) {
  const std::int64_t k = shell_;
  ++shell_;
  std::int64_t dk[kMaxDim] = {0, 0, 0};
  if (k == 0) {
    emit_box(dk, emit);
    return;
  }
  // Offsets with Chebyshev norm exactly k: for a fixed axis a carrying +-k,
  // earlier axes range over |dk| <= k-1 and later axes over |dk| <= k, which
  // enumerates each offset exactly once.
  for (int a = 0; a < lat_.dim; ++a) {
    for (int sign = 0; sign < 2; ++sign) {
      std::int64_t va = sign == 0 ? -k : k;
      if (va < lo_[a] || va > hi_[a]) continue;
      dk[a] = va;
      // iterate the remaining axes
      std::int64_t range_lo[kMaxDim];
      std::int64_t range_hi[kMaxDim];
      bool empty = false;
      for (int i = 0; i < lat_.dim; ++i) {
        if (i == a) continue;
        std::int64_t cap = i < a ? k - 1 : k;
        range_lo[i] = std::max(lo_[i], -cap);
        range_hi[i] = std::min(hi_[i], cap);
        if (range_lo[i] > range_hi[i]) empty = true;
      }
      if (empty) continue;
      for (int i = 0; i < lat_.dim; ++i) {
        if (i != a) dk[i] = range_lo[i];
      }
      while (true) {
        emit_box(dk, emit);
        int i = lat_.dim - 1;
        for (; i >= 0; --i) {
          if (i == a) continue;
          if (++dk[i] <= range_hi[i]) break;
          dk[i] = range_lo[i];
        }
        if (i < 0) break;
      }
    }
  }
}

CellStream::CellStream(const Grid& grid, const Point& origin)
    : grid_(&grid), origin_(origin) {
  RingLattice lat;
  lat.dim = grid.dim();
  lat.wrap = grid.region().kind() == RegionKind::torus;
  for (int i = 0; i < lat.dim; ++i) {
    lat.counts[i] = grid.res(i);
    lat.step[i] = grid.cell_size(i);
  }
  std::int64_t anchor[kMaxDim] = {0, 0, 0};
  grid.unravel(grid.locate(origin), anchor);
  walker_ = ShellWalker(lat, anchor, 0.5);
}

const Cand* CellStream::peek() {
  while (!walker_.exhausted() &&
         (heap_.empty() || walker_.bound2() <= heap_.top().first)) {
    walker_.expand([this](std::int64_t cell) {
      heap_.push({grid_->region().dist2(origin_, grid_->cell_center(cell)),
                  cell});
    });
  }
  return heap_.empty() ? nullptr : &heap_.top();
}

void CellStream::pop() {
  if (peek()) heap_.pop();
}

CenterBuckets::CenterBuckets(const CenterSet& cs) : cs_(&cs) {
  const Region& region = cs.region();
  lat_.dim = region.dim();
  lat_.wrap = region.kind() == RegionKind::torus;
  // about one center per bucket
  double density = std::max(1.0, static_cast<double>(cs.size()));
  double per_unit = std::pow(density / region.volume(),
                             1.0 / static_cast<double>(lat_.dim));
  std::int64_t total = 1;
  for (int i = 0; i < lat_.dim; ++i) {
    auto m = static_cast<std::int64_t>(std::floor(region.side(i) * per_unit));
    m = std::max<std::int64_t>(1, m);
    lat_.counts[i] = m;
    lat_.step[i] = region.side(i) / static_cast<double>(m);
    total *= m;
  }
  offsets_.assign(static_cast<std::size_t>(total) + 1, 0);
  std::vector<std::int64_t> home(static_cast<std::size_t>(cs.size()));
  std::int64_t b[kMaxDim];
  for (std::int64_t c = 0; c < cs.size(); ++c) {
    anchor_of(cs.center(c), b);
    home[static_cast<std::size_t>(c)] = lat_.ravel(b);
    ++offsets_[static_cast<std::size_t>(home[static_cast<std::size_t>(c)]) + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  items_.resize(static_cast<std::size_t>(cs.size()));
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::int64_t c = 0; c < cs.size(); ++c) {
    auto& cur = cursor[static_cast<std::size_t>(home[static_cast<std::size_t>(c)])];
    items_[static_cast<std::size_t>(cur++)] = static_cast<std::int32_t>(c);
  }
}

void CenterBuckets::anchor_of(const Point& p, std::int64_t b[kMaxDim]) const {
  for (int i = 0; i < lat_.dim; ++i) {
    auto v = static_cast<std::int64_t>(std::floor(p[i] / lat_.step[i]));
    b[i] = std::clamp<std::int64_t>(v, 0, lat_.counts[i] - 1);
  }
}

const std::int32_t* CenterBuckets::bucket_begin(std::int64_t flat) const {
  return items_.data() + offsets_[static_cast<std::size_t>(flat)];
}

const std::int32_t* CenterBuckets::bucket_end(std::int64_t flat) const {
  return items_.data() + offsets_[static_cast<std::size_t>(flat) + 1];
}

CenterStream::CenterStream(const CenterBuckets& buckets, const Point& origin)
    : buckets_(&buckets), origin_(origin) {
  std::int64_t anchor[kMaxDim];
  buckets.anchor_of(origin, anchor);
  walker_ = ShellWalker(buckets.lattice(), anchor, 1.0);
}

const Cand* CenterStream::peek() {
  while (!walker_.exhausted() &&
         (heap_.empty() || walker_.bound2() <= heap_.top().first)) {
    walker_.expand([this](std::int64_t bucket) {
      const CenterSet& cs = buckets_->centers();
      for (const std::int32_t* it = buckets_->bucket_begin(bucket);
           it != buckets_->bucket_end(bucket); ++it) {
        heap_.push({cs.region().dist2(origin_, cs.center(*it)), *it});
      }
    });
  }
  return heap_.empty() ? nullptr : &heap_.top();
}

void CenterStream::pop() {
  if (peek()) heap_.pop();
}

}  // namespace stalloc::detail
