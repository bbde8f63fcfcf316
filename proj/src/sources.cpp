#include "stable_alloc/sources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "stable_alloc/errors.hpp"
#include "stable_alloc/rng.hpp"

namespace stalloc {

namespace {

bool coords_less(const Point& a, const Point& b) {
  return a.x < b.x;  // lexicographic on the padded array
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

CenterSet::CenterSet(Region region, std::vector<Point> centers)
    : region_(std::move(region)), centers_(std::move(centers)) {
  for (const Point& p : centers_) {
    if (p.dim != region_.dim()) {
      throw InvalidInputError("center dimension does not match region");
    }
    if (!region_.contains(p)) {
      throw InvalidInputError("center outside region");
    }
  }
  std::vector<std::size_t> order(centers_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return coords_less(centers_[a], centers_[b]);
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (centers_[order[i - 1]].x == centers_[order[i]].x) {
      throw InvalidInputError("duplicate center coordinates");
    }
  }
}

double CenterSet::lambda_hat() const {
  return static_cast<double>(size()) / region_.volume();
}

CenterSet sample_poisson(double intensity, const Region& region,
                         std::uint64_t seed) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw InvalidInputError("poisson intensity must be finite and >= 0");
  }
  auto rng = make_rng(seed);
  const std::int64_t n = poisson_count(intensity * region.volume(), rng);
  const int d = region.dim();

  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  std::vector<Point> sorted;  // kept ordered for the duplicate check
  while (static_cast<std::int64_t>(pts.size()) < n) {
    Point p;
    p.dim = d;
    for (int i = 0; i < d; ++i) {
      double c = uniform53(rng) * region.side(i);
      if (c >= region.side(i)) c = 0.0;
      p[i] = c;
    }
    auto it = std::lower_bound(sorted.begin(), sorted.end(), p, coords_less);
    if (it != sorted.end() && it->x == p.x) continue;  // redraw duplicates
    sorted.insert(it, p);
    pts.push_back(p);
  }
  return CenterSet(region, std::move(pts));
}

CenterSet sample_lattice(const Region& region, double spacing, double jitter,
                         std::uint64_t seed) {
  if (!(spacing > 0.0)) throw InvalidInputError("lattice spacing must be > 0");
  if (!(jitter >= 0.0) || jitter >= 0.5 * spacing) {
    throw InvalidInputError("lattice jitter must be in [0, spacing/2)");
  }
  const int d = region.dim();
  std::int64_t counts[kMaxDim] = {1, 1, 1};
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) {
    double ratio = region.side(i) / spacing;
    std::int64_t m = static_cast<std::int64_t>(std::llround(ratio));
    if (m < 1 || std::fabs(static_cast<double>(m) * spacing - region.side(i)) >
                     1e-9 * region.side(i)) {
      throw InvalidInputError(
          "region side is not an integer multiple of lattice spacing");
    }
    counts[i] = m;
    total *= m;
  }

  auto rng = make_rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(total));
  std::int64_t k[kMaxDim] = {0, 0, 0};
  for (std::int64_t c = 0; c < total; ++c) {
    Point p;
    p.dim = d;
    for (int i = 0; i < d; ++i) {
      double coord = static_cast<double>(k[i]) * spacing;
      if (jitter > 0.0) {
        coord += (2.0 * uniform53(rng) - 1.0) * jitter;
      }
      p[i] = coord;
    }
    if (region.kind() == RegionKind::torus) {
      p = region.wrap(p);
    } else {
      for (int i = 0; i < d; ++i) {
        p[i] = std::clamp(p[i], 0.0, region.side(i));
      }
    }
    pts.push_back(p);
    // advance row-major multi-index, last axis fastest
    for (int i = d - 1; i >= 0; --i) {
      if (++k[i] < counts[i]) break;
      k[i] = 0;
    }
  }
  return CenterSet(region, std::move(pts));
}

void save_centers(const CenterSet& cs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const int d = cs.region().dim();
  for (int i = 0; i < d; ++i) out << (i ? ",x" : "x") << i;
  out << "\n";
  for (const Point& p : cs.points()) {
    for (int i = 0; i < d; ++i) {
      if (i) out << ",";
      out << format_double(p[i]);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

CenterSet load_centers(const std::filesystem::path& path,
                       const Region& region) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  const int d = region.dim();
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) {
    throw ParseError(path.string(), 1, "missing header");
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::string expect;
    for (int i = 0; i < d; ++i) expect += (i ? ",x" : "x") + std::to_string(i);
    if (line != expect) {
      throw ParseError(path.string(), lineno,
                       "bad header, expected \"" + expect + "\"");
    }
  }

  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Point p;
    p.dim = d;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < d; ++i) {
      if (i) {
        if (ptr >= end || *ptr != ',') {
          throw ParseError(path.string(), lineno, "expected ','");
        }
        ++ptr;
      }
      double v = 0.0;
      auto res = std::from_chars(ptr, end, v);
      if (res.ec != std::errc{}) {
        throw ParseError(path.string(), lineno, "bad number");
      }
      ptr = res.ptr;
      p[i] = v;
    }
    if (ptr != end) {
      throw ParseError(path.string(), lineno, "trailing characters");
    }
    if (!region.contains(p)) {
      throw ParseError(path.string(), lineno, "point outside region");
    }
    pts.push_back(p);
  }

  // duplicate check here so the error can name a line
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return coords_less(pts[a], pts[b]);
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (pts[order[i - 1]].x == pts[order[i]].x) {
      long bad = static_cast<long>(std::max(order[i - 1], order[i])) + 2;
      throw ParseError(path.string(), bad, "duplicate center");
    }
  }
  return CenterSet(region, std::move(pts));
}

}  // namespace stalloc
