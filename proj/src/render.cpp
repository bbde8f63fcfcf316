#include <cmath>
#include <cstdio>
#include <cstring>

#include "stable_alloc/errors.hpp"
#include "stable_alloc/io.hpp"

namespace stalloc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Rgb {
  std::uint8_t r, g, b;
};

Rgb hsv_to_rgb(double h, double s, double v) {
  h = h - std::floor(h);
  double c = v * s;
  double hp = h * 6.0;
  double xcomp = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = xcomp; break;
    case 1: r = xcomp; g = c; break;
    case 2: g = c; b = xcomp; break;
    case 3: g = xcomp; b = c; break;
    case 4: r = xcomp; b = c; break;
    default: r = c; b = xcomp; break;
  }
  double m = v - c;
  auto byte = [](double f) {
    return static_cast<std::uint8_t>(std::lround(255.0 * f));
  };
  return Rgb{byte(r + m), byte(g + m), byte(b + m)};
}

// Two colors per territory: a base hue and a darker companion for annuli.
void palette_colors(std::uint64_t palette_seed, std::int32_t center, Rgb out[2]) {
  std::uint64_t u = splitmix64(palette_seed ^ splitmix64(
                                  static_cast<std::uint64_t>(center) + 1));
  double hue = static_cast<double>(u & 0xFFFF) / 65536.0;
  double sat = 0.50 + 0.45 * static_cast<double>((u >> 16) & 0xFF) / 255.0;
  double val = 0.65 + 0.30 * static_cast<double>((u >> 24) & 0xFF) / 255.0;
  out[0] = hsv_to_rgb(hue, sat, val);
  out[1] = hsv_to_rgb(hue, sat, val * 0.55);
}

}  // namespace

std::vector<std::uint8_t> render_ppm(const Allocation& alloc,
                                     const RenderSpec& spec) {
  const Grid& grid = alloc.grid;
  if (grid.dim() != 2) {
    throw InvalidInputError("render supports d = 2 only");
  }
  if (!(spec.pixels_per_unit > 0.0)) {
    throw InvalidInputError("pixels_per_unit must be > 0");
  }
  if (!(spec.annulus_width > 0.0)) {
    throw InvalidInputError("annulus_width must be > 0");
  }
  const Region& region = grid.region();
  const double Lx = region.side(0);
  const double Ly = region.side(1);
  const auto width = static_cast<std::int64_t>(std::llround(Lx * spec.pixels_per_unit));
  const auto height = static_cast<std::int64_t>(std::llround(Ly * spec.pixels_per_unit));
  if (width < 1 || height < 1 || width * height > (1LL << 30)) {
    throw InvalidInputError("image dimensions out of range");
  }

  const std::int64_t n = alloc.centers.size();
  std::vector<Rgb> colors(static_cast<std::size_t>(n) * 2);
  for (std::int32_t c = 0; c < n; ++c) {
    palette_colors(spec.palette_seed, c, &colors[static_cast<std::size_t>(c) * 2]);
  }
  const Rgb unclaimed{spec.unclaimed_color[0], spec.unclaimed_color[1],
                      spec.unclaimed_color[2]};

  char header[64];
  int header_len = std::snprintf(header, sizeof(header), "P6\n%lld %lld\n255\n",
                                 static_cast<long long>(width),
                                 static_cast<long long>(height));
  std::vector<std::uint8_t> out(static_cast<std::size_t>(header_len) +
                                static_cast<std::size_t>(width * height) * 3);
  std::memcpy(out.data(), header, static_cast<std::size_t>(header_len));
  std::uint8_t* pix = out.data() + header_len;

  for (std::int64_t py = 0; py < height; ++py) {
    // top row first: py = 0 is the largest y coordinate
    const double y = (static_cast<double>(height - py) - 0.5) * Ly /
                     static_cast<double>(height);
    for (std::int64_t px = 0; px < width; ++px) {
      const double x =
          (static_cast<double>(px) + 0.5) * Lx / static_cast<double>(width);
      Point p;
      p.dim = 2;
      p[0] = x;
      p[1] = y;
      const std::int64_t cell = grid.locate(p);
      const std::int32_t c = alloc.assignment[static_cast<std::size_t>(cell)];
      Rgb rgb = unclaimed;
      if (c != kUnclaimed) {
        if (spec.style == RenderSpec::Style::flat) {
          rgb = colors[static_cast<std::size_t>(c) * 2];
        } else {
          double d = region.distance(p, alloc.centers.center(c));
          auto ring = static_cast<std::int64_t>(
              std::floor(d / spec.annulus_width));
          rgb = colors[static_cast<std::size_t>(c) * 2 +
                       static_cast<std::size_t>(ring & 1)];
        }
      }
      std::uint8_t* q = pix + (py * width + px) * 3;
      q[0] = rgb.r;
      q[1] = rgb.g;
      q[2] = rgb.b;
    }
  }

  // center markers
  const int half = std::max(0, spec.marker_px / 2);
  const bool wrap = region.kind() == RegionKind::torus;
  for (std::int32_t c = 0; c < n; ++c) {
    const Point& ctr = alloc.centers.center(c);
    const auto cx = static_cast<std::int64_t>(
        std::floor(ctr[0] / Lx * static_cast<double>(width)));
    const auto cy = height - 1 -
                    static_cast<std::int64_t>(
                        std::floor(ctr[1] / Ly * static_cast<double>(height)));
    for (std::int64_t dy = -half; dy <= half; ++dy) {
      for (std::int64_t dx = -half; dx <= half; ++dx) {
        std::int64_t mx = cx + dx;
        std::int64_t my = cy + dy;
        if (wrap) {
          mx = ((mx % width) + width) % width;
          my = ((my % height) + height) % height;
        } else if (mx < 0 || mx >= width || my < 0 || my >= height) {
          continue;
        }
        std::uint8_t* q = pix + (my * width + mx) * 3;
        q[0] = q[1] = q[2] = 255;
      }
    }
  }
  return out;
}

}  // namespace stalloc
