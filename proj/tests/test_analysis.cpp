#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "stable_alloc/analysis.hpp"
#include "stable_alloc/errors.hpp"
#include "stable_alloc/rng.hpp"

using namespace stalloc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Allocation line_allocation() {
  Region region(RegionKind::torus, {1.0});
  Grid grid(region, {8});
  CenterSet cs(region, {Point{0.25}, Point{0.75}});
  return allocate_greedy(grid, cs, 0.5);
}

}  // namespace

TEST_CASE("phase stats on the subcritical and supercritical regimes") {
  Region region(RegionKind::torus, {16.0, 16.0});
  Grid grid(region, {128, 128});

  CenterSet cs = sample_poisson(1.0, region, 4);
  REQUIRE(cs.size() > 100);

  Allocation sub = allocate_greedy(grid, cs, 0.5);
  PhaseStats s1 = phase_stats(sub);
  CHECK(s1.phase == Phase::subcritical);
  CHECK(s1.unclaimed_fraction == doctest::Approx(0.5).epsilon(0.25));
  CHECK(*s1.mean_residual_appetite == 0.0);
  CHECK(phase_identity_gap(s1) <=
        s1.lambda_hat * s1.quota_quantization_error + 1e-9);

  Allocation sup = allocate_greedy(grid, cs, 2.0);
  PhaseStats s2 = phase_stats(sup);
  CHECK(s2.phase == Phase::supercritical);
  CHECK(s2.unclaimed_fraction == 0.0);
  CHECK(*s2.mean_residual_appetite == doctest::Approx(1.0).epsilon(0.25));
  CHECK(phase_identity_gap(s2) <=
        s2.lambda_hat * s2.quota_quantization_error + 1e-9);
}

TEST_CASE("exact criticality is exact") {
  // 16 centers, 1024 cells, quota 64 = cells / n
  Region region(RegionKind::torus, {4.0, 4.0});
  Grid grid(region, {32, 32});
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    CenterSet cs = sample_lattice(region, 1.0, 0.45, seed);
    REQUIRE(cs.size() == 16);
    CHECK(quota_cells(1.0, grid) * cs.size() == grid.cell_count());
    Allocation a = allocate_greedy(grid, cs, 1.0);
    PhaseStats s = phase_stats(a);
    CHECK(a.unclaimed_count() == 0);
    CHECK(a.unsated_count() == 0);
    CHECK(s.unclaimed_fraction == 0.0);
    CHECK(*s.mean_residual_appetite == 0.0);
    CHECK(s.phase == Phase::critical);
  }
}

TEST_CASE("phase identity holds with awkward appetites") {
  auto rng = make_rng(15);
  Region region(RegionKind::torus, {6.0, 6.0});
  Grid grid(region, {48, 48});
  for (int trial = 0; trial < 6; ++trial) {
    CenterSet cs = sample_poisson(1.0, region, 600 + trial);
    if (cs.size() == 0) continue;
    double alpha = 0.2 + 1.7 * uniform53(rng);
    PhaseStats s = phase_stats(allocate_greedy(grid, cs, alpha));
    CHECK(phase_identity_gap(s) <=
          s.lambda_hat * s.quota_quantization_error + 1e-9);
    // stability forbids unclaimed cells and unsated centers coexisting
    bool unclaimed = s.unclaimed_fraction > 0.0;
    bool residual = *s.mean_residual_appetite > 0.0;
    CHECK(!(unclaimed && residual));
  }
}

TEST_CASE("distance samples on the eight-cell line") {
  Allocation a = line_allocation();
  std::vector<double> xs = distance_samples(a);
  REQUIRE(xs.size() == 8);
  std::multiset<double> per_center_0(xs.begin(), xs.begin() + 4);
  std::multiset<double> expected{0.1875, 0.0625, 0.0625, 0.1875};
  CHECK(per_center_0 == expected);
  std::multiset<double> per_center_1(xs.begin() + 4, xs.end());
  CHECK(per_center_1 == expected);

  Allocation zero = allocate_greedy(a.grid, a.centers, 0.0);
  for (double x : distance_samples(zero)) CHECK(std::isinf(x));

  CenterSet one(a.grid.region(), {Point{0.5}});
  Allocation voronoi = allocate_greedy(a.grid, one, kInf);
  double max_x = 0.0;
  for (double x : distance_samples(voronoi)) max_x = std::max(max_x, x);
  CHECK(max_x <= a.grid.region().diameter() + 1e-12);
}

TEST_CASE("mean distance power") {
  Allocation a = line_allocation();
  CHECK(*mean_distance_power(a, 0.0) == doctest::Approx(1.0));
  CHECK(*mean_distance_power(a, 1.0) == doctest::Approx(0.125));
  Allocation zero = allocate_greedy(a.grid, a.centers, 0.0);
  CHECK(!mean_distance_power(zero, 1.0).has_value());
}

TEST_CASE("tail trend classification") {
  auto mk = [](double L, std::vector<double> means) {
    TailWindow w;
    w.window = L;
    for (double m : means) {
      w.per_seed_distances.push_back(std::vector<double>(10, m));
    }
    return w;
  };

  std::vector<TailWindow> growing{
      mk(8, {0.5, 0.52, 0.48, 0.5, 0.51}), mk(16, {0.7, 0.72, 0.68, 0.7, 0.71}),
      mk(32, {0.9, 0.92, 0.88, 0.9, 0.91}), mk(64, {1.1, 1.12, 1.08, 1.1, 1.11})};
  TrendReport g = tail_trend(growing, 1.0);
  CHECK(g.increasing);
  CHECK(!g.stabilized);
  CHECK(g.rows.size() == 4);

  std::vector<TailWindow> flat{mk(8, {1.0, 1.0, 1.0, 1.0, 1.0}),
                               mk(16, {1.01, 1.01, 1.01, 1.01, 1.01}),
                               mk(32, {1.02, 1.02, 1.02, 1.02, 1.02})};
  TrendReport f = tail_trend(flat, 1.0);
  CHECK(f.stabilized);
  CHECK(f.last_rel_change < 0.10);

  // X^0 = 1 regardless of the samples
  TrendReport z = tail_trend(growing, 0.0);
  for (const TrendRow& row : z.rows) CHECK(row.mean == doctest::Approx(1.0));
  CHECK(!z.increasing);

  CHECK_THROWS_AS(tail_trend({mk(8, {1, 1, 1, 1, 1}), mk(16, {1, 1, 1, 1, 1})},
                             1.0),
                  InvalidInputError);
  std::vector<TailWindow> few{mk(8, {1, 1}), mk(16, {1, 1}), mk(32, {1, 1})};
  CHECK_THROWS_AS(tail_trend(few, 1.0), InvalidInputError);
  std::vector<TailWindow> disordered{mk(8, {1, 1, 1, 1, 1}),
                                     mk(8, {1, 1, 1, 1, 1}),
                                     mk(32, {1, 1, 1, 1, 1})};
  CHECK_THROWS_AS(tail_trend(disordered, 1.0), InvalidInputError);
}

TEST_CASE("territory geometry on the eight-cell line") {
  Allocation a = line_allocation();
  TerritoryReport r = territory_geometry(a);
  REQUIRE(r.per_center.size() == 2);
  for (const TerritoryGeometry& g : r.per_center) {
    CHECK(g.load == 4);
    CHECK(g.components == 1);
    CHECK(g.radius == doctest::Approx(0.1875));
  }
}

TEST_CASE("single-center Voronoi territory is one component") {
  Region region(RegionKind::torus, {2.0, 2.0});
  Grid grid(region, {16, 16});
  CenterSet one(region, {Point{1.0, 1.0}});
  Allocation a = allocate_greedy(grid, one, kInf);
  TerritoryReport r = territory_geometry(a);
  REQUIRE(r.per_center.size() == 1);
  CHECK(r.per_center[0].components == 1);
  CHECK(r.per_center[0].load == grid.cell_count());
  double expect = 0.0;
  for (std::int64_t x = 0; x < grid.cell_count(); ++x) {
    expect = std::max(expect, region.distance(grid.cell_center(x), one.center(0)));
  }
  CHECK(r.per_center[0].radius == doctest::Approx(expect));
  CHECK(r.probe_ball_territories == 1);
}

TEST_CASE("components wrap across the torus seam") {
  // one center whose critical territory straddles coordinate zero
  Region region(RegionKind::torus, {4.0});
  Grid grid(region, {16});
  CenterSet cs(region, {Point{0.05}, Point{2.0}});
  Allocation a = allocate_greedy(grid, cs, 2.0);
  TerritoryReport r = territory_geometry(a);
  CHECK(r.per_center[0].components == 1);
  CHECK(r.per_center[1].components == 1);
}

TEST_CASE("demand diagnostics bounds") {
  Region region(RegionKind::torus, {8.0, 8.0});
  Grid grid(region, {64, 64});
  CenterSet cs = sample_poisson(1.0, region, 33);
  REQUIRE(cs.size() > 0);
  Point mid{4.0, 4.0};

  Allocation sub = allocate_greedy(grid, cs, 0.5 / cs.lambda_hat());
  DemandReport dr = demand_diagnostics(sub, mid);
  double unclaimed_mass =
      static_cast<double>(sub.unclaimed_count()) * grid.cell_mass();
  CHECK(dr.desire_volume >= unclaimed_mass - 1e-12);

  Allocation sup = allocate_greedy(grid, cs, 2.0 / cs.lambda_hat());
  DemandReport dr2 = demand_diagnostics(sup, mid);
  CHECK(dr2.covet_count >= sup.unsated_count());
}
