#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "stable_alloc/errors.hpp"
#include "stable_alloc/io.hpp"

namespace stalloc {

using nlohmann::json;

namespace {

constexpr const char* kAllocationCsv = "allocation.csv";
constexpr const char* kAllocationMeta = "allocation.json";
constexpr const char* kCentersCsv = "centers.csv";

json region_to_json(const Region& r) {
  return json{{"kind", r.kind() == RegionKind::torus ? "torus" : "box"},
              {"sides", r.sides()}};
}

Region region_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  RegionKind k;
  if (kind == "torus") {
    k = RegionKind::torus;
  } else if (kind == "box") {
    k = RegionKind::box;
  } else {
    throw InvalidInputError("region kind must be torus|box");
  }
  return Region(k, j.at("sides").get<std::vector<double>>());
}

}  // namespace

void save_allocation(const Allocation& alloc, std::uint64_t seed,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_centers(alloc.centers, dir / kCentersCsv);

  {
    std::ofstream out(dir / kAllocationCsv, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " +
                            (dir / kAllocationCsv).string());
    out << "cell_index,center_index\n";
    for (std::int64_t x = 0; x < alloc.cell_count(); ++x) {
      out << x << ',' << alloc.assignment[static_cast<std::size_t>(x)] << '\n';
    }
    if (!out) throw IoError("write failed: " + (dir / kAllocationCsv).string());
  }

  json meta{{"format", "stable-alloc/allocation-v1"},
            {"region", region_to_json(alloc.grid.region())},
            {"resolution", alloc.grid.resolution()},
            {"alpha", std::isinf(alloc.alpha) ? json("inf") : json(alloc.alpha)},
            {"algo", algo_name(alloc.algo)},
            {"seed", seed},
            {"n_centers", alloc.centers.size()},
            {"quota_cells", alloc.quota},
            {"cell_mass", alloc.grid.cell_mass()},
            {"centers_csv", kCentersCsv}};
  std::ofstream out(dir / kAllocationMeta, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " +
                          (dir / kAllocationMeta).string());
  out << meta.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + (dir / kAllocationMeta).string());
}

namespace {

json load_meta(const std::filesystem::path& dir) {
  std::ifstream in(dir / kAllocationMeta, std::ios::binary);
  if (!in) throw IoError("cannot open: " + (dir / kAllocationMeta).string());
  json meta;
  try {
    in >> meta;
  } catch (const json::parse_error& e) {
    throw InvalidInputError(std::string("allocation meta: ") + e.what());
  }
  return meta;
}

}  // namespace

std::uint64_t load_allocation_seed(const std::filesystem::path& dir) {
  return load_meta(dir).value("seed", std::uint64_t{0});
}

Allocation load_allocation(const std::filesystem::path& dir) {
  json meta = load_meta(dir);
  Region region = region_from_json(meta.at("region"));
  Grid grid(region, meta.at("resolution").get<std::vector<int>>());
  double alpha;
  if (meta.at("alpha").is_string()) {
    alpha = std::numeric_limits<double>::infinity();
  } else {
    alpha = meta.at("alpha").get<double>();
  }
  CenterSet centers = load_centers(
      dir / meta.value("centers_csv", std::string(kCentersCsv)), region);

  const auto csv = dir / kAllocationCsv;
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw IoError("cannot open: " + csv.string());
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError(csv.string(), 1, "empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "cell_index,center_index") {
    throw ParseError(csv.string(), 1, "bad header");
  }

  Allocation alloc{grid,
                   centers,
                   alpha,
                   quota_cells(alpha, grid),
                   algo_from_name(meta.value("algo", std::string("greedy"))),
                   std::vector<std::int32_t>(
                       static_cast<std::size_t>(grid.cell_count()), kUnclaimed),
                   std::vector<std::int64_t>(
                       static_cast<std::size_t>(centers.size()), 0),
                   0};
  std::int64_t expected = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    std::int64_t cell = 0;
    auto res = std::from_chars(ptr, end, cell);
    if (res.ec != std::errc{} || res.ptr >= end || *res.ptr != ',') {
      throw ParseError(csv.string(), lineno, "bad row");
    }
    std::int64_t center = 0;
    res = std::from_chars(res.ptr + 1, end, center);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw ParseError(csv.string(), lineno, "bad row");
    }
    if (cell != expected) {
      throw ParseError(csv.string(), lineno, "cell indices must be 0,1,2,...");
    }
    if (center < kUnclaimed || center >= centers.size()) {
      throw ParseError(csv.string(), lineno, "center index out of range");
    }
    alloc.assignment[static_cast<std::size_t>(cell)] =
        static_cast<std::int32_t>(center);
    if (center != kUnclaimed) ++alloc.loads[static_cast<std::size_t>(center)];
    ++expected;
  }
  if (expected != grid.cell_count()) {
    throw ParseError(csv.string(), lineno,
                     "expected " + std::to_string(grid.cell_count()) + " rows");
  }
  return alloc;
}

std::string stability_report_json(const Allocation& alloc,
                                  const std::vector<UnstablePair>& pairs,
                                  const ValidationReport& validation,
                                  std::size_t max_listed) {
  json listed = json::array();
  for (std::size_t i = 0; i < pairs.size() && i < max_listed; ++i) {
    const UnstablePair& p = pairs[i];
    listed.push_back(json{
        {"cell", p.cell},
        {"center", p.center},
        {"cell_to_center", p.cell_to_center},
        {"cell_to_current",
         std::isinf(p.cell_to_current) ? json("inf") : json(p.cell_to_current)},
        {"desires_closer", p.desires_closer},
        {"desires_unclaimed", p.desires_unclaimed},
        {"covets_unsated", p.covets_unsated},
        {"covets_farther", p.covets_farther}});
  }
  json j{{"stable", pairs.empty()},
         {"unstable_pairs", pairs.size()},
         {"pairs", listed},
         {"valid", validation.ok},
         {"violations", validation.violations},
         {"unclaimed_cells", validation.unclaimed_cells},
         {"unsated_centers", validation.unsated_centers},
         {"n_centers", alloc.centers.size()},
         {"quota_cells", alloc.quota}};
  return j.dump(2) + "\n";
}

std::string stats_json(const Allocation& alloc, bool stable,
                       std::int64_t unstable_pairs, bool valid) {
  PhaseStats ps = phase_stats(alloc);
  const char* phase = ps.phase == Phase::subcritical   ? "subcritical"
                      : ps.phase == Phase::critical    ? "critical"
                                                       : "supercritical";
  double max_x = 0.0;
  double sum_x = 0.0;
  std::int64_t claimed = 0;
  for (std::int64_t x = 0; x < alloc.cell_count(); ++x) {
    double d2 = alloc.assigned_dist2(x);
    if (std::isinf(d2)) continue;
    double d = std::sqrt(d2);
    max_x = std::max(max_x, d);
    sum_x += d;
    ++claimed;
  }
  TerritoryReport terr = territory_geometry(alloc);
  std::int64_t total_components = 0;
  std::int64_t max_components = 0;
  double max_radius = 0.0;
  for (const TerritoryGeometry& g : terr.per_center) {
    total_components += g.components;
    max_components = std::max(max_components, g.components);
    max_radius = std::max(max_radius, g.radius);
  }
  json j{{"lambda_hat", ps.lambda_hat},
         {"alpha", std::isinf(ps.alpha) ? json("inf") : json(ps.alpha)},
         {"n_centers", alloc.centers.size()},
         {"quota_cells", alloc.quota},
         {"cell_mass", alloc.grid.cell_mass()},
         {"quota_quantization_error", ps.quota_quantization_error},
         {"unclaimed_fraction", ps.unclaimed_fraction},
         {"mean_residual_appetite", ps.mean_residual_appetite
                                        ? json(*ps.mean_residual_appetite)
                                        : json(nullptr)},
         {"phase", phase},
         {"unclaimed_cells", alloc.unclaimed_count()},
         {"unsated_centers", alloc.unsated_count()},
         {"stable", stable},
         {"unstable_pairs", unstable_pairs},
         {"valid", valid},
         {"stages", alloc.stages},
         {"distances",
          {{"claimed_cells", claimed},
           {"mean", claimed ? json(sum_x / static_cast<double>(claimed))
                            : json(nullptr)},
           {"max", max_x}}},
         {"territories",
          {{"max_radius", max_radius},
           {"total_components", total_components},
           {"max_components", max_components},
           {"probe_ball_territories", terr.probe_ball_territories}}}};
  return j.dump(2) + "\n";
}

}  // namespace stalloc
