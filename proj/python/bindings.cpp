#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <string>
#include <vector>

#include "stable_alloc/analysis.hpp"
#include "stable_alloc/errors.hpp"
#include "stable_alloc/io.hpp"
#include "stable_alloc/oracle.hpp"

namespace py = pybind11;
using namespace stalloc;

namespace {

Point to_point(const std::vector<double>& coords) {
  Point p;
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim)) {
    throw InvalidInputError("point dimension must be in [1, 3]");
  }
  p.dim = static_cast<int>(coords.size());
  for (int i = 0; i < p.dim; ++i) p[i] = coords[static_cast<std::size_t>(i)];
  return p;
}

std::vector<double> from_point(const Point& p) {
  return std::vector<double>(p.x.begin(), p.x.begin() + p.dim);
}

RegionKind kind_from_string(const std::string& kind) {
  if (kind == "torus") return RegionKind::torus;
  if (kind == "box") return RegionKind::box;
  throw InvalidInputError("region kind must be 'torus' or 'box'");
}

py::array_t<double> centers_array(const CenterSet& cs) {
  const auto n = static_cast<py::ssize_t>(cs.size());
  const auto d = static_cast<py::ssize_t>(cs.region().dim());
  py::array_t<double> out({n, d});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (py::ssize_t j = 0; j < d; ++j) {
      view(i, j) = cs.center(i)[static_cast<int>(j)];
    }
  }
  return out;
}

RenderSpec render_spec_from_kwargs(double pixels_per_unit,
                                   std::uint64_t palette_seed,
                                   const std::string& style,
                                   double annulus_width,
                                   std::vector<int> unclaimed_color,
                                   int marker_px) {
  RenderSpec spec;
  spec.pixels_per_unit = pixels_per_unit;
  spec.palette_seed = palette_seed;
  if (style == "flat") {
    spec.style = RenderSpec::Style::flat;
  } else if (style == "annuli") {
    spec.style = RenderSpec::Style::annuli;
  } else {
    throw InvalidInputError("style must be 'flat' or 'annuli'");
  }
  spec.annulus_width = annulus_width;
  if (unclaimed_color.size() != 3) {
    throw InvalidInputError("unclaimed_color needs 3 components");
  }
  for (int i = 0; i < 3; ++i) {
    spec.unclaimed_color[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(unclaimed_color[static_cast<std::size_t>(i)]);
  }
  spec.marker_px = marker_px;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stable allocations of discretized Lebesgue measure to point centers";

  py::register_exception<InvalidInputError>(m, "InvalidInputError",
                                            PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Region>(m, "Region")
      .def(py::init([](const std::string& kind, std::vector<double> sides) {
             return Region(kind_from_string(kind), std::move(sides));
           }),
           py::arg("kind"), py::arg("sides"))
      .def_property_readonly("kind",
                             [](const Region& r) {
                               return r.kind() == RegionKind::torus
                                          ? "torus"
                                          : "box";
                             })
      .def_property_readonly("dim", &Region::dim)
      .def_property_readonly("sides", &Region::sides)
      .def_property_readonly("volume", &Region::volume)
      .def_property_readonly("diameter", &Region::diameter)
      .def("distance",
           [](const Region& r, std::vector<double> p, std::vector<double> q) {
             return r.distance(to_point(p), to_point(q));
           })
      .def("__repr__", [](const Region& r) {
        std::string s = "Region(";
        s += r.kind() == RegionKind::torus ? "'torus'" : "'box'";
        s += ", dim=" + std::to_string(r.dim()) + ")";
        return s;
      });

  py::class_<CenterSet>(m, "CenterSet")
      .def(py::init([](const Region& region,
                       const std::vector<std::vector<double>>& coords) {
             std::vector<Point> pts;
             pts.reserve(coords.size());
             for (const auto& c : coords) pts.push_back(to_point(c));
             return CenterSet(region, std::move(pts));
           }),
           py::arg("region"), py::arg("coords"))
      .def_property_readonly("region", &CenterSet::region)
      .def("__len__", &CenterSet::size)
      .def_property_readonly("coords", &centers_array)
      .def_property_readonly("lambda_hat", &CenterSet::lambda_hat);

  m.def("sample_poisson", &sample_poisson, py::arg("intensity"),
        py::arg("region"), py::arg("seed"));
  m.def("sample_lattice", &sample_lattice, py::arg("region"),
        py::arg("spacing"), py::arg("jitter") = 0.0, py::arg("seed") = 0);
  m.def("load_centers", &load_centers, py::arg("path"), py::arg("region"));
  m.def("save_centers", &save_centers, py::arg("centers"), py::arg("path"));

  py::class_<Grid>(m, "Grid")
      .def(py::init<Region, std::vector<int>>(), py::arg("region"),
           py::arg("resolution"))
      .def_property_readonly("region", &Grid::region)
      .def_property_readonly("resolution", &Grid::resolution)
      .def_property_readonly("cell_count", &Grid::cell_count)
      .def_property_readonly("cell_mass", &Grid::cell_mass)
      .def("cell_center",
           [](const Grid& g, std::int64_t i) {
             return from_point(g.cell_center(i));
           })
      .def("locate", [](const Grid& g, std::vector<double> p) {
        return g.locate(to_point(p));
      });

  m.def("quota_cells", &quota_cells, py::arg("appetite"), py::arg("grid"));
  m.def("quota_quantization_error", &quota_quantization_error,
        py::arg("appetite"), py::arg("grid"));

  py::class_<Allocation>(m, "Allocation")
      .def_property_readonly("grid",
                             [](const Allocation& a) { return a.grid; })
      .def_property_readonly("centers",
                             [](const Allocation& a) { return a.centers; })
      .def_readonly("alpha", &Allocation::alpha)
      .def_readonly("quota", &Allocation::quota)
      .def_readonly("stages", &Allocation::stages)
      .def_property_readonly("algo",
                             [](const Allocation& a) {
                               return std::string(algo_name(a.algo));
                             })
      .def_property_readonly("assignment",
                             [](const Allocation& a) {
                               return py::array_t<std::int32_t>(
                                   static_cast<py::ssize_t>(a.assignment.size()),
                                   a.assignment.data());
                             })
      .def_property_readonly("loads",
                             [](const Allocation& a) {
                               return py::array_t<std::int64_t>(
                                   static_cast<py::ssize_t>(a.loads.size()),
                                   a.loads.data());
                             })
      .def_property_readonly("unclaimed_count", &Allocation::unclaimed_count)
      .def_property_readonly("unsated_count", &Allocation::unsated_count);

  m.def(
      "allocate",
      [](const Grid& grid, const CenterSet& cs, double alpha,
         const std::string& algo) {
        return allocate(grid, cs, alpha, algo_from_name(algo));
      },
      py::arg("grid"), py::arg("centers"), py::arg("alpha"),
      py::arg("algo") = "greedy");

  py::class_<UnstablePair>(m, "UnstablePair")
      .def_readonly("cell", &UnstablePair::cell)
      .def_readonly("center", &UnstablePair::center)
      .def_readonly("cell_to_center", &UnstablePair::cell_to_center)
      .def_readonly("cell_to_current", &UnstablePair::cell_to_current)
      .def("__repr__", [](const UnstablePair& p) {
        return "UnstablePair(cell=" + std::to_string(p.cell) +
               ", center=" + std::to_string(p.center) + ")";
      });

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("ok", &ValidationReport::ok)
      .def_readonly("violations", &ValidationReport::violations)
      .def_readonly("unclaimed_cells", &ValidationReport::unclaimed_cells)
      .def_readonly("unsated_centers", &ValidationReport::unsated_centers);

  py::class_<CompareReport>(m, "CompareReport")
      .def_readonly("disagreements", &CompareReport::disagreements)
      .def_readonly("tie_involved", &CompareReport::tie_involved);

  m.def("verify_stability", &verify_stability, py::arg("alloc"));
  m.def("validate", &validate, py::arg("alloc"));
  m.def("compare", &compare, py::arg("a"), py::arg("b"));

  py::class_<PhaseStats>(m, "PhaseStats")
      .def_readonly("lambda_hat", &PhaseStats::lambda_hat)
      .def_readonly("alpha", &PhaseStats::alpha)
      .def_readonly("unclaimed_fraction", &PhaseStats::unclaimed_fraction)
      .def_readonly("mean_residual_appetite",
                    &PhaseStats::mean_residual_appetite)
      .def_readonly("quota_quantization_error",
                    &PhaseStats::quota_quantization_error)
      .def_property_readonly("phase", [](const PhaseStats& s) {
        return s.phase == Phase::subcritical   ? "subcritical"
               : s.phase == Phase::critical    ? "critical"
                                               : "supercritical";
      });

  m.def("phase_stats", &phase_stats, py::arg("alloc"));
  m.def("phase_identity_gap", &phase_identity_gap, py::arg("stats"));
  m.def("distance_samples",
        [](const Allocation& a) {
          auto v = distance_samples(a);
          return py::array_t<double>(static_cast<py::ssize_t>(v.size()),
                                     v.data());
        },
        py::arg("alloc"));
  m.def("mean_distance_power", &mean_distance_power, py::arg("alloc"),
        py::arg("p"));

  py::class_<TerritoryGeometry>(m, "TerritoryGeometry")
      .def_readonly("center", &TerritoryGeometry::center)
      .def_readonly("load", &TerritoryGeometry::load)
      .def_readonly("radius", &TerritoryGeometry::radius)
      .def_readonly("components", &TerritoryGeometry::components);

  py::class_<TerritoryReport>(m, "TerritoryReport")
      .def_readonly("per_center", &TerritoryReport::per_center)
      .def_readonly("probe_ball_territories",
                    &TerritoryReport::probe_ball_territories)
      .def_readonly("probe_radius", &TerritoryReport::probe_radius);

  m.def("territory_geometry",
        [](const Allocation& a) { return territory_geometry(a); },
        py::arg("alloc"));
  m.def(
      "territory_geometry_at",
      [](const Allocation& a, std::vector<double> probe, double radius) {
        return territory_geometry(a, to_point(probe), radius);
      },
      py::arg("alloc"), py::arg("probe"), py::arg("radius"));
  m.def("territory_distances", &territory_distances, py::arg("alloc"));

  py::class_<DemandReport>(m, "DemandReport")
      .def_readonly("center", &DemandReport::center)
      .def_readonly("desire_volume", &DemandReport::desire_volume)
      .def_readonly("cell", &DemandReport::cell)
      .def_readonly("covet_count", &DemandReport::covet_count);

  m.def(
      "demand_diagnostics",
      [](const Allocation& a, std::vector<double> probe) {
        return demand_diagnostics(a, to_point(probe));
      },
      py::arg("alloc"), py::arg("probe"));

  py::class_<TrendRow>(m, "TrendRow")
      .def_readonly("window", &TrendRow::window)
      .def_readonly("seeds", &TrendRow::seeds)
      .def_readonly("mean", &TrendRow::mean)
      .def_readonly("sem", &TrendRow::sem);

  py::class_<TrendReport>(m, "TrendReport")
      .def_readonly("rows", &TrendReport::rows)
      .def_readonly("increasing", &TrendReport::increasing)
      .def_readonly("stabilized", &TrendReport::stabilized)
      .def_readonly("last_rel_change", &TrendReport::last_rel_change);

  m.def(
      "tail_trend",
      [](const std::vector<std::pair<double, std::vector<std::vector<double>>>>&
             windows,
         double exponent, double threshold) {
        std::vector<TailWindow> ws;
        ws.reserve(windows.size());
        for (const auto& [L, samples] : windows) ws.push_back({L, samples});
        return tail_trend(ws, exponent, threshold);
      },
      py::arg("windows"), py::arg("exponent"), py::arg("threshold") = 0.10);

  m.def(
      "render_ppm",
      [](const Allocation& a, double pixels_per_unit, std::uint64_t palette_seed,
         const std::string& style, double annulus_width,
         std::vector<int> unclaimed_color, int marker_px) {
        auto bytes = render_ppm(
            a, render_spec_from_kwargs(pixels_per_unit, palette_seed, style,
                                       annulus_width, std::move(unclaimed_color),
                                       marker_px));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                         bytes.size());
      },
      py::arg("alloc"), py::arg("pixels_per_unit") = 8.0,
      py::arg("palette_seed") = 0, py::arg("style") = "annuli",
      py::arg("annulus_width") = 0.25,
      py::arg("unclaimed_color") = std::vector<int>{0, 0, 0},
      py::arg("marker_px") = 2);

  py::class_<RunResult>(m, "RunResult")
      .def_property_readonly("out_dir",
                             [](const RunResult& r) {
                               return r.out_dir.string();
                             })
      .def_readonly("stable", &RunResult::stable)
      .def_readonly("valid", &RunResult::valid)
      .def_readonly("unstable_pairs", &RunResult::unstable_pairs)
      .def_property_readonly("unclaimed_fraction", [](const RunResult& r) {
        return r.phase.unclaimed_fraction;
      });

  m.def(
      "run",
      [](const std::string& config_json) {
        return run(config_from_json(config_json));
      },
      py::arg("config_json"),
      "Run one experiment from a JSON config string; writes artifacts to its "
      "out directory.");
  m.def("save_allocation", &save_allocation, py::arg("alloc"), py::arg("seed"),
        py::arg("dir"));
  m.def("load_allocation", &load_allocation, py::arg("dir"));

  m.def(
      "oracle_deferred_acceptance",
      [](const std::vector<std::vector<double>>& matrix, int quota,
         const std::string& proposer) {
        if (matrix.empty()) throw InvalidInputError("empty distance matrix");
        int cells = static_cast<int>(matrix.size());
        int centers = static_cast<int>(matrix[0].size());
        std::vector<double> flat;
        for (const auto& row : matrix) {
          flat.insert(flat.end(), row.begin(), row.end());
        }
        oracle::Proposer p;
        if (proposer == "sites") {
          p = oracle::Proposer::sites;
        } else if (proposer == "centers") {
          p = oracle::Proposer::centers;
        } else {
          throw InvalidInputError("proposer must be 'sites' or 'centers'");
        }
        return oracle_deferred_acceptance(
            oracle::TinyInstance(cells, centers, std::move(flat), quota), p);
      },
      py::arg("distances"), py::arg("quota"), py::arg("proposer") = "sites");
  m.def(
      "oracle_enumerate",
      [](const std::vector<std::vector<double>>& matrix, int quota) {
        if (matrix.empty()) throw InvalidInputError("empty distance matrix");
        int cells = static_cast<int>(matrix.size());
        int centers = static_cast<int>(matrix[0].size());
        std::vector<double> flat;
        for (const auto& row : matrix) {
          flat.insert(flat.end(), row.begin(), row.end());
        }
        return oracle_enumerate(
            oracle::TinyInstance(cells, centers, std::move(flat), quota));
      },
      py::arg("distances"), py::arg("quota"));

  m.attr("UNCLAIMED") = kUnclaimed;
  m.attr("__version__") = "0.1.0";
}
