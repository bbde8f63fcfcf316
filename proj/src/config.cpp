#include <fstream>
#include <json.hpp>

#include "stable_alloc/errors.hpp"
#include "stable_alloc/io.hpp"

namespace stalloc {

using nlohmann::json;

namespace {

json alpha_to_json(double alpha) {
  if (std::isinf(alpha)) return json("inf");
  return json(alpha);
}

double alpha_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    throw InvalidInputError("alpha must be a number or \"inf\"");
  }
  double a = j.get<double>();
  if (std::isnan(a) || a < 0.0) {
    throw InvalidInputError("alpha must be >= 0");
  }
  return a;
}

json source_to_json(const SourceSpec& s) {
  switch (s.kind) {
    case SourceSpec::Kind::poisson:
      return json{{"type", "poisson"}, {"lambda", s.lambda}};
    case SourceSpec::Kind::lattice:
      return json{{"type", "lattice"}, {"spacing", s.spacing},
                  {"jitter", s.jitter}};
    case SourceSpec::Kind::file:
      return json{{"type", "file"}, {"path", s.path}};
  }
  throw InvalidInputError("unknown source kind");
}

SourceSpec source_from_json(const json& j) {
  SourceSpec s;
  std::string type = j.at("type").get<std::string>();
  if (type == "poisson") {
    s.kind = SourceSpec::Kind::poisson;
    s.lambda = j.at("lambda").get<double>();
  } else if (type == "lattice") {
    s.kind = SourceSpec::Kind::lattice;
    s.spacing = j.at("spacing").get<double>();
    s.jitter = j.value("jitter", 0.0);
  } else if (type == "file") {
    s.kind = SourceSpec::Kind::file;
    s.path = j.at("path").get<std::string>();
  } else {
    throw InvalidInputError("source type must be poisson|lattice|file");
  }
  return s;
}

json render_to_json(const RenderSpec& r) {
  return json{{"pixels_per_unit", r.pixels_per_unit},
              {"palette_seed", r.palette_seed},
              {"style", r.style == RenderSpec::Style::flat ? "flat" : "annuli"},
              {"annulus_width", r.annulus_width},
              {"unclaimed_color",
               {r.unclaimed_color[0], r.unclaimed_color[1], r.unclaimed_color[2]}},
              {"marker_px", r.marker_px}};
}

RenderSpec render_from_json(const json& j) {
  RenderSpec r;
  r.pixels_per_unit = j.value("pixels_per_unit", r.pixels_per_unit);
  r.palette_seed = j.value("palette_seed", r.palette_seed);
  std::string style = j.value("style", std::string("annuli"));
  if (style == "flat") {
    r.style = RenderSpec::Style::flat;
  } else if (style == "annuli") {
    r.style = RenderSpec::Style::annuli;
  } else {
    throw InvalidInputError("render style must be flat|annuli");
  }
  r.annulus_width = j.value("annulus_width", r.annulus_width);
  if (j.contains("unclaimed_color")) {
    auto v = j.at("unclaimed_color").get<std::vector<int>>();
    if (v.size() != 3) throw InvalidInputError("unclaimed_color needs 3 values");
    for (int i = 0; i < 3; ++i) {
      r.unclaimed_color[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(v[static_cast<std::size_t>(i)]);
    }
  }
  r.marker_px = j.value("marker_px", r.marker_px);
  return r;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  json j{{"region",
          {{"kind", cfg.region_kind == RegionKind::torus ? "torus" : "box"},
           {"sides", cfg.sides}}},
         {"resolution", cfg.resolution},
         {"source", source_to_json(cfg.source)},
         {"alpha", alpha_to_json(cfg.alpha)},
         {"algo", algo_name(cfg.algo)},
         {"seed", cfg.seed},
         {"out", cfg.out_dir}};
  if (cfg.render) j["render"] = render_to_json(*cfg.render);
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInputError(std::string("config JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    const json& region = j.at("region");
    std::string kind = region.at("kind").get<std::string>();
    if (kind == "torus") {
      cfg.region_kind = RegionKind::torus;
    } else if (kind == "box") {
      cfg.region_kind = RegionKind::box;
    } else {
      throw InvalidInputError("region kind must be torus|box");
    }
    cfg.sides = region.at("sides").get<std::vector<double>>();
    cfg.resolution = j.at("resolution").get<std::vector<int>>();
    cfg.source = source_from_json(j.at("source"));
    cfg.alpha = alpha_from_json(j.at("alpha"));
    cfg.algo = algo_from_name(j.value("algo", std::string("greedy")));
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.out_dir = j.value("out", std::string("out"));
    if (j.contains("render")) cfg.render = render_from_json(j.at("render"));
    return cfg;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("config JSON: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return config_from_json(text);
}

void save_config(const ExperimentConfig& cfg,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << config_to_json(cfg);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace stalloc
