// stable-alloc: stable allocations of a discretized region to point centers.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure,
// 3 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stable_alloc/analysis.hpp"
#include "stable_alloc/errors.hpp"
#include "stable_alloc/io.hpp"
#include "stable_alloc/oracle.hpp"

namespace {

using namespace stalloc;

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw InvalidInputError(std::string("bad ") + what + ": " + item);
    }
  }
  if (out.empty()) throw InvalidInputError(std::string("empty ") + what);
  return out;
}

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_doubles(text, what)) out.push_back(static_cast<int>(v));
  return out;
}

double parse_alpha(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    return std::stod(text);
  } catch (...) {
    throw InvalidInputError("bad alpha: " + text);
  }
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        std::uint64_t a = std::stoull(item.substr(0, colon));
        std::uint64_t b = std::stoull(item.substr(colon + 1));
        if (b < a) throw InvalidInputError("bad seed range: " + item);
        for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
      }
    } catch (const InvalidInputError&) {
      throw;
    } catch (...) {
      throw InvalidInputError("bad seed: " + item);
    }
  }
  if (out.empty()) throw InvalidInputError("empty seed list");
  return out;
}

// Flags shared by generate/allocate; applied on top of --config (flags win).
struct CommonFlags {
  std::string config_path;
  std::string region;
  std::string sides;
  std::string resolution;
  std::optional<double> lambda;
  std::string lattice;  // "spacing[,jitter]"
  std::string centers_path;
  std::string alpha;
  std::string algo;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string render;  // "ppm[:px-per-unit]"

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--region", region, "torus|box (default torus)");
    cmd->add_option("--sides", sides, "side lengths, e.g. 32,32");
    cmd->add_option("--resolution", resolution, "cells per side, e.g. 512,512");
    cmd->add_option("--lambda", lambda, "Poisson intensity source");
    cmd->add_option("--lattice", lattice, "lattice source: spacing[,jitter]");
    cmd->add_option("--centers", centers_path, "centers CSV source");
    cmd->add_option("--alpha", alpha, "appetite (number or 'inf')");
    cmd->add_option("--algo", algo, "site|center|greedy");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--render", render, "render image: ppm[:px-per-unit]");
  }

  ExperimentConfig build() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!region.empty()) {
      if (region == "torus") {
        cfg.region_kind = RegionKind::torus;
      } else if (region == "box") {
        cfg.region_kind = RegionKind::box;
      } else {
        throw InvalidInputError("--region must be torus|box");
      }
    }
    if (!sides.empty()) cfg.sides = parse_doubles(sides, "--sides");
    if (!resolution.empty()) cfg.resolution = parse_ints(resolution, "--resolution");
    int sources = (lambda ? 1 : 0) + (lattice.empty() ? 0 : 1) +
                  (centers_path.empty() ? 0 : 1);
    if (sources > 1) {
      throw InvalidInputError("give at most one of --lambda, --lattice, --centers");
    }
    if (lambda) {
      cfg.source.kind = SourceSpec::Kind::poisson;
      cfg.source.lambda = *lambda;
    } else if (!lattice.empty()) {
      auto vals = parse_doubles(lattice, "--lattice");
      if (vals.size() > 2) throw InvalidInputError("--lattice takes spacing[,jitter]");
      cfg.source.kind = SourceSpec::Kind::lattice;
      cfg.source.spacing = vals[0];
      cfg.source.jitter = vals.size() > 1 ? vals[1] : 0.0;
    } else if (!centers_path.empty()) {
      cfg.source.kind = SourceSpec::Kind::file;
      cfg.source.path = centers_path;
    }
    if (!alpha.empty()) cfg.alpha = parse_alpha(alpha);
    if (!algo.empty()) cfg.algo = algo_from_name(algo);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!render.empty()) {
      if (render.rfind("ppm", 0) != 0) {
        throw InvalidInputError("--render must be ppm[:px-per-unit]");
      }
      RenderSpec rs = cfg.render.value_or(RenderSpec{});
      if (render.size() > 3) {
        if (render[3] != ':') throw InvalidInputError("--render must be ppm[:px-per-unit]");
        rs.pixels_per_unit = std::stod(render.substr(4));
      }
      cfg.render = rs;
    }
    return cfg;
  }
};

int cmd_generate(const CommonFlags& flags) {
  ExperimentConfig cfg = flags.build();
  Region region = cfg.region();
  CenterSet cs = [&] {
    switch (cfg.source.kind) {
      case SourceSpec::Kind::poisson:
        return sample_poisson(cfg.source.lambda, region, cfg.seed);
      case SourceSpec::Kind::lattice:
        return sample_lattice(region, cfg.source.spacing, cfg.source.jitter,
                              cfg.seed);
      case SourceSpec::Kind::file:
        return load_centers(cfg.source.path, region);
    }
    throw InvalidInputError("unknown source kind");
  }();
  std::filesystem::create_directories(cfg.out_dir);
  save_centers(cs, std::filesystem::path(cfg.out_dir) / "centers.csv");
  std::cout << "wrote " << cs.size() << " centers to " << cfg.out_dir
            << "/centers.csv\n";
  return 0;
}

int cmd_allocate(const CommonFlags& flags) {
  ExperimentConfig cfg = flags.build();
  RunResult res = run(cfg);
  std::cout << "out: " << res.out_dir.string()
            << "  unclaimed_fraction: " << res.phase.unclaimed_fraction
            << "  stable: " << (res.stable ? "yes" : "no") << "\n";
  return res.stable && res.valid ? 0 : 2;
}

int cmd_verify(const std::string& in_dir) {
  Allocation alloc = load_allocation(in_dir);
  auto pairs = verify_stability(alloc);
  auto validation = validate(alloc);
  std::cout << stability_report_json(alloc, pairs, validation);
  return pairs.empty() && validation.ok ? 0 : 2;
}

int cmd_stats(const std::string& in_dir) {
  Allocation alloc = load_allocation(in_dir);
  auto pairs = verify_stability(alloc);
  auto validation = validate(alloc);
  std::cout << stats_json(alloc, pairs.empty(),
                          static_cast<std::int64_t>(pairs.size()),
                          validation.ok);
  return 0;
}

int cmd_render(const std::string& in_dir, const std::string& out_file,
               const RenderSpec& spec) {
  Allocation alloc = load_allocation(in_dir);
  auto img = render_ppm(alloc, spec);
  std::ofstream out(out_file, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + out_file);
  out.write(reinterpret_cast<const char*>(img.data()),
            static_cast<std::streamsize>(img.size()));
  if (!out) throw IoError("write failed: " + out_file);
  std::cout << "wrote " << out_file << "\n";
  return 0;
}

int cmd_oracle(const std::string& instance_path, const std::string& mode) {
  std::ifstream in(instance_path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + instance_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInputError(std::string("instance JSON: ") + e.what());
  }
  auto matrix = j.at("distances").get<std::vector<std::vector<double>>>();
  if (matrix.empty()) throw InvalidInputError("empty distance matrix");
  int cells = static_cast<int>(matrix.size());
  int centers = static_cast<int>(matrix[0].size());
  std::vector<double> flat;
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != centers) {
      throw InvalidInputError("ragged distance matrix");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  std::vector<int> quotas;
  if (j.at("quota").is_array()) {
    quotas = j.at("quota").get<std::vector<int>>();
  } else {
    quotas.assign(static_cast<std::size_t>(centers), j.at("quota").get<int>());
  }
  oracle::TinyInstance inst(cells, centers, std::move(flat), std::move(quotas));

  nlohmann::json out;
  if (mode == "sites" || mode == "centers") {
    out["assignment"] = oracle_deferred_acceptance(
        inst, mode == "sites" ? oracle::Proposer::sites
                              : oracle::Proposer::centers);
  } else if (mode == "enumerate") {
    out["stable_assignments"] = oracle_enumerate(inst);
    out["tie_free"] = oracle::tie_free(inst);
  } else {
    throw InvalidInputError("--mode must be sites|centers|enumerate");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable allocations of discretized Lebesgue measure to point centers"};
  app.require_subcommand(1);

  CommonFlags gen_flags, alloc_flags;
  auto* generate = app.add_subcommand("generate", "sample or convert a center set");
  gen_flags.add_to(generate);
  auto* allocate_cmd = app.add_subcommand(
      "allocate", "run one experiment: centers, grid, allocation, verification");
  alloc_flags.add_to(allocate_cmd);

  std::string verify_in, stats_in, render_in;
  auto* verify_cmd = app.add_subcommand("verify", "check a stored allocation");
  verify_cmd->add_option("--in", verify_in, "run directory")->required();
  auto* stats_cmd = app.add_subcommand("stats", "phase/geometry statistics");
  stats_cmd->add_option("--in", stats_in, "run directory")->required();

  auto* render_cmd = app.add_subcommand("render", "render a stored allocation");
  std::string render_out = "render.ppm";
  RenderSpec render_spec;
  std::string render_style = "annuli";
  render_cmd->add_option("--in", render_in, "run directory")->required();
  render_cmd->add_option("--out", render_out, "output PPM path");
  render_cmd->add_option("--px-per-unit", render_spec.pixels_per_unit,
                         "pixels per unit length");
  render_cmd->add_option("--palette-seed", render_spec.palette_seed,
                         "palette seed");
  render_cmd->add_option("--style", render_style, "flat|annuli");
  render_cmd->add_option("--annulus-width", render_spec.annulus_width,
                         "annulus width (length units)");
  render_cmd->add_option("--marker-px", render_spec.marker_px,
                         "center marker size in pixels");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid");
  std::string sw_region = "torus", sw_sides_list, sw_alphas, sw_seeds;
  std::string sw_algo = "greedy", sw_out = "sweep.csv", sw_lattice;
  std::optional<double> sw_lambda;
  std::string sw_resolution;
  int sw_res_per_unit = 8, sw_threads = 0;
  double sw_tail_p = 1.0;
  sweep_cmd->add_option("--region", sw_region, "torus|box");
  sweep_cmd->add_option("--sides-list", sw_sides_list,
                        "semicolon-separated sides, e.g. 8,8;16,16")->required();
  sweep_cmd->add_option("--alphas", sw_alphas, "comma list, entries may be inf")
      ->required();
  sweep_cmd->add_option("--seeds", sw_seeds, "comma list and/or a:b ranges")
      ->required();
  sweep_cmd->add_option("--lambda", sw_lambda, "Poisson intensity");
  sweep_cmd->add_option("--lattice", sw_lattice, "lattice source: spacing[,jitter]");
  sweep_cmd->add_option("--res-per-unit", sw_res_per_unit,
                        "cells per unit length (when --resolution unset)");
  sweep_cmd->add_option("--resolution", sw_resolution, "fixed resolution");
  sweep_cmd->add_option("--algo", sw_algo, "site|center|greedy");
  sweep_cmd->add_option("--tail-p", sw_tail_p, "exponent for the mean_xp column");
  sweep_cmd->add_option("--threads", sw_threads, "worker threads (0 = auto)");
  sweep_cmd->add_option("--out", sw_out, "output CSV path");

  std::string oracle_instance, oracle_mode = "enumerate";
  auto* oracle_cmd = app.add_subcommand("oracle", "tiny-instance reference solver");
  oracle_cmd->group("");  // hidden
  oracle_cmd->add_option("--instance", oracle_instance, "instance JSON")->required();
  oracle_cmd->add_option("--mode", oracle_mode, "sites|centers|enumerate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen_flags);
    if (allocate_cmd->parsed()) return cmd_allocate(alloc_flags);
    if (verify_cmd->parsed()) return cmd_verify(verify_in);
    if (stats_cmd->parsed()) return cmd_stats(stats_in);
    if (render_cmd->parsed()) {
      if (render_style == "flat") {
        render_spec.style = RenderSpec::Style::flat;
      } else if (render_style == "annuli") {
        render_spec.style = RenderSpec::Style::annuli;
      } else {
        throw InvalidInputError("--style must be flat|annuli");
      }
      return cmd_render(render_in, render_out, render_spec);
    }
    if (sweep_cmd->parsed()) {
      SweepConfig cfg;
      if (sw_region == "torus") {
        cfg.region_kind = RegionKind::torus;
      } else if (sw_region == "box") {
        cfg.region_kind = RegionKind::box;
      } else {
        throw InvalidInputError("--region must be torus|box");
      }
      std::stringstream ss(sw_sides_list);
      std::string group;
      while (std::getline(ss, group, ';')) {
        cfg.sides_list.push_back(parse_doubles(group, "--sides-list"));
      }
      for (const std::string& a : [&] {
             std::vector<std::string> parts;
             std::stringstream as(sw_alphas);
             std::string item;
             while (std::getline(as, item, ',')) parts.push_back(item);
             return parts;
           }()) {
        cfg.alphas.push_back(parse_alpha(a));
      }
      cfg.seeds = parse_seeds(sw_seeds);
      if (sw_lambda && !sw_lattice.empty()) {
        throw InvalidInputError("give one of --lambda, --lattice");
      }
      if (!sw_lattice.empty()) {
        auto vals = parse_doubles(sw_lattice, "--lattice");
        cfg.source.kind = SourceSpec::Kind::lattice;
        cfg.source.spacing = vals[0];
        cfg.source.jitter = vals.size() > 1 ? vals[1] : 0.0;
      } else {
        cfg.source.kind = SourceSpec::Kind::poisson;
        cfg.source.lambda = sw_lambda.value_or(1.0);
      }
      if (!sw_resolution.empty()) {
        cfg.resolution = parse_ints(sw_resolution, "--resolution");
      }
      cfg.res_per_unit = sw_res_per_unit;
      cfg.algo = algo_from_name(sw_algo);
      cfg.tail_exponent = sw_tail_p;
      cfg.threads = sw_threads;
      auto rows = sweep(cfg);
      write_sweep_csv(rows, cfg.tail_exponent, sw_out);
      std::cout << "wrote " << rows.size() << " rows to " << sw_out << "\n";
      return 0;
    }
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_instance, oracle_mode);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
