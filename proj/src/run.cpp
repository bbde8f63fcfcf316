#include <fstream>

#include "stable_alloc/errors.hpp"
#include "stable_alloc/io.hpp"

namespace stalloc {

namespace {

CenterSet make_centers(const ExperimentConfig& cfg, const Region& region) {
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
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  const Region region = cfg.region();
  const Grid grid(region, cfg.resolution);
  const CenterSet centers = make_centers(cfg, region);
  Allocation alloc = allocate(grid, centers, cfg.alpha, cfg.algo);

  const std::vector<UnstablePair> pairs = verify_stability(alloc);
  const ValidationReport validation = validate(alloc);

  RunResult result;
  result.out_dir = cfg.out_dir;
  result.stable = pairs.empty();
  result.valid = validation.ok;
  result.unstable_pairs = static_cast<std::int64_t>(pairs.size());
  result.phase = phase_stats(alloc);

  std::filesystem::create_directories(result.out_dir);
  save_allocation(alloc, cfg.seed, result.out_dir);
  write_text(result.out_dir / "stats.json",
             stats_json(alloc, result.stable, result.unstable_pairs,
                        result.valid));
  write_text(result.out_dir / "verify.json",
             stability_report_json(alloc, pairs, validation));
  if (cfg.render) {
    std::vector<std::uint8_t> img = render_ppm(alloc, *cfg.render);
    std::ofstream out(result.out_dir / "render.ppm", std::ios::binary);
    if (!out) {
      throw IoError("cannot open for writing: " +
                    (result.out_dir / "render.ppm").string());
    }
    out.write(reinterpret_cast<const char*>(img.data()),
              static_cast<std::streamsize>(img.size()));
    if (!out) throw IoError("write failed: render.ppm");
  }
  return result;
}

}  // namespace stalloc
