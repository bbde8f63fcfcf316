#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "stable_alloc/errors.hpp"
#include "stable_alloc/io.hpp"

namespace stalloc {

namespace {

int sweep_threads(int requested, std::size_t tasks) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("STABLE_ALLOC_THREADS")) {
    int c = std::atoi(cap);
    if (c >= 1) n = std::min(n, c);
  }
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n),
                                                std::max<std::size_t>(tasks, 1)));
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string join_dims(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += 'x';
    s += fmt(v[i]);
  }
  return s;
}

std::string join_dims(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
  if (cfg.sides_list.empty() || cfg.alphas.empty() || cfg.seeds.empty()) {
    throw InvalidInputError("sweep needs nonempty sides, alphas and seeds");
  }
  if (cfg.source.kind == SourceSpec::Kind::file) {
    throw InvalidInputError("sweep sources must be generated (poisson|lattice)");
  }

  struct Task {
    std::size_t sides_i, alpha_i, seed_i;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < cfg.sides_list.size(); ++s) {
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
      for (std::size_t d = 0; d < cfg.seeds.size(); ++d) {
        tasks.push_back({s, a, d});
      }
    }
  }
  std::vector<SweepRow> runs(tasks.size());

  auto execute = [&](const Task& t, SweepRow& row) {
    row.sides = cfg.sides_list[t.sides_i];
    row.alpha = cfg.alphas[t.alpha_i];
    row.seed = cfg.seeds[t.seed_i];
    try {
      Region region(cfg.region_kind, row.sides);
      std::vector<int> res = cfg.resolution;
      if (res.empty()) {
        for (double side : row.sides) {
          res.push_back(static_cast<int>(
              std::llround(side * static_cast<double>(cfg.res_per_unit))));
        }
      }
      row.resolution = res;
      Grid grid(region, res);
      CenterSet centers =
          cfg.source.kind == SourceSpec::Kind::poisson
              ? sample_poisson(cfg.source.lambda, region, row.seed)
              : sample_lattice(region, cfg.source.spacing, cfg.source.jitter,
                               row.seed);
      Allocation alloc = allocate(grid, centers, row.alpha, cfg.algo);
      row.stable = verify_stability(alloc).empty() && validate(alloc).ok;
      PhaseStats ps = phase_stats(alloc);
      row.lambda_hat = ps.lambda_hat;
      row.n_centers = centers.size();
      row.unclaimed_fraction = ps.unclaimed_fraction;
      row.mean_residual = ps.mean_residual_appetite.value_or(0.0);
      row.mean_x = mean_distance_power(alloc, 1.0).value_or(0.0);
      row.mean_xp = mean_distance_power(alloc, cfg.tail_exponent).value_or(0.0);
      double max_x = 0.0;
      for (std::int64_t x = 0; x < alloc.cell_count(); ++x) {
        double d2 = alloc.assigned_dist2(x);
        if (!std::isinf(d2)) max_x = std::max(max_x, std::sqrt(d2));
      }
      row.max_x = max_x;
      if (centers.size() > 0) {
        Point mid;
        mid.dim = region.dim();
        for (int i = 0; i < region.dim(); ++i) mid[i] = 0.5 * region.side(i);
        DemandReport dr = demand_diagnostics(alloc, mid);
        row.desire_volume_mid = dr.desire_volume;
        row.covet_count_mid = dr.covet_count;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const int nthreads = sweep_threads(cfg.threads, tasks.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) execute(tasks[i], runs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          execute(tasks[i], runs[i]);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  // interleave summary rows after each (sides, alpha) group
  std::vector<SweepRow> out;
  out.reserve(runs.size() + cfg.sides_list.size() * cfg.alphas.size());
  std::size_t i = 0;
  for (std::size_t s = 0; s < cfg.sides_list.size(); ++s) {
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
      SweepRow sum;
      sum.summary = true;
      sum.sides = cfg.sides_list[s];
      sum.alpha = cfg.alphas[a];
      sum.stable = true;
      double u = 0, r = 0, mx = 0, mp = 0, lh = 0;
      std::vector<double> us, rs, xs, ps;
      for (std::size_t d = 0; d < cfg.seeds.size(); ++d, ++i) {
        out.push_back(runs[i]);
        const SweepRow& row = runs[i];
        if (!row.error.empty()) continue;
        sum.resolution = row.resolution;
        sum.stable = sum.stable && row.stable;
        us.push_back(row.unclaimed_fraction);
        rs.push_back(row.mean_residual);
        xs.push_back(row.mean_x);
        ps.push_back(row.mean_xp);
        u += row.unclaimed_fraction;
        r += row.mean_residual;
        mx += row.mean_x;
        mp += row.mean_xp;
        lh += row.lambda_hat;
        sum.n_centers += row.n_centers;
      }
      sum.seeds_ok = static_cast<int>(us.size());
      if (sum.seeds_ok > 0) {
        auto k = static_cast<double>(sum.seeds_ok);
        sum.unclaimed_fraction = u / k;
        sum.mean_residual = r / k;
        sum.mean_x = mx / k;
        sum.mean_xp = mp / k;
        sum.lambda_hat = lh / k;
        auto sem = [&](const std::vector<double>& v, double mean) {
          if (v.size() < 2) return 0.0;
          double var = 0.0;
          for (double x : v) var += (x - mean) * (x - mean);
          var /= static_cast<double>(v.size() - 1);
          return std::sqrt(var / static_cast<double>(v.size()));
        };
        sum.se_unclaimed = sem(us, sum.unclaimed_fraction);
        sum.se_residual = sem(rs, sum.mean_residual);
        sum.se_mean_x = sem(xs, sum.mean_x);
        sum.se_mean_xp = sem(ps, sum.mean_xp);
      }
      out.push_back(std::move(sum));
    }
  }
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, double tail_exponent,
                     const std::filesystem::path& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw IoError("cannot open for writing: " + path.string());
  outf << "kind,sides,resolution,alpha,seed,seeds_ok,n_centers,lambda_hat,"
          "unclaimed_fraction,mean_residual,mean_x,mean_xp,tail_p,max_x,"
          "desire_volume_mid,covet_count_mid,stable,"
          "se_unclaimed,se_residual,se_mean_x,se_mean_xp,error\n";
  for (const SweepRow& r : rows) {
    outf << (r.summary ? "summary" : "run") << ',' << join_dims(r.sides) << ','
         << join_dims(r.resolution) << ',' << fmt(r.alpha) << ',';
    if (!r.summary) outf << r.seed;
    outf << ',';
    if (r.summary) outf << r.seeds_ok;
    outf << ',' << r.n_centers << ',' << fmt(r.lambda_hat) << ','
         << fmt(r.unclaimed_fraction) << ',' << fmt(r.mean_residual) << ','
         << fmt(r.mean_x) << ',' << fmt(r.mean_xp) << ',' << fmt(tail_exponent)
         << ',' << fmt(r.max_x) << ',' << fmt(r.desire_volume_mid) << ','
         << r.covet_count_mid << ',' << (r.stable ? 1 : 0) << ',';
    if (r.summary) {
      outf << fmt(r.se_unclaimed) << ',' << fmt(r.se_residual) << ','
           << fmt(r.se_mean_x) << ',' << fmt(r.se_mean_xp);
    } else {
      outf << ",,,";
    }
    outf << ',' << r.error << '\n';
  }
  if (!outf) throw IoError("write failed: " + path.string());
}

}  // namespace stalloc
