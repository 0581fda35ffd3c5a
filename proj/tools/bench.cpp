#include "bench.hpp"

#include "commands.hpp"
#include "mvgl/dataset.hpp"
#include "mvgl/error.hpp"
#include "mvgl/solver.hpp"
#include "mvgl/synth.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace mvgl::cli {

BenchReport run_scaling_bench(const BenchOptions& opts) {
  if (opts.sizes.empty()) throw InvalidParameter("bench: --sizes is empty");
  if (opts.iters < 1) throw InvalidParameter("bench: --iters must be at least 1");

  BenchReport report;
  for (const Eigen::Index n : opts.sizes) {
    SynthSpec spec;
    spec.n = n;
    spec.k = opts.clusters;
    spec.v = opts.views;
    spec.dims = {opts.dims};
    spec.seed = opts.seed;
    const MultiViewDataset data = generate_synth(spec);

    SolverConfig cfg;
    cfg.anchors = static_cast<double>(opts.anchors);
    cfg.k_clusters = opts.clusters;
    cfg.anchor_strategy = AnchorStrategy::uniform_sample;
    cfg.max_iter = opts.iters;
    cfg.stop_on_convergence = false;
    cfg.seed = opts.seed;

    const auto start = std::chrono::steady_clock::now();
    const SolveResult result = solve(data, cfg);
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double iterations = static_cast<double>(std::max<std::size_t>(result.history.size(), 1));
    report.rows.push_back({n, result.loop_seconds / iterations, total});
  }
  report.slope = loglog_slope(report.rows);
  return report;
}

std::optional<double> loglog_slope(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (const BenchRow& r : rows) {
    mx += std::log(static_cast<double>(r.n));
    my += std::log(r.per_iter_seconds);
  }
  mx /= static_cast<double>(rows.size());
  my /= static_cast<double>(rows.size());
  double sxy = 0.0, sxx = 0.0;
  for (const BenchRow& r : rows) {
    const double dx = std::log(static_cast<double>(r.n)) - mx;
    sxy += dx * (std::log(r.per_iter_seconds) - my);
    sxx += dx * dx;
  }
  if (sxx <= 0.0) return std::nullopt;
  return sxy / sxx;
}

int run_bench(const BenchOptions& opts) {
  const BenchReport report = run_scaling_bench(opts);
  std::filesystem::create_directories(opts.out_dir);
  std::string csv = "n,per_iter_seconds,total_seconds\n";
  for (const BenchRow& r : report.rows) {
    csv += std::to_string(r.n) + ',' + format_double(r.per_iter_seconds) + ',' +
           format_double(r.total_seconds) + '\n';
    std::cout << "n=" << r.n << " per_iter=" << r.per_iter_seconds << "s total=" << r.total_seconds
              << "s\n";
  }
  write_file_atomic(opts.out_dir / "bench.csv", csv);
  if (report.slope) {
    std::cout << "log-log slope: " << *report.slope << '\n';
  } else {
    std::cout << "log-log slope: n/a (need at least two sizes)\n";
  }
  return kExitOk;
}

}  // namespace mvgl::cli
