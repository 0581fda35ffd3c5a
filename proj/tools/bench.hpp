#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace mvgl::cli {

struct BenchOptions {
  std::vector<Eigen::Index> sizes{1000, 2000, 4000, 8000};
  Eigen::Index anchors = 100;
  Eigen::Index views = 3;
  Eigen::Index dims = 20;
  Eigen::Index clusters = 5;
  int iters = 10;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
};

struct BenchRow {
  Eigen::Index n = 0;
  double per_iter_seconds = 0.0;
  double total_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// Least-squares slope of log(per-iteration time) against log(n); empty
  /// with fewer than two distinct sizes.
  std::optional<double> slope;
};

/// Times a fixed number of solver iterations per size on synthetic blobs,
/// with uniformly sampled anchors so anchor selection stays out of the loop.
BenchReport run_scaling_bench(const BenchOptions& opts);

std::optional<double> loglog_slope(const std::vector<BenchRow>& rows);

/// Writes bench.csv into opts.out_dir and prints the slope; exit code.
int run_bench(const BenchOptions& opts);

}  // namespace mvgl::cli
