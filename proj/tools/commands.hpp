#pragma once

#include "mvgl/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mvgl::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadFlags = 2;
inline constexpr int kExitLoadError = 3;
inline constexpr int kExitDegenerate = 4;

struct ClusterOptions {
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::string> synth_spec;
  SolverConfig solver;
  std::filesystem::path out_dir = "out";
  /// "p=0.1:1.0:0.1", "anchors=0.1:1.0:0.2" or "lambda=a:b:step".
  std::optional<std::string> sweep;
};

struct SweepGrid {
  std::string param;
  std::vector<double> values;
};

/// Parses NAME=START:END:STEP (END inclusive). Throws InvalidParameter.
SweepGrid parse_sweep(const std::string& text);

/// Fails with InvalidParameter before any work is done.
void validate(const ClusterOptions& opts);

int run_cluster(const ClusterOptions& opts);

struct SynthOptions {
  std::string spec;
  std::filesystem::path out_dir;
};

int run_synth(const SynthOptions& opts);

struct MetricsOptions {
  std::filesystem::path pred;
  std::filesystem::path truth;
  std::optional<std::filesystem::path> out;
};

int run_metrics(const MetricsOptions& opts);

/// Dispatches the `mvgl` subcommands; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace mvgl::cli
