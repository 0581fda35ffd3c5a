#include "commands.hpp"

#include "bench.hpp"
#include "mvgl/dataset.hpp"
#include "mvgl/error.hpp"
#include "mvgl/metrics.hpp"
#include "mvgl/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>

namespace mvgl::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// FNV-1a over view shapes, raw feature bytes and labels.
std::string fingerprint(const MultiViewDataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const Eigen::MatrixXd& x : data.views) {
    const std::int64_t shape[2] = {x.rows(), x.cols()};
    mix(shape, sizeof(shape));
    mix(x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
  }
  if (data.labels) mix(data.labels->data(), sizeof(int) * data.labels->size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json metrics_json(const MetricsReport& m) {
  json j;
  j["acc"] = m.acc;
  j["nmi"] = m.nmi;
  j["purity"] = m.purity;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f_score"] = m.f_score;
  j["ari"] = m.ari;
  return j;
}

void echo_config(json& j, const SolverConfig& c) {
  j["config.anchors"] = c.anchors;
  j["config.clusters"] = c.k_clusters;
  j["config.lambda"] = c.lambda;
  j["config.p"] = c.p;
  j["config.knn"] = c.knn;
  j["config.max_iter"] = c.max_iter;
  j["config.mu0"] = c.mu0;
  j["config.mu_max"] = c.mu_max;
  j["config.eta"] = c.eta;
  j["config.beta0"] = c.beta0;
  j["config.tol_residual"] = c.tol_residual;
  j["config.tol_unit_sv"] = c.tol_unit_sv;
  j["config.eps_edge"] = c.eps_edge;
  j["config.anchor_strategy"] = std::string(to_string(c.anchor_strategy));
}

std::string dims_text(const MultiViewDataset& data) {
  std::string s;
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    if (v) s += ':';
    s += std::to_string(data.views[v].cols());
  }
  return s;
}

std::string history_csv(const std::vector<IterationRecord>& history) {
  std::string csv = "iter,objective,residual,zero_eigs,beta,mu\n";
  for (const IterationRecord& r : history) {
    csv += std::to_string(r.iter) + ',' + format_double(r.objective) + ',' +
           format_double(r.residual) + ',' + std::to_string(r.zero_eigs) + ',' +
           format_double(r.beta) + ',' + format_double(r.mu) + '\n';
  }
  return csv;
}

std::string graph_csv(const Eigen::MatrixXd& g, double eps) {
  std::string csv = "i,j,weight\n";
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (g(i, j) > eps) {
        csv += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(g(i, j)) + '\n';
      }
    }
  }
  return csv;
}

std::string labels_csv(const std::vector<int>& labels) {
  std::string csv;
  for (const int l : labels) csv += std::to_string(l) + '\n';
  return csv;
}

MultiViewDataset load_input(const ClusterOptions& opts) {
  if (opts.data_dir) return load_dataset(*opts.data_dir);
  SynthSpec spec = parse_synth_spec(*opts.synth_spec);
  if (opts.synth_spec->find("seed=") == std::string::npos) spec.seed = opts.solver.seed;
  return generate_synth(spec);
}

SolverConfig with_param(SolverConfig cfg, const std::string& param, double value) {
  if (param == "p") {
    cfg.p = value;
  } else if (param == "anchors") {
    cfg.anchors = value;
  } else {
    cfg.lambda = value;
  }
  return cfg;
}

int run_sweep(const ClusterOptions& opts, const MultiViewDataset& data, json manifest) {
  const SweepGrid grid = parse_sweep(*opts.sweep);
  std::string csv =
      "param,value,acc,nmi,purity,precision,recall,f_score,ari,exact_k,components,iterations,"
      "seconds\n";
  for (const double value : grid.values) {
    const SolverConfig cfg = with_param(opts.solver, grid.param, value);
    const auto start = std::chrono::steady_clock::now();
    const SolveResult result = solve(data, cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    csv += grid.param + ',' + format_double(value);
    if (data.labels) {
      const MetricsReport m = evaluate(result.labels, *data.labels);
      for (const double x : {m.acc, m.nmi, m.purity, m.precision, m.recall, m.f_score, m.ari}) {
        csv += ',' + format_double(x);
      }
    } else {
      csv += ",,,,,,,";
    }
    csv += ',' + std::to_string(result.exact_k ? 1 : 0) + ',' + std::to_string(result.components) +
           ',' + std::to_string(result.history.size()) + ',' + format_double(seconds) + '\n';
    std::cerr << grid.param << '=' << value << " components=" << result.components
              << (result.exact_k ? "" : " (inexact)") << '\n';
  }
  write_file_atomic(opts.out_dir / "sweep.csv", csv);
  manifest["sweep"] = *opts.sweep;
  write_file_atomic(opts.out_dir / "manifest.json", manifest.dump() + '\n');
  return kExitOk;
}

}  // namespace

SweepGrid parse_sweep(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos) {
    throw InvalidParameter("--sweep expects NAME=START:END:STEP, got '" + text + "'");
  }
  SweepGrid grid;
  grid.param = text.substr(0, eq);
  if (grid.param != "p" && grid.param != "anchors" && grid.param != "lambda") {
    throw InvalidParameter("--sweep parameter must be p, anchors or lambda, got '" + grid.param + "'");
  }
  double parts[3];
  std::string rest = text.substr(eq + 1);
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = rest.find(':');
    if ((i < 2) == (colon == std::string::npos)) {
      throw InvalidParameter("--sweep range must be START:END:STEP, got '" + text + "'");
    }
    const std::string cell = rest.substr(0, colon);
    char* end = nullptr;
    parts[i] = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') {
      throw InvalidParameter("--sweep: '" + cell + "' is not a number");
    }
    rest = colon == std::string::npos ? "" : rest.substr(colon + 1);
  }
  const auto [lo, hi, step] = parts;
  if (!(step > 0.0) || hi < lo) throw InvalidParameter("--sweep needs START <= END and STEP > 0");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) {
    // Round away the accumulated binary error (0.30000000000000004 -> 0.3).
    grid.values.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return grid;
}

void validate(const ClusterOptions& opts) {
  if (opts.data_dir.has_value() == opts.synth_spec.has_value()) {
    throw InvalidParameter("exactly one of --data or --synth is required");
  }
  opts.solver.validate();
  if (opts.solver.k_clusters < 2) throw InvalidParameter("--clusters must be at least 2");
  if (opts.sweep) {
    const SweepGrid grid = parse_sweep(*opts.sweep);
    for (const double v : grid.values) with_param(opts.solver, grid.param, v).validate();
  }
  if (opts.synth_spec) parse_synth_spec(*opts.synth_spec);
}

int run_cluster(const ClusterOptions& opts) {
  try {
    validate(opts);
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  }

  MultiViewDataset data;
  try {
    data = load_input(opts);
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLoadError;
  }

  fs::create_directories(opts.out_dir);
  json manifest;
  manifest["tool"] = "mvgl";
  manifest["version"] = kVersion;
  manifest["command"] = "cluster";
  manifest["seed"] = opts.solver.seed;
  echo_config(manifest, opts.solver);
  manifest["dataset.source"] =
      opts.data_dir ? opts.data_dir->string() : "synth:" + *opts.synth_spec;
  manifest["dataset.samples"] = data.samples();
  manifest["dataset.views"] = data.view_count();
  manifest["dataset.dims"] = dims_text(data);
  manifest["dataset.hash"] = fingerprint(data);

  try {
    if (opts.sweep) return run_sweep(opts, data, std::move(manifest));

    const auto start = std::chrono::steady_clock::now();
    const SolveResult result = solve(data, opts.solver);
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    manifest["status"] = std::string(to_string(result.status));
    manifest["anchors"] = result.anchors;
    manifest["exact_k"] = result.exact_k;
    manifest["components"] = result.components;
    manifest["iterations"] = result.history.size();
    manifest["seconds.setup"] = result.setup_seconds;
    manifest["seconds.loop"] = result.loop_seconds;
    manifest["seconds.total"] = total;

    if (result.status == SolveStatus::degenerate) {
      write_file_atomic(opts.out_dir / "manifest.json", manifest.dump() + '\n');
      std::cerr << "error: degenerate data (every view has identical samples)\n";
      return kExitDegenerate;
    }

    write_file_atomic(opts.out_dir / "labels.csv", labels_csv(result.labels));
    write_file_atomic(opts.out_dir / "history.csv", history_csv(result.history));
    write_file_atomic(opts.out_dir / "graph.csv",
                      graph_csv(result.shared_graph, opts.solver.eps_edge));
    if (data.labels) {
      const MetricsReport m = evaluate(result.labels, *data.labels);
      write_file_atomic(opts.out_dir / "metrics.json", metrics_json(m).dump() + '\n');
    } else {
      std::error_code ec;
      fs::remove(opts.out_dir / "metrics.json", ec);
    }
    write_file_atomic(opts.out_dir / "manifest.json", manifest.dump() + '\n');

    if (!result.exact_k) {
      std::cerr << "warning: learned graph has " << result.components << " connected components, expected "
                << opts.solver.k_clusters
                << (result.components > opts.solver.k_clusters ? "; the smallest were merged\n"
                                                                : "; labels are the components as found\n");
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  }
  return kExitOk;
}

int run_synth(const SynthOptions& opts) {
  SynthSpec spec;
  try {
    spec = parse_synth_spec(opts.spec);
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  }
  save_dataset(generate_synth(spec), opts.out_dir);
  std::cout << "wrote " << spec.v << " views (" << to_string(spec) << ") to "
            << opts.out_dir.string() << '\n';
  return kExitOk;
}

int run_metrics(const MetricsOptions& opts) {
  std::vector<int> pred, truth;
  try {
    pred = read_labels_csv(opts.pred);
    truth = read_labels_csv(opts.truth);
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLoadError;
  }
  if (pred.size() != truth.size() || pred.empty()) {
    std::cerr << "error: " << opts.pred.string() << " has " << pred.size() << " labels but "
              << opts.truth.string() << " has " << truth.size() << '\n';
    return kExitLoadError;
  }
  const std::string text = metrics_json(evaluate(pred, truth)).dump() + '\n';
  if (opts.out) {
    write_file_atomic(*opts.out, text);
  }
  std::cout << text;
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Multi-view clustering with anchor graphs, a tensor Schatten p-norm coupling and a "
               "connectivity constraint"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ClusterOptions cluster;
  std::string data_dir, synth_spec, sweep, strategy = "kmeans";
  std::int64_t clusters = 0, knn = 0;
  auto* cmd_cluster = app.add_subcommand("cluster", "Cluster a dataset (or synthetic blobs)");
  auto* data_opt = cmd_cluster->add_option("--data", data_dir, "Directory with view1.csv .. viewV.csv [labels.csv]");
  auto* synth_opt = cmd_cluster->add_option("--synth", synth_spec, "Synthetic dataset spec, e.g. n=300,k=3,v=3,sep=10");
  data_opt->excludes(synth_opt);
  cmd_cluster->add_option("--clusters", clusters, "Number of clusters K")->required();
  cmd_cluster->add_option("--anchors", cluster.solver.anchors, "Anchor ratio in (0,1] or count > 1")
      ->capture_default_str();
  cmd_cluster->add_option("--lambda", cluster.solver.lambda, "Schatten p-norm weight")->capture_default_str();
  cmd_cluster->add_option("--p", cluster.solver.p, "Schatten exponent in (0,1]")->capture_default_str();
  cmd_cluster->add_option("--knn", knn, "Neighbours for the initial graph (0 = min(15, M-1))");
  cmd_cluster->add_option("--max-iter", cluster.solver.max_iter, "Iteration cap")->capture_default_str();
  cmd_cluster->add_option("--beta0", cluster.solver.beta0, "Initial rank-constraint weight")->capture_default_str();
  cmd_cluster->add_option("--anchor-strategy", strategy, "kmeans or uniform-sample")->capture_default_str();
  cmd_cluster->add_option("--seed", cluster.solver.seed, "Random seed")->capture_default_str();
  cmd_cluster->add_option("--out", cluster.out_dir, "Output directory")->capture_default_str();
  cmd_cluster->add_option("--sweep", sweep, "Parameter grid, e.g. p=0.1:1.0:0.1 or anchors=0.1:1.0:0.2");

  SynthOptions synth;
  auto* cmd_synth = app.add_subcommand("synth", "Write a synthetic multi-view dataset directory");
  cmd_synth->add_option("--spec", synth.spec, "e.g. n=300,k=3,v=3,sep=10,dims=10,noise=1,corrupt=0,seed=0")
      ->required();
  cmd_synth->add_option("--out", synth.out_dir, "Output directory")->required();

  BenchOptions bench;
  std::string sizes = "1000,2000,4000,8000";
  auto* cmd_bench = app.add_subcommand("bench", "Per-iteration time against N at fixed M");
  cmd_bench->add_option("--sizes", sizes, "Comma-separated sample counts")->capture_default_str();
  cmd_bench->add_option("--anchors", bench.anchors, "Anchor count")->capture_default_str();
  cmd_bench->add_option("--views", bench.views, "Views")->capture_default_str();
  cmd_bench->add_option("--dims", bench.dims, "Features per view")->capture_default_str();
  cmd_bench->add_option("--clusters", bench.clusters, "Clusters")->capture_default_str();
  cmd_bench->add_option("--iters", bench.iters, "Fixed iteration count")->capture_default_str();
  cmd_bench->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  cmd_bench->add_option("--out", bench.out_dir, "Directory for bench.csv")->capture_default_str();

  MetricsOptions metrics;
  std::string metrics_out;
  auto* cmd_metrics = app.add_subcommand("metrics", "Score a labels file against ground truth");
  cmd_metrics->add_option("--pred", metrics.pred, "Predicted labels (one per line)")->required();
  cmd_metrics->add_option("--truth", metrics.truth, "True labels (one per line)")->required();
  cmd_metrics->add_option("--out", metrics_out, "Also write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadFlags;
  }

  try {
    if (cmd_cluster->parsed()) {
      if (!data_dir.empty()) cluster.data_dir = data_dir;
      if (!synth_spec.empty()) cluster.synth_spec = synth_spec;
      if (!sweep.empty()) cluster.sweep = sweep;
      cluster.solver.k_clusters = clusters;
      cluster.solver.knn = knn;
      cluster.solver.anchor_strategy = parse_anchor_strategy(strategy);
      return run_cluster(cluster);
    }
    if (cmd_synth->parsed()) return run_synth(synth);
    if (cmd_metrics->parsed()) {
      if (!metrics_out.empty()) metrics.out = metrics_out;
      return run_metrics(metrics);
    }
    if (cmd_bench->parsed()) {
      bench.sizes.clear();
      std::string rest = sizes;
      while (!rest.empty()) {
        const std::size_t comma = rest.find(',');
        const std::string cell = rest.substr(0, comma);
        char* end = nullptr;
        const long long n = std::strtoll(cell.c_str(), &end, 10);
        if (cell.empty() || *end != '\0' || n < 2) {
          throw InvalidParameter("--sizes: '" + cell + "' is not a sample count >= 2");
        }
        bench.sizes.push_back(static_cast<Eigen::Index>(n));
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
      }
      return run_bench(bench);
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  }
  return kExitBadFlags;
}

}  // namespace mvgl::cli
