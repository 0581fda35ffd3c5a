#pragma once

#include "mvgl/anchor_graph.hpp"
#include "mvgl/bipartite.hpp"
#include "mvgl/dataset.hpp"
#include "mvgl/tensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace mvgl {

/// N x V x M stack of per-view anchor graphs; lateral slice v is view v.
/// The same shape holds the auxiliary tensor J and the multipliers Y.
using GraphTensor = RealTensor3;

struct SolverConfig {
  /// Anchors: a value in (0, 1] is a fraction of N, anything larger a count.
  double anchors = 0.5;
  Eigen::Index k_clusters = 2;
  double lambda = 1.0;
  double p = 0.4;
  double mu0 = 1e-5;
  double mu_max = 1e12;
  double eta = 1.1;
  double beta0 = 1e-3;
  /// Neighbours for the initial graph and alpha; <= 0 means min(15, M - 1).
  Eigen::Index knn = 0;
  double tol_residual = 1e-6;
  double tol_unit_sv = 1e-6;
  double eps_edge = 1e-8;
  int max_iter = 200;
  std::uint64_t seed = 0;
  AnchorStrategy anchor_strategy = AnchorStrategy::kmeans;
  /// When false the loop always runs max_iter iterations (used for timing).
  bool stop_on_convergence = true;

  Eigen::Index anchor_count(Eigen::Index n) const;
  Eigen::Index neighbor_count(Eigen::Index m) const;
  /// Throws InvalidParameter on out-of-range tunables.
  void validate() const;
};

/// F = [P; Q] with P^T P = Q^T Q = I/2.
struct Embedding {
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;
};

struct EmbeddingUpdate {
  Embedding embedding;
  /// All singular values of H, descending.
  Eigen::VectorXd singulars;
  DegreePair degrees;
};

struct BetaUpdate {
  double beta;
  bool reached;
};

struct DualUpdate {
  GraphTensor dual;
  double mu;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double residual = 0.0;
  Eigen::Index zero_eigs = 0;
  double beta = 0.0;
  double mu = 0.0;
};

enum class SolveStatus { converged, max_iter, degenerate };

std::string_view to_string(SolveStatus s);

struct SolveResult {
  std::vector<int> labels;
  bool exact_k = false;
  int components = 0;
  Eigen::MatrixXd shared_graph;
  std::vector<Eigen::MatrixXd> per_view_graphs;
  Embedding embedding;
  std::vector<IterationRecord> history;
  SolveStatus status = SolveStatus::max_iter;
  Eigen::Index anchors = 0;
  /// Wall-clock seconds for anchors/distances/initial graphs and for the loop.
  double setup_seconds = 0.0;
  double loop_seconds = 0.0;
};

/// Embedding step: P, Q from the top-k singular vectors of H (scaled by
/// sqrt(2)/2). Throws InvalidParameter if k > min(N, M).
EmbeddingUpdate update_embedding(const Eigen::MatrixXd& zbar, Eigen::Index k);

/// J = prox_{(lambda/mu) ||.||_Sp^p}(Z + Y / mu).
GraphTensor update_aux(const GraphTensor& z, const GraphTensor& y, double mu, double lambda,
                       double p);

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Row-wise closed-form graph update for every view.
GraphTensor update_graphs(const std::vector<DistanceBlock>& dists, const GraphTensor& aux,
                          const GraphTensor& dual, const Embedding& emb, const DegreePair& deg,
                          const GraphTensor& z_prev, const std::vector<double>& alpha, double beta,
                          double mu);

/// ||p_i / sqrt(dP_i) - q_j / sqrt(dQ_j)||^2 for every sample/anchor pair.
Eigen::MatrixXd embedding_distances(const Embedding& emb, const DegreePair& deg);

BetaUpdate update_beta(Eigen::Index zero_count, Eigen::Index k, double beta);

DualUpdate update_duals(const GraphTensor& y, const GraphTensor& z, const GraphTensor& j,
                        double mu, double eta, double mu_max);

/// sum_v [sqrt(sum d^(v) .* Z^(v)) + alpha_v ||Z^(v)||^2] + lambda ||Z||_Sp^p
/// + beta tr(F^T L F), the trace taken in its edge form on the shared graph.
double objective(const GraphTensor& z, const std::vector<DistanceBlock>& dists,
                 const std::vector<double>& alpha, double lambda, double p, const Embedding& emb,
                 const DegreePair& deg, double beta);

/// Full alternating minimization. Deterministic given cfg.seed.
SolveResult solve(const MultiViewDataset& data, const SolverConfig& cfg);

}  // namespace mvgl
