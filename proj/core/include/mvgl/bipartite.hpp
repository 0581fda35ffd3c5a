#pragma once

#include "mvgl/tensor.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mvgl {

/// Sample degrees (row sums) and anchor degrees (column sums) of a shared
/// graph, each floored at 1e-12.
struct DegreePair {
  Eigen::VectorXd samples;
  Eigen::VectorXd anchors;
};

/// Connected components of the bipartite sample/anchor graph.
///
/// Ids are contiguous in [0, count) and ordered by the smallest sample index
/// in each component. Anchors without any edge belong to no component and
/// carry id -1.
struct ComponentLabeling {
  std::vector<int> sample_labels;
  std::vector<int> anchor_labels;
  int count = 0;
};

struct ClusterLabels {
  std::vector<int> labels;
  bool exact = false;
};

/// Mean of the per-view graphs z(:, v, :) of an N x V x M tensor.
Eigen::MatrixXd shared_graph(const RealTensor3& z);

DegreePair degrees(const Eigen::MatrixXd& zbar);

/// H = D_P^{-1/2} zbar D_Q^{-1/2}.
Eigen::MatrixXd normalized_affinity(const Eigen::MatrixXd& zbar, const DegreePair& deg);

/// Number of singular values of H at or above 1 - tol. Each one is a zero
/// eigenvalue of the normalized bipartite Laplacian, so this counts
/// connected components without forming the (N+M) x (N+M) matrix.
Eigen::Index count_zero_eigs(const Eigen::VectorXd& singulars, double tol);

/// Union-find over edges zbar(i, j) > eps.
ComponentLabeling connected_components(const Eigen::MatrixXd& zbar, double eps);

/// Sample component ids as cluster labels. With more than k components the
/// smallest ones are folded into the surviving component whose anchors they
/// weigh most in `zbar`; exact reports whether the graph had exactly k.
ClusterLabels labels_from_components(const ComponentLabeling& c, Eigen::Index k,
                                     const Eigen::MatrixXd& zbar);

}  // namespace mvgl
