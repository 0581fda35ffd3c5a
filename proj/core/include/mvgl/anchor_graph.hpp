#pragma once

#include "mvgl/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace mvgl {

/// N x M squared Euclidean sample-to-anchor distances of one view.
using DistanceBlock = Eigen::MatrixXd;

/// N x M row-stochastic sample-to-anchor weights of one view.
using AnchorGraph = Eigen::MatrixXd;

enum class AnchorStrategy { kmeans, uniform_sample };

std::string_view to_string(AnchorStrategy s);
AnchorStrategy parse_anchor_strategy(std::string_view name);

/// Per-view anchors; view v is M x d_v and M is the same for every view.
struct AnchorSet {
  std::vector<Eigen::MatrixXd> anchors;
  AnchorStrategy strategy = AnchorStrategy::kmeans;
  std::uint64_t seed = 0;
  /// Row indices shared by all views (uniform_sample only).
  std::vector<Eigen::Index> sample_rows;

  Eigen::Index count() const { return anchors.empty() ? 0 : anchors.front().rows(); }
};

/// kmeans: k-means++ seeding on all views jointly (seed j is the same sample
/// in every view), then at most 50 Lloyd rounds per view.
/// uniform_sample: one seeded subset of rows used for every view, so anchor j
/// is the same sample in each view. Deterministic given (data, m, strategy, seed).
AnchorSet select_anchors(const MultiViewDataset& data, Eigen::Index m, AnchorStrategy strategy,
                         std::uint64_t seed);

/// d(i, j) = ||x_i - a_j||^2, computed from differences (no norm expansion).
DistanceBlock pairwise_sq_dists(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a);

/// Closed-form k-nearest-anchor initialization. Row i puts weight
/// (d_(k+1) - d_(j)) / (k d_(k+1) - sum_{l<=k} d_(l)) on its k nearest anchors;
/// if that denominator vanishes the k nearest get 1/k each.
AnchorGraph init_anchor_graph(const DistanceBlock& d, Eigen::Index k);

/// mean_i ((k/2) d_(k+1) - 0.5 sum_{l<=k} d_(l)), floored at 1e-12.
double compute_alpha(const DistanceBlock& d, Eigen::Index k);

}  // namespace mvgl
