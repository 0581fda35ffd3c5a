#include "mvgl/anchor_graph.hpp"

#include "mvgl/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace mvgl {
namespace {

using Eigen::Index;

constexpr int kMaxLloydRounds = 50;

// Anchor indices of row i ordered by distance, ties broken by index.
std::vector<Index> sorted_anchors(const DistanceBlock& d, Index i, Index keep) {
  std::vector<Index> order(static_cast<std::size_t>(d.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  const auto closer = [&](Index a, Index b) {
    return d(i, a) < d(i, b) || (d(i, a) == d(i, b) && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + keep, order.end(), closer);
  order.resize(static_cast<std::size_t>(keep));
  return order;
}

void check_neighbors(const DistanceBlock& d, Index k, const char* what) {
  if (k < 1 || k >= d.cols()) {
    throw InvalidParameter(std::string(what) + ": need 1 <= k < M, got k = " + std::to_string(k) +
                           ", M = " + std::to_string(d.cols()));
  }
}

// k-means++ seeding over all views at once: D^2 is the sum of per-view
// squared distances, each view scaled by its total variance so no view
// dominates. Returns sample rows, so seed j is the same sample in every view.
std::vector<Index> joint_kmeans_pp(const MultiViewDataset& data, Index m, std::mt19937_64& rng) {
  const Index n = data.samples();
  std::vector<double> scale;
  for (const Eigen::MatrixXd& x : data.views) {
    const double spread = (x.rowwise() - x.colwise().mean()).squaredNorm() / static_cast<double>(n);
    scale.push_back(spread > 0.0 ? 1.0 / spread : 0.0);
  }
  const auto dist_to = [&](Index row) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (std::size_t v = 0; v < data.views.size(); ++v) {
      const Eigen::MatrixXd& x = data.views[v];
      d += scale[v] * (x.rowwise() - x.row(row)).rowwise().squaredNorm();
    }
    return d;
  };

  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::vector<Index> rows{pick(rng)};
  Eigen::VectorXd best = dist_to(rows.front());
  while (static_cast<Index>(rows.size()) < m) {
    Index chosen = 0;
    if (best.sum() > 0.0) {
      std::discrete_distribution<Index> draw(best.data(), best.data() + n);
      chosen = draw(rng);
    } else {
      chosen = pick(rng);
    }
    rows.push_back(chosen);
    best = best.cwiseMin(dist_to(chosen));
  }
  return rows;
}

// Lloyd iterations from the given starting centers.
Eigen::MatrixXd lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers) {
  const Index n = x.rows();
  const Index m = centers.rows();
  std::vector<Index> assign(static_cast<std::size_t>(n), -1);

  for (int round = 0; round < kMaxLloydRounds; ++round) {
    const DistanceBlock d = pairwise_sq_dists(x, centers);
    bool changed = false;
    Eigen::VectorXd own(n);
    for (Index i = 0; i < n; ++i) {
      Index arg = 0;
      own(i) = d.row(i).minCoeff(&arg);
      if (assign[static_cast<std::size_t>(i)] != arg) {
        assign[static_cast<std::size_t>(i)] = arg;
        changed = true;
      }
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(m, x.cols());
    std::vector<Index> counts(static_cast<std::size_t>(m), 0);
    for (Index i = 0; i < n; ++i) {
      const Index c = assign[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < m; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: re-seed from the point farthest from its own center.
      Index far = 0;
      own.maxCoeff(&far);
      centers.row(c) = x.row(far);
      own(far) = 0.0;
      changed = true;
    }
    if (!changed) break;
  }
  return centers;
}

}  // namespace

std::string_view to_string(AnchorStrategy s) {
  return s == AnchorStrategy::kmeans ? "kmeans" : "uniform-sample";
}

AnchorStrategy parse_anchor_strategy(std::string_view name) {
  if (name == "kmeans") return AnchorStrategy::kmeans;
  if (name == "uniform-sample" || name == "uniform") return AnchorStrategy::uniform_sample;
  throw InvalidParameter("unknown anchor strategy '" + std::string(name) +
                         "' (expected kmeans or uniform-sample)");
}

AnchorSet select_anchors(const MultiViewDataset& data, Index m, AnchorStrategy strategy,
                         std::uint64_t seed) {
  data.validate();
  const Index n = data.samples();
  if (m < 1 || m > n) {
    throw InvalidParameter("select_anchors: need 1 <= m <= N, got m = " + std::to_string(m) +
                           ", N = " + std::to_string(n));
  }

  AnchorSet set;
  set.strategy = strategy;
  set.seed = seed;
  if (strategy == AnchorStrategy::uniform_sample) {
    std::mt19937_64 rng(seed);
    std::vector<Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Index{0});
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(static_cast<std::size_t>(m));
    for (const Eigen::MatrixXd& x : data.views) {
      Eigen::MatrixXd a(m, x.cols());
      for (Index j = 0; j < m; ++j) a.row(j) = x.row(rows[static_cast<std::size_t>(j)]);
      set.anchors.push_back(std::move(a));
    }
    set.sample_rows = std::move(rows);
    return set;
  }

  std::mt19937_64 rng(seed);
  const std::vector<Index> rows = joint_kmeans_pp(data, m, rng);
  for (const Eigen::MatrixXd& x : data.views) {
    Eigen::MatrixXd start(m, x.cols());
    for (Index j = 0; j < m; ++j) start.row(j) = x.row(rows[static_cast<std::size_t>(j)]);
    set.anchors.push_back(lloyd(x, std::move(start)));
  }
  return set;
}

DistanceBlock pairwise_sq_dists(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a) {
  if (x.cols() != a.cols()) {
    throw InvalidInput("pairwise_sq_dists: feature dimension mismatch (" +
                       std::to_string(x.cols()) + " vs " + std::to_string(a.cols()) + ")");
  }
  DistanceBlock d(x.rows(), a.rows());
  for (Index j = 0; j < a.rows(); ++j) {
    d.col(j) = (x.rowwise() - a.row(j)).rowwise().squaredNorm();
  }
  return d;
}

AnchorGraph init_anchor_graph(const DistanceBlock& d, Index k) {
  check_neighbors(d, k, "init_anchor_graph");
  AnchorGraph z = AnchorGraph::Zero(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i) {
    const std::vector<Index> near = sorted_anchors(d, i, k + 1);
    const double edge = d(i, near[static_cast<std::size_t>(k)]);
    double head = 0.0;
    for (Index l = 0; l < k; ++l) head += d(i, near[static_cast<std::size_t>(l)]);
    const double denom = static_cast<double>(k) * edge - head;
    for (Index l = 0; l < k; ++l) {
      const Index j = near[static_cast<std::size_t>(l)];
      z(i, j) = denom > 0.0 ? (edge - d(i, j)) / denom : 1.0 / static_cast<double>(k);
    }
  }
  return z;
}

double compute_alpha(const DistanceBlock& d, Index k) {
  check_neighbors(d, k, "compute_alpha");
  if (d.rows() == 0) return 1e-12;
  double total = 0.0;
  for (Index i = 0; i < d.rows(); ++i) {
    const std::vector<Index> near = sorted_anchors(d, i, k + 1);
    double head = 0.0;
    for (Index l = 0; l < k; ++l) head += d(i, near[static_cast<std::size_t>(l)]);
    total += 0.5 * static_cast<double>(k) * d(i, near[static_cast<std::size_t>(k)]) - 0.5 * head;
  }
  return std::max(total / static_cast<double>(d.rows()), 1e-12);
}

}  // namespace mvgl
