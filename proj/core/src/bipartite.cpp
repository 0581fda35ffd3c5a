#include "mvgl/bipartite.hpp"

#include "mvgl/error.hpp"
#include "mvgl/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvgl {

using Eigen::Index;

Eigen::MatrixXd shared_graph(const RealTensor3& z) {
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(z.dim1(), z.dim3());
  if (z.dim2() == 0) return mean;
  for (Index v = 0; v < z.dim2(); ++v) mean += z.lateral(v);
  return mean / static_cast<double>(z.dim2());
}

DegreePair degrees(const Eigen::MatrixXd& zbar) {
  DegreePair d{zbar.rowwise().sum(), zbar.colwise().sum().transpose()};
  d.samples = d.samples.cwiseMax(1e-12);
  d.anchors = d.anchors.cwiseMax(1e-12);
  return d;
}

Eigen::MatrixXd normalized_affinity(const Eigen::MatrixXd& zbar, const DegreePair& deg) {
  if (deg.samples.size() != zbar.rows() || deg.anchors.size() != zbar.cols()) {
    throw InvalidInput("normalized_affinity: degree vectors do not match the graph shape");
  }
  return deg.samples.cwiseSqrt().cwiseInverse().asDiagonal() * zbar *
         deg.anchors.cwiseSqrt().cwiseInverse().asDiagonal();
}

Index count_zero_eigs(const Eigen::VectorXd& singulars, double tol) {
  return static_cast<Index>(
      std::count_if(singulars.begin(), singulars.end(), [tol](double s) { return s >= 1.0 - tol; }));
}

ComponentLabeling connected_components(const Eigen::MatrixXd& zbar, double eps) {
  const Index n = zbar.rows();
  const Index m = zbar.cols();
  UnionFind sets(static_cast<std::size_t>(n + m));
  std::vector<bool> touched(static_cast<std::size_t>(m), false);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (zbar(i, j) > eps) {
        sets.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(n + j));
        touched[static_cast<std::size_t>(j)] = true;
      }
    }
  }

  ComponentLabeling out;
  out.sample_labels.assign(static_cast<std::size_t>(n), -1);
  out.anchor_labels.assign(static_cast<std::size_t>(m), -1);
  std::vector<int> id_of_root(static_cast<std::size_t>(n + m), -1);
  for (Index i = 0; i < n; ++i) {
    const std::size_t root = sets.find(static_cast<std::size_t>(i));
    if (id_of_root[root] < 0) id_of_root[root] = out.count++;
    out.sample_labels[static_cast<std::size_t>(i)] = id_of_root[root];
  }
  for (Index j = 0; j < m; ++j) {
    if (!touched[static_cast<std::size_t>(j)]) continue;
    out.anchor_labels[static_cast<std::size_t>(j)] =
        id_of_root[sets.find(static_cast<std::size_t>(n + j))];
  }
  return out;
}

ClusterLabels labels_from_components(const ComponentLabeling& c, Index k,
                                     const Eigen::MatrixXd& zbar) {
  ClusterLabels out{c.sample_labels, static_cast<Index>(c.count) == k};
  if (static_cast<Index>(c.count) <= k || k < 1) return out;

  // Rank components by size (ties: lower id first); the k largest survive.
  std::vector<Index> size(static_cast<std::size_t>(c.count), 0);
  for (const int id : c.sample_labels) ++size[static_cast<std::size_t>(id)];
  std::vector<int> order(static_cast<std::size_t>(c.count));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return size[static_cast<std::size_t>(a)] > size[static_cast<std::size_t>(b)];
  });
  std::vector<bool> survives(static_cast<std::size_t>(c.count), false);
  for (Index r = 0; r < k; ++r) survives[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = true;
  const int largest = order.front();

  std::vector<int> target(static_cast<std::size_t>(c.count));
  std::iota(target.begin(), target.end(), 0);
  const Index n = zbar.rows();
  for (int comp = 0; comp < c.count; ++comp) {
    if (survives[static_cast<std::size_t>(comp)]) continue;
    // Total weight the merged component's samples put on each surviving
    // component's anchors.
    std::vector<double> pull(static_cast<std::size_t>(c.count), 0.0);
    for (Index i = 0; i < n; ++i) {
      if (c.sample_labels[static_cast<std::size_t>(i)] != comp) continue;
      for (Index j = 0; j < zbar.cols(); ++j) {
        const int owner = c.anchor_labels[static_cast<std::size_t>(j)];
        if (owner >= 0 && survives[static_cast<std::size_t>(owner)]) {
          pull[static_cast<std::size_t>(owner)] += zbar(i, j);
        }
      }
    }
    int best = largest;
    double best_pull = 0.0;
    for (int s = 0; s < c.count; ++s) {
      if (pull[static_cast<std::size_t>(s)] > best_pull) {
        best_pull = pull[static_cast<std::size_t>(s)];
        best = s;
      }
    }
    target[static_cast<std::size_t>(comp)] = best;
  }

  // Relabel contiguously in order of first appearance.
  std::vector<int> fresh(static_cast<std::size_t>(c.count), -1);
  int next = 0;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    const int t = target[static_cast<std::size_t>(out.labels[i])];
    if (fresh[static_cast<std::size_t>(t)] < 0) fresh[static_cast<std::size_t>(t)] = next++;
    out.labels[i] = fresh[static_cast<std::size_t>(t)];
  }
  return out;
}

}  // namespace mvgl
