#pragma once

#include "mvgl/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace mvgl::gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_int(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline Eigen::MatrixXd gaussian(Rng& rng, Index rows, Index cols, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

inline RealTensor3 gaussian_tensor(Rng& rng, Index n1, Index n2, Index n3, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  RealTensor3 t(n1, n2, n3);
  for (double& x : t.values()) x = n(rng);
  return t;
}

/// Rows on the probability simplex; each entry is zeroed with probability
/// `sparsity`, keeping at least one positive entry per row.
inline Eigen::MatrixXd simplex_rows(Rng& rng, Index n, Index m, double sparsity = 0.0) {
  Eigen::MatrixXd z(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) z(i, j) = uniform(rng) < sparsity ? 0.0 : uniform(rng, 0.01, 1.0);
    if (z.row(i).sum() == 0.0) z(i, uniform_int(rng, 0, m - 1)) = 1.0;
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

inline std::vector<Index> permutation(Rng& rng, Index n) {
  std::vector<Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

struct BlockGraph {
  Eigen::MatrixXd zbar;
  int blocks = 0;
  std::vector<int> sample_block;
};

/// Simplex-row bipartite graph with `blocks` disconnected blocks. Every
/// block owns at least one sample and one anchor and its nonzero entries are
/// at least 1e-4 before row normalisation. Rows and columns are shuffled.
inline BlockGraph block_diagonal(Rng& rng, int blocks, Index max_rows = 8, Index max_cols = 5) {
  std::vector<Index> rows, cols;
  for (int b = 0; b < blocks; ++b) {
    rows.push_back(uniform_int(rng, 1, max_rows));
    cols.push_back(uniform_int(rng, 1, max_cols));
  }
  const Index n = std::accumulate(rows.begin(), rows.end(), Index{0});
  const Index m = std::accumulate(cols.begin(), cols.end(), Index{0});
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, m);
  std::vector<int> owner(static_cast<std::size_t>(n));
  Index r0 = 0, c0 = 0;
  for (int b = 0; b < blocks; ++b) {
    for (Index i = r0; i < r0 + rows[b]; ++i) {
      owner[i] = b;
      for (Index j = c0; j < c0 + cols[b]; ++j) z(i, j) = uniform(rng, 0.05, 1.0);
      z.row(i) /= z.row(i).sum();
    }
    r0 += rows[b];
    c0 += cols[b];
  }
  const std::vector<Index> pr = permutation(rng, n);
  const std::vector<Index> pc = permutation(rng, m);
  BlockGraph out;
  out.zbar.resize(n, m);
  out.sample_block.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) out.zbar(i, j) = z(pr[i], pc[j]);
    out.sample_block[i] = owner[pr[i]];
  }
  out.blocks = blocks;
  return out;
}

inline std::vector<int> random_labels(Rng& rng, std::size_t n, int k) {
  std::uniform_int_distribution<int> d(0, k - 1);
  std::vector<int> l(n);
  for (int& x : l) x = d(rng);
  return l;
}

}  // namespace mvgl::gen
