#include "mvgl/metrics.hpp"

#include "mvgl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace mvgl {
namespace {

std::vector<int> dense_ids(std::span<const int> labels, int& count) {
  std::map<int, int> ids;
  for (const int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  count = next;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

std::int64_t pairs(std::int64_t n) { return n * (n - 1) / 2; }

double entropy(const std::vector<std::int64_t>& sums, double n) {
  double h = 0.0;
  for (const std::int64_t s : sums) {
    if (s > 0) {
      const double q = static_cast<double>(s) / n;
      h -= q * std::log(q);
    }
  }
  return h;
}

bool same_partition(std::span<const int> a, std::span<const int> b) {
  const ContingencyTable t = contingency(a, b);
  // Identical partitions: every row and column has exactly one nonzero cell.
  if (t.counts.rows() != t.counts.cols()) return false;
  for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
    if ((t.counts.row(r).array() > 0).count() != 1) return false;
    if ((t.counts.col(r).array() > 0).count() != 1) return false;
  }
  return true;
}

}  // namespace

ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw InvalidInput("label vectors differ in length: " + std::to_string(pred.size()) + " vs " +
                       std::to_string(truth.size()));
  }
  int rows = 0, cols = 0;
  const std::vector<int> r = dense_ids(pred, rows);
  const std::vector<int> c = dense_ids(truth, cols);
  ContingencyTable t;
  t.counts.setZero(rows, cols);
  for (std::size_t i = 0; i < r.size(); ++i) ++t.counts(r[i], c[i]);
  t.row_sums.resize(static_cast<std::size_t>(rows));
  t.col_sums.resize(static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i) t.row_sums[static_cast<std::size_t>(i)] = t.counts.row(i).sum();
  for (int j = 0; j < cols; ++j) t.col_sums[static_cast<std::size_t>(j)] = t.counts.col(j).sum();
  t.total = static_cast<std::int64_t>(pred.size());
  return t;
}

std::vector<int> hungarian_assign(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  const int n = std::max(rows, cols);
  std::vector<int> result(static_cast<std::size_t>(rows), -1);
  if (n == 0) return result;

  // Shortest augmenting path with potentials (1-based, column 0 is a sentinel).
  const auto at = [&](int i, int j) {
    return (i <= rows && j <= cols) ? cost(i - 1, j - 1) : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> match(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = at(i0, j) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= n; ++j) {
    const int i = match[static_cast<std::size_t>(j)];
    if (i >= 1 && i <= rows && j <= cols) result[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return result;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  if (t.total == 0) throw InvalidInput("accuracy: empty label vectors");
  const Eigen::MatrixXd cost = -t.counts.cast<double>();
  const std::vector<int> assign = hungarian_assign(cost);
  std::int64_t matched = 0;
  for (std::size_t r = 0; r < assign.size(); ++r) {
    if (assign[r] >= 0) matched += t.counts(static_cast<Eigen::Index>(r), assign[r]);
  }
  return static_cast<double>(matched) / static_cast<double>(t.total);
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  if (t.total == 0) throw InvalidInput("nmi: empty label vectors");
  const double n = static_cast<double>(t.total);
  const double hp = entropy(t.row_sums, n);
  const double ht = entropy(t.col_sums, n);
  if (hp <= 0.0 || ht <= 0.0) return same_partition(pred, truth) ? 1.0 : 0.0;

  double mi = 0.0;
  for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.counts.cols(); ++c) {
      const std::int64_t nij = t.counts(r, c);
      if (nij == 0) continue;
      const double joint = static_cast<double>(nij) / n;
      mi += joint * std::log(static_cast<double>(nij) * n /
                             (static_cast<double>(t.row_sums[static_cast<std::size_t>(r)]) *
                              static_cast<double>(t.col_sums[static_cast<std::size_t>(c)])));
    }
  }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double purity(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  if (t.total == 0) throw InvalidInput("purity: empty label vectors");
  std::int64_t hits = 0;
  for (Eigen::Index r = 0; r < t.counts.rows(); ++r) hits += t.counts.row(r).maxCoeff();
  return static_cast<double>(hits) / static_cast<double>(t.total);
}

PairMetrics pair_metrics(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  std::int64_t same_both = 0;
  for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.counts.cols(); ++c) same_both += pairs(t.counts(r, c));
  }
  std::int64_t same_pred = 0, same_truth = 0;
  for (const std::int64_t s : t.row_sums) same_pred += pairs(s);
  for (const std::int64_t s : t.col_sums) same_truth += pairs(s);
  const std::int64_t all = pairs(t.total);

  PairMetrics out;
  const std::int64_t tp = same_both;
  const std::int64_t fp = same_pred - same_both;
  const std::int64_t fn = same_truth - same_both;
  out.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  out.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  out.f_score = out.precision + out.recall > 0.0
                    ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                    : 0.0;

  if (all == 0) {
    out.ari = 1.0;
    return out;
  }
  // (index - expected) / (max - expected) scaled by 2 * all, so both parts are
  // exact integers and the only rounding is the final division.
  __extension__ typedef __int128 wide;
  const wide num = 2 * (wide{all} * same_both - wide{same_pred} * same_truth);
  const wide den = wide{all} * (same_pred + same_truth) - 2 * wide{same_pred} * same_truth;
  if (den == 0) {
    out.ari = same_partition(pred, truth) ? 1.0 : 0.0;
  } else {
    out.ari = static_cast<double>(num) / static_cast<double>(den);
  }
  return out;
}

MetricsReport evaluate(std::span<const int> pred, std::span<const int> truth) {
  MetricsReport r;
  r.acc = accuracy(pred, truth);
  r.nmi = nmi(pred, truth);
  r.purity = purity(pred, truth);
  const PairMetrics pm = pair_metrics(pred, truth);
  r.precision = pm.precision;
  r.recall = pm.recall;
  r.f_score = pm.f_score;
  r.ari = pm.ari;
  return r;
}

}  // namespace mvgl
