#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace mvgl {

/// Predicted clusters (rows) x true classes (columns). Label ids of either
/// side are mapped to rows/columns in increasing id order.
struct ContingencyTable {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;
};

struct PairMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double ari = 0.0;
};

struct MetricsReport {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double ari = 0.0;
};

/// Throws InvalidInput when the lengths differ.
ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth);

/// Minimum-cost one-to-one assignment (Hungarian method on the square-padded
/// matrix). Entry r is the column matched to row r, or -1 if row r was
/// matched to padding.
std::vector<int> hungarian_assign(const Eigen::MatrixXd& cost);

double accuracy(std::span<const int> pred, std::span<const int> truth);
/// Mutual information over sqrt(H(pred) H(truth)), natural logs.
double nmi(std::span<const int> pred, std::span<const int> truth);
double purity(std::span<const int> pred, std::span<const int> truth);
/// Same-cluster pairs are the positive class.
PairMetrics pair_metrics(std::span<const int> pred, std::span<const int> truth);

MetricsReport evaluate(std::span<const int> pred, std::span<const int> truth);

}  // namespace mvgl
