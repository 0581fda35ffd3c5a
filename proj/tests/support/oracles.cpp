#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>

namespace mvgl::oracle {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd slice_of(const ComplexTensor3& t, Index k) {
  Eigen::MatrixXcd s(t.dim1(), t.dim2());
  for (Index j = 0; j < t.dim2(); ++j) {
    for (Index i = 0; i < t.dim1(); ++i) s(i, j) = t(i, j, k);
  }
  return s;
}

void set_slice(ComplexTensor3& t, Index k, const Eigen::MatrixXcd& s) {
  for (Index j = 0; j < t.dim2(); ++j) {
    for (Index i = 0; i < t.dim1(); ++i) t(i, j, k) = s(i, j);
  }
}

}  // namespace

ComplexTensor3 naive_dft3(const RealTensor3& t) {
  const Index n3 = t.dim3();
  ComplexTensor3 out(t.dim1(), t.dim2(), n3);
  for (Index i = 0; i < t.dim1(); ++i) {
    for (Index j = 0; j < t.dim2(); ++j) {
      for (Index k = 0; k < n3; ++k) {
        cd acc = 0.0;
        for (Index m = 0; m < n3; ++m) {
          const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * m) / static_cast<double>(n3);
          acc += t(i, j, m) * std::polar(1.0, angle);
        }
        out(i, j, k) = acc;
      }
    }
  }
  return out;
}

RealTensor3 naive_idft3(const ComplexTensor3& t) {
  const Index n3 = t.dim3();
  RealTensor3 out(t.dim1(), t.dim2(), n3);
  for (Index i = 0; i < t.dim1(); ++i) {
    for (Index j = 0; j < t.dim2(); ++j) {
      for (Index m = 0; m < n3; ++m) {
        cd acc = 0.0;
        for (Index k = 0; k < n3; ++k) {
          const double angle = 2.0 * std::numbers::pi * static_cast<double>(k * m) / static_cast<double>(n3);
          acc += t(i, j, k) * std::polar(1.0, angle);
        }
        out(i, j, m) = acc.real() / static_cast<double>(n3);
      }
    }
  }
  return out;
}

double schatten_p_power(const RealTensor3& t, double p, double floor) {
  const ComplexTensor3 f = naive_dft3(t);
  double total = 0.0;
  for (Index k = 0; k < f.dim3(); ++k) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(slice_of(f, k));
    for (const double s : svd.singularValues()) {
      if (s > floor) total += std::pow(s, p);
    }
  }
  return total;
}

RealTensor3 soft_threshold_tsvd(const RealTensor3& x, double w) {
  ComplexTensor3 f = naive_dft3(x);
  for (Index k = 0; k < f.dim3(); ++k) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(slice_of(f, k),
                                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd shrunk = (svd.singularValues().array() - w).max(0.0).matrix();
    set_slice(f, k, svd.matrixU() * shrunk.cast<cd>().asDiagonal() * svd.matrixV().adjoint());
  }
  return naive_idft3(f);
}

double gst_grid(double sigma, double w, double p, double step) {
  const auto f = [&](double d) { return 0.5 * (d - sigma) * (d - sigma) + w * std::pow(d, p); };
  double best = 0.0;
  double best_val = f(0.0);
  const auto steps = static_cast<long long>(std::floor(sigma / step));
  for (long long s = 1; s <= steps; ++s) {
    const double d = static_cast<double>(s) * step;
    const double v = f(d);
    if (v < best_val) {
      best_val = v;
      best = d;
    }
  }
  if (f(sigma) < best_val) best = sigma;
  return best;
}

double prox_objective(const RealTensor3& j, const RealTensor3& x, double tau, double p) {
  double fit = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const double d = j.values()[i] - x.values()[i];
    fit += d * d;
  }
  return 0.5 * fit + tau * schatten_p_power(j, p, 1e-12);
}

Eigen::VectorXd simplex_bisection(const Eigen::VectorXd& v) {
  const auto mass = [&](double gamma) { return (v.array() + gamma).max(0.0).sum(); };
  double lo = -v.maxCoeff();  // mass(lo) = 0
  double hi = 1.0 - v.maxCoeff();  // mass(hi) >= 1
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mass(mid) < 1.0 ? lo : hi) = mid;
  }
  const double gamma = std::abs(mass(lo) - 1.0) < std::abs(mass(hi) - 1.0) ? lo : hi;
  return (v.array() + gamma).max(0.0).matrix();
}

Eigen::MatrixXd normalized_laplacian(const Eigen::MatrixXd& zbar) {
  const Index n = zbar.rows();
  const Index m = zbar.cols();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + m, n + m);
  b.topRightCorner(n, m) = zbar;
  b.bottomLeftCorner(m, n) = zbar.transpose();
  const Eigen::VectorXd d = b.rowwise().sum().cwiseMax(1e-12);
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  return Eigen::MatrixXd::Identity(n + m, n + m) - s.asDiagonal() * b * s.asDiagonal();
}

int laplacian_zero_count(const Eigen::MatrixXd& zbar, double tol) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized_laplacian(zbar),
                                                           Eigen::EigenvaluesOnly);
  return static_cast<int>((eig.eigenvalues().array().abs() < tol).count());
}

double bipartite_trace_optimum(const Eigen::MatrixXd& h, Index k) {
  const Index n = h.rows();
  const Index m = h.cols();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n + m, n + m);
  s.topRightCorner(n, m) = h;
  s.bottomLeftCorner(m, n) = h.transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().tail(k).sum();
}

double laplacian_trace_optimum(const Eigen::MatrixXd& laplacian, Index k) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().head(k).sum();
}

int bfs_components(const Eigen::MatrixXd& zbar, double eps) {
  const Index n = zbar.rows();
  const Index m = zbar.cols();
  // Nodes 0..n-1 are samples, n..n+m-1 anchors.
  std::vector<char> seen(static_cast<std::size_t>(n + m), 0);
  int count = 0;
  for (Index start = 0; start < n + m; ++start) {
    if (seen[start]) continue;
    if (start >= n) {
      const Index a = start - n;
      if (!(zbar.col(a).array() > eps).any()) continue;
    }
    ++count;
    std::deque<Index> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      if (u < n) {
        for (Index a = 0; a < m; ++a) {
          if (zbar(u, a) > eps && !seen[n + a]) {
            seen[n + a] = 1;
            queue.push_back(n + a);
          }
        }
      } else {
        for (Index i = 0; i < n; ++i) {
          if (zbar(i, u - n) > eps && !seen[i]) {
            seen[i] = 1;
            queue.push_back(i);
          }
        }
      }
    }
  }
  return count;
}

double brute_force_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const int kp = *std::max_element(pred.begin(), pred.end()) + 1;
  const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  // Map predicted cluster c to class perm[c] where perm ranges over
  // permutations of max(kp, kt) symbols; extra symbols match nothing.
  const int size = std::max(kp, kt);
  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  long long best = 0;
  do {
    long long hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += perm[pred[i]] == truth[i];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

double brute_force_assignment_cost(const Eigen::MatrixXd& cost) {
  const Index size = std::max(cost.rows(), cost.cols());
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(size, size);
  padded.topLeftCorner(cost.rows(), cost.cols()) = cost;
  std::vector<Index> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Index r = 0; r < size; ++r) total += padded(r, perm[r]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

PairCounts pair_loop(const std::vector<int>& pred, const std::vector<int>& truth) {
  PairCounts c;
  for (std::size_t a = 0; a < pred.size(); ++a) {
    for (std::size_t b = a + 1; b < pred.size(); ++b) {
      const bool sp = pred[a] == pred[b];
      const bool st = truth[a] == truth[b];
      if (sp && st) ++c.tp;
      else if (sp) ++c.fp;
      else if (st) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

double pair_loop_ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  const PairCounts c = pair_loop(pred, truth);
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double tn = static_cast<double>(c.tn);
  const double denom = (tp + fn) * (fn + tn) + (tp + fp) * (fp + tn);
  if (denom == 0.0) return pred == truth ? 1.0 : 0.0;
  return 2.0 * (tp * tn - fn * fp) / denom;
}

}  // namespace mvgl::oracle
