#include "mvgl/solver.hpp"

#include "mvgl/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>

namespace mvgl {

using Eigen::Index;

namespace {

constexpr double kGuard = 1e-12;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool all_rows_identical(const Eigen::MatrixXd& x) {
  for (Index i = 1; i < x.rows(); ++i) {
    if (x.row(i) != x.row(0)) return false;
  }
  return true;
}

void require_same_shape(const GraphTensor& a, const GraphTensor& b, const char* what) {
  if (!a.same_shape(b)) throw InvalidInput(std::string(what) + ": tensor shapes differ");
}

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iter:
      return "max-iter";
    case SolveStatus::degenerate:
      return "degenerate";
  }
  return "unknown";
}

Index SolverConfig::anchor_count(Index n) const {
  if (anchors <= 1.0) {
    return std::clamp<Index>(static_cast<Index>(std::llround(anchors * static_cast<double>(n))),
                             Index{1}, n);
  }
  return static_cast<Index>(std::llround(anchors));
}

Index SolverConfig::neighbor_count(Index m) const {
  return knn > 0 ? knn : std::min<Index>(15, m - 1);
}

void SolverConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw InvalidParameter(msg); };
  if (!(anchors > 0.0)) fail("anchors must be a ratio in (0, 1] or a count > 1");
  if (anchors > 1.0 && anchors != std::floor(anchors)) fail("anchor count must be an integer");
  if (k_clusters < 1) fail("cluster count must be at least 1");
  if (!(lambda >= 0.0)) fail("lambda must be nonnegative");
  if (!(p > 0.0 && p <= 1.0)) fail("p must lie in (0, 1], got " + format_double(p));
  if (!(mu0 > 0.0) || !(mu0 < mu_max)) fail("need 0 < mu0 < mu_max");
  if (!(eta > 1.0)) fail("eta must exceed 1");
  if (!(beta0 > 0.0)) fail("beta0 must be positive");
  if (!(tol_residual > 0.0)) fail("tol_residual must be positive");
  if (!(tol_unit_sv > 0.0 && tol_unit_sv < 0.1)) fail("tol_unit_sv must lie in (0, 0.1)");
  if (!(eps_edge >= 0.0)) fail("eps_edge must be nonnegative");
  if (max_iter < 1) fail("max_iter must be at least 1");
}

EmbeddingUpdate update_embedding(const Eigen::MatrixXd& zbar, Index k) {
  if (k < 1 || k > std::min(zbar.rows(), zbar.cols())) {
    throw InvalidParameter("update_embedding: need 1 <= K <= min(N, M), got K = " +
                           std::to_string(k));
  }
  EmbeddingUpdate out;
  out.degrees = degrees(zbar);
  const Eigen::MatrixXd h = normalized_affinity(zbar, out.degrees);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double scale = std::sqrt(2.0) / 2.0;
  out.embedding.p = scale * svd.matrixU().leftCols(k);
  out.embedding.q = scale * svd.matrixV().leftCols(k);
  out.singulars = svd.singularValues();
  return out;
}

GraphTensor update_aux(const GraphTensor& z, const GraphTensor& y, double mu, double lambda,
                       double p) {
  require_same_shape(z, y, "update_aux");
  if (!(mu > 0.0)) throw InvalidParameter("update_aux: mu must be positive");
  if (!(lambda >= 0.0)) throw InvalidParameter("update_aux: lambda must be nonnegative");
  GraphTensor target = y;
  target *= 1.0 / mu;
  target += z;
  return prox_schatten_p(target, lambda / mu, p);
}

Eigen::VectorXd project_simplex(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Index m = v.size();
  if (m == 0) return {};
  Eigen::VectorXd u = v;
  std::sort(u.data(), u.data() + m, std::greater<>());
  double prefix = 0.0;
  double gamma = 0.0;
  for (Index j = 0; j < m; ++j) {
    prefix += u(j);
    const double candidate = (1.0 - prefix) / static_cast<double>(j + 1);
    if (u(j) + candidate > 0.0) gamma = candidate;
  }
  return (v.array() + gamma).cwiseMax(0.0).matrix();
}

Eigen::MatrixXd embedding_distances(const Embedding& emb, const DegreePair& deg) {
  const Eigen::MatrixXd a = deg.samples.cwiseSqrt().cwiseInverse().asDiagonal() * emb.p;
  const Eigen::MatrixXd b = deg.anchors.cwiseSqrt().cwiseInverse().asDiagonal() * emb.q;
  Eigen::MatrixXd d = -2.0 * a * b.transpose();
  d.colwise() += a.rowwise().squaredNorm();
  d.rowwise() += b.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

GraphTensor update_graphs(const std::vector<DistanceBlock>& dists, const GraphTensor& aux,
                          const GraphTensor& dual, const Embedding& emb, const DegreePair& deg,
                          const GraphTensor& z_prev, const std::vector<double>& alpha, double beta,
                          double mu) {
  const Index n = z_prev.dim1(), views = z_prev.dim2(), m = z_prev.dim3();
  require_same_shape(aux, z_prev, "update_graphs");
  require_same_shape(dual, z_prev, "update_graphs");
  if (static_cast<Index>(dists.size()) != views || static_cast<Index>(alpha.size()) != views) {
    throw InvalidInput("update_graphs: need one distance block and alpha per view");
  }
  if (!(mu > 0.0)) throw InvalidParameter("update_graphs: mu must be positive");

  const Eigen::MatrixXd df = embedding_distances(emb, deg);
  const double graph_weight = beta / static_cast<double>(views);

  GraphTensor z(n, views, m);
  Eigen::MatrixXd sigma(n, m);
  for (Index v = 0; v < views; ++v) {
    const DistanceBlock& d = dists[static_cast<std::size_t>(v)];
    const double g = std::max(std::sqrt(std::max(d.cwiseProduct(z_prev.lateral(v)).sum(), 0.0)), kGuard);
    // sigma = d/g - mu E + (beta/V) d^f with E = J - Y/mu.
    sigma = d / g - mu * aux.lateral(v) + dual.lateral(v) + graph_weight * df;
    const double scale = -1.0 / (mu + 2.0 * alpha[static_cast<std::size_t>(v)]);
    auto out = z.lateral(v);
    for (Index i = 0; i < n; ++i) {
      out.row(i) = project_simplex((scale * sigma.row(i)).transpose()).transpose();
    }
  }
  return z;
}

BetaUpdate update_beta(Index zero_count, Index k, double beta) {
  if (zero_count < k) return {2.0 * beta, false};
  if (zero_count > k + 1) return {beta / 2.0, false};
  return {beta, true};
}

DualUpdate update_duals(const GraphTensor& y, const GraphTensor& z, const GraphTensor& j,
                        double mu, double eta, double mu_max) {
  require_same_shape(y, z, "update_duals");
  require_same_shape(y, j, "update_duals");
  DualUpdate out{y, std::min(eta * mu, mu_max)};
  auto dst = out.dual.values();
  const auto zs = z.values();
  const auto js = j.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += mu * (zs[i] - js[i]);
  return out;
}

double objective(const GraphTensor& z, const std::vector<DistanceBlock>& dists,
                 const std::vector<double>& alpha, double lambda, double p, const Embedding& emb,
                 const DegreePair& deg, double beta) {
  double value = 0.0;
  for (Index v = 0; v < z.dim2(); ++v) {
    const auto zv = z.lateral(v);
    const double fit = dists[static_cast<std::size_t>(v)].cwiseProduct(zv).sum();
    value += std::sqrt(std::max(fit, 0.0)) + alpha[static_cast<std::size_t>(v)] * zv.squaredNorm();
  }
  if (lambda != 0.0) value += lambda * schatten_p_power(z, p);
  if (beta != 0.0) {
    value += beta * embedding_distances(emb, deg).cwiseProduct(shared_graph(z)).sum();
  }
  return value;
}

SolveResult solve(const MultiViewDataset& data, const SolverConfig& cfg) {
  data.validate();
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  const Index n = data.samples();
  const Index views = data.view_count();
  const Index k = cfg.k_clusters;
  const Index m = cfg.anchor_count(n);
  if (k < 2) throw InvalidParameter("solve: need K >= 2");
  if (n < k) throw InvalidParameter("solve: need N >= K");
  if (m < k || m > n) {
    throw InvalidParameter("solve: need K <= M <= N, got M = " + std::to_string(m));
  }
  if (m < 2) throw InvalidParameter("solve: need at least 2 anchors");
  const Index knn = cfg.neighbor_count(m);
  if (knn < 1 || knn >= m) {
    throw InvalidParameter("solve: need 1 <= knn < M, got knn = " + std::to_string(knn));
  }

  SolveResult result;
  result.anchors = m;

  if (std::all_of(data.views.begin(), data.views.end(), all_rows_identical)) {
    result.status = SolveStatus::degenerate;
    result.labels.assign(static_cast<std::size_t>(n), 0);
    result.components = 1;
    result.exact_k = false;
    result.shared_graph = Eigen::MatrixXd::Constant(n, m, 1.0 / static_cast<double>(m));
    result.per_view_graphs.assign(static_cast<std::size_t>(views), result.shared_graph);
    result.setup_seconds = seconds_since(start);
    return result;
  }

  const AnchorSet anchors = select_anchors(data, m, cfg.anchor_strategy, cfg.seed);
  std::vector<DistanceBlock> dists;
  std::vector<double> alpha;
  GraphTensor z(n, views, m);
  for (Index v = 0; v < views; ++v) {
    dists.push_back(pairwise_sq_dists(data.views[static_cast<std::size_t>(v)],
                                      anchors.anchors[static_cast<std::size_t>(v)]));
    alpha.push_back(compute_alpha(dists.back(), knn));
    z.lateral(v) = init_anchor_graph(dists.back(), knn);
  }
  GraphTensor y(n, views, m);
  GraphTensor j = z;
  double mu = cfg.mu0;
  double beta = cfg.beta0;
  result.setup_seconds = seconds_since(start);

  const auto loop_start = std::chrono::steady_clock::now();
  EmbeddingUpdate emb;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    emb = update_embedding(shared_graph(z), k);
    const Index zeros = count_zero_eigs(emb.singulars, cfg.tol_unit_sv);
    const BetaUpdate b = update_beta(zeros, k, beta);
    beta = b.beta;

    j = update_aux(z, y, mu, cfg.lambda, cfg.p);
    z = update_graphs(dists, j, y, emb.embedding, emb.degrees, z, alpha, beta, mu);
    DualUpdate du = update_duals(y, z, j, mu, cfg.eta, cfg.mu_max);

    IterationRecord rec;
    rec.iter = iter;
    rec.objective = objective(z, dists, alpha, cfg.lambda, cfg.p, emb.embedding, emb.degrees, beta);
    rec.residual = (z - j).max_abs();
    rec.zero_eigs = zeros;
    rec.beta = beta;
    rec.mu = mu;
    result.history.push_back(rec);

    y = std::move(du.dual);
    mu = du.mu;

    if (cfg.stop_on_convergence && b.reached && rec.residual <= cfg.tol_residual) {
      result.status = SolveStatus::converged;
      break;
    }
  }
  result.loop_seconds = seconds_since(loop_start);
  if (result.status != SolveStatus::converged) result.status = SolveStatus::max_iter;

  result.shared_graph = shared_graph(z);
  const ComponentLabeling comps = connected_components(result.shared_graph, cfg.eps_edge);
  ClusterLabels labels = labels_from_components(comps, k, result.shared_graph);
  result.labels = std::move(labels.labels);
  result.exact_k = labels.exact;
  result.components = comps.count;
  for (Index v = 0; v < views; ++v) result.per_view_graphs.emplace_back(z.lateral(v));
  result.embedding = std::move(emb.embedding);
  return result;
}

}  // namespace mvgl
