#include "generators.hpp"
#include "oracles.hpp"
#include "properties.hpp"

#include "mvgl/bipartite.hpp"
#include "mvgl/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace mvgl;

TEST_CASE("shared_graph averages the views") {
  gen::Rng rng(1);
  const Eigen::MatrixXd a = gen::simplex_rows(rng, 4, 3);
  RealTensor3 one(4, 1, 3);
  one.lateral(0) = a;
  CHECK(shared_graph(one) == a);

  RealTensor3 two(4, 2, 3);
  two.lateral(0) = a;
  two.lateral(1) = a;
  CHECK((shared_graph(two) - a).cwiseAbs().maxCoeff() < 1e-15);

  RealTensor3 hot(1, 2, 3);
  hot(0, 0, 0) = 1.0;
  hot(0, 1, 1) = 1.0;
  const Eigen::MatrixXd s = shared_graph(hot);
  CHECK(s(0, 0) == 0.5);
  CHECK(s(0, 1) == 0.5);
  CHECK(s(0, 2) == 0.0);
}

TEST_CASE("degrees and the normalized affinity on hand cases") {
  const Eigen::MatrixXd col = Eigen::MatrixXd::Ones(2, 1);
  const DegreePair d = degrees(col);
  CHECK(d.samples == Eigen::VectorXd::Ones(2));
  CHECK(d.anchors(0) == 2.0);
  const Eigen::MatrixXd h = normalized_affinity(col, d);
  CHECK(h(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(h(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXd>(h).singularValues()(0) == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(3, 3);
  perm(0, 2) = perm(1, 0) = perm(2, 1) = 1.0;
  CHECK(normalized_affinity(perm, degrees(perm)) == perm);

  Eigen::MatrixXd gap = Eigen::MatrixXd::Zero(2, 3);
  gap(0, 0) = gap(1, 0) = 1.0;
  CHECK(degrees(gap).anchors(2) == 1e-12);

  gen::Rng rng(2);
  const Eigen::MatrixXd r = gen::gaussian(rng, 5, 3).cwiseAbs();
  const DegreePair rd = degrees(r);
  for (Index i = 0; i < 5; ++i) {
    double s = 0.0;
    for (Index j = 0; j < 3; ++j) s += r(i, j);
    CHECK(std::abs(rd.samples(i) - s) < 1e-12);
  }
}

TEST_CASE("count_zero_eigs thresholds at 1 - tol") {
  Eigen::VectorXd s(5);
  s << 1.0, 1.0 - 1e-9, 0.99, 0.0, 0.0;
  CHECK(count_zero_eigs(s, 1e-6) == 2);
  CHECK(count_zero_eigs(s, 0.05) == 3);
}

TEST_CASE("connected components of a block diagonal graph") {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(5, 4);
  z(0, 1) = 1.0;
  z(1, 0) = 0.5;
  z(1, 1) = 0.5;
  z(2, 2) = 1.0;
  z(3, 3) = 1.0;
  z(4, 2) = 1.0;
  const ComponentLabeling c = connected_components(z, 1e-8);
  CHECK(c.count == 3);
  CHECK(c.sample_labels == std::vector<int>{0, 0, 1, 2, 1});
  CHECK(c.anchor_labels == std::vector<int>{0, 0, 1, 2});
  CHECK(count_zero_eigs(update_embedding(z, 1).singulars, 1e-6) == 3);
  CHECK(oracle::laplacian_zero_count(z, 1e-8) == 3);

  gen::Rng rng(3);
  CHECK(connected_components(gen::simplex_rows(rng, 6, 4), 1e-8).count == 1);
}

TEST_CASE("connected components agree with the dense Laplacian") {
  gen::Rng rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    const gen::BlockGraph g = gen::block_diagonal(rng, static_cast<int>(gen::uniform_int(rng, 1, 6)));
    const ComponentLabeling c = connected_components(g.zbar, 1e-8);
    CHECK(c.count == g.blocks);
    CHECK(oracle::bfs_components(g.zbar, 1e-8) == g.blocks);
    CHECK(oracle::laplacian_zero_count(g.zbar, 1e-8) == g.blocks);
    CHECK(count_zero_eigs(update_embedding(g.zbar, 1).singulars, 1e-6) == g.blocks);
  }
}

TEST_CASE("labels_from_components") {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(4, 3);
  z(0, 0) = z(1, 0) = z(2, 1) = z(3, 1) = 1.0;
  const ComponentLabeling c = connected_components(z, 1e-8);
  REQUIRE(c.count == 2);

  const ClusterLabels same = labels_from_components(c, 2, z);
  CHECK(same.exact);
  CHECK(same.labels == c.sample_labels);

  const ClusterLabels one = labels_from_components(c, 1, z);
  CHECK_FALSE(one.exact);
  CHECK(one.labels == std::vector<int>{0, 0, 0, 0});

  const ClusterLabels more = labels_from_components(c, 3, z);
  CHECK_FALSE(more.exact);
  CHECK(more.labels == c.sample_labels);

  // A singleton third component is absorbed into a surviving one.
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(5, 3);
  s(0, 0) = s(1, 0) = s(2, 1) = s(3, 1) = s(4, 2) = 1.0;
  const ComponentLabeling cs = connected_components(s, 1e-8);
  REQUIRE(cs.count == 3);
  const ClusterLabels merged = labels_from_components(cs, 2, s);
  CHECK_FALSE(merged.exact);
  CHECK(merged.labels[0] == merged.labels[1]);
  CHECK(merged.labels[2] == merged.labels[3]);
  CHECK(merged.labels[0] != merged.labels[2]);
  CHECK((merged.labels[4] == merged.labels[0] || merged.labels[4] == merged.labels[2]));
}

TEST_CASE("bipartite invariants hold on random instances") {
  const props::SuiteResult r = props::bipartite_suite(1000, 13);
  INFO(r.first_failure);
  CHECK(r.cases == 1000);
  CHECK(r.failures == 0);
}
