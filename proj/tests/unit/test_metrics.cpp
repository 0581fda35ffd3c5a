#include "generators.hpp"
#include "oracles.hpp"

#include "mvgl/error.hpp"
#include "mvgl/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace mvgl;

namespace {

const std::vector<int> kA{0, 0, 1, 1};
const std::vector<int> kB{0, 1, 0, 1};

std::vector<int> relabel(const std::vector<int>& l, const std::vector<int>& map) {
  std::vector<int> out;
  for (const int x : l) out.push_back(map[static_cast<std::size_t>(x)]);
  return out;
}

}  // namespace

TEST_CASE("contingency table marginals") {
  const std::vector<int> pred{0, 0, 1, 2, 2, 2}, truth{1, 1, 0, 0, 1, 1};
  const ContingencyTable t = contingency(pred, truth);
  CHECK(t.counts.rows() == 3);
  CHECK(t.counts.cols() == 2);
  CHECK(t.total == 6);
  CHECK(t.counts.sum() == 6);
  for (Index r = 0; r < 3; ++r) CHECK(t.row_sums[r] == t.counts.row(r).sum());
  for (Index c = 0; c < 2; ++c) CHECK(t.col_sums[c] == t.counts.col(c).sum());
}

TEST_CASE("hungarian_assign") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Constant(4, 4, 5.0);
  diag.diagonal().setZero();
  CHECK(hungarian_assign(diag) == std::vector<int>{0, 1, 2, 3});

  Eigen::MatrixXd anti(2, 2);
  anti << 1, 0, 0, 1;
  CHECK(hungarian_assign(anti) == std::vector<int>{1, 0});

  gen::Rng rng(1);
  for (int rep = 0; rep < 40; ++rep) {
    const Index rows = gen::uniform_int(rng, 1, 7), cols = gen::uniform_int(rng, 1, 7);
    const Eigen::MatrixXd cost = gen::gaussian(rng, rows, cols, 3.0);
    const std::vector<int> a = hungarian_assign(cost);
    REQUIRE(static_cast<Index>(a.size()) == rows);
    double total = 0.0;
    std::vector<int> used(static_cast<std::size_t>(cols), 0);
    for (Index r = 0; r < rows; ++r) {
      if (a[r] >= 0) {
        total += cost(r, a[r]);
        CHECK(used[a[r]]++ == 0);
      }
    }
    CHECK(total == doctest::Approx(oracle::brute_force_assignment_cost(cost)).epsilon(1e-12));
  }
}

TEST_CASE("metric hand cases") {
  CHECK(accuracy(kA, kA) == 1.0);
  CHECK(accuracy(relabel(kA, {1, 0}), kA) == 1.0);
  CHECK(accuracy(kA, kB) == 0.5);

  const std::vector<int> three{0, 0, 1, 1, 2, 2};
  CHECK(nmi(three, three) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(nmi(std::vector<int>(4, 0), kB) == 0.0);
  CHECK(std::abs(nmi(kA, kB)) < 1e-15);
  CHECK(nmi(std::vector<int>(3, 0), std::vector<int>(3, 5)) == 1.0);

  CHECK(purity(kA, kA) == 1.0);
  CHECK(purity(std::vector<int>(4, 0), kA) == 0.5);
  CHECK(purity(std::vector<int>{0, 0, 0, 1}, std::vector<int>{0, 0, 1, 1}) == 0.75);

  const PairMetrics same = pair_metrics(kA, kA);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f_score == 1.0);
  CHECK(same.ari == 1.0);

  const PairMetrics cross = pair_metrics(kA, kB);
  CHECK(cross.precision == 0.0);
  CHECK(cross.recall == 0.0);
  CHECK(cross.f_score == 0.0);
  CHECK(cross.ari == -0.5);
}

TEST_CASE("length mismatches are rejected") {
  const std::vector<int> shorter{0, 1, 0};
  CHECK_THROWS_AS(accuracy(kA, shorter), InvalidInput);
  CHECK_THROWS_AS(nmi(kA, shorter), InvalidInput);
  CHECK_THROWS_AS(purity(kA, shorter), InvalidInput);
  CHECK_THROWS_AS(pair_metrics(kA, shorter), InvalidInput);
  CHECK_THROWS_AS(evaluate(kA, shorter), InvalidInput);
}

TEST_CASE("pair metrics equal the pairwise loop") {
  gen::Rng rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    const auto n = static_cast<std::size_t>(gen::uniform_int(rng, 2, 200));
    const auto pred = gen::random_labels(rng, n, static_cast<int>(gen::uniform_int(rng, 1, 6)));
    const auto truth = gen::random_labels(rng, n, static_cast<int>(gen::uniform_int(rng, 1, 6)));
    const PairMetrics pm = pair_metrics(pred, truth);
    const oracle::PairCounts c = oracle::pair_loop(pred, truth);
    const double precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    const double recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    CHECK(pm.precision == precision);
    CHECK(pm.recall == recall);
    if (precision > 0.0 && recall > 0.0) {
      CHECK(pm.f_score == 2.0 * precision * recall / (precision + recall));
    }
    // Adjusted index from the pair-loop counts, cross-multiplied so the
    // numerator and denominator are exact, then the Hubert-Arabie form.
    const long long same_pred = c.tp + c.fp, same_truth = c.tp + c.fn, all = c.tp + c.fp + c.fn + c.tn;
    const long long num = 2 * (all * c.tp - same_pred * same_truth);
    const long long den = all * (same_pred + same_truth) - 2 * same_pred * same_truth;
    if (den != 0) {
      CHECK(pm.ari == static_cast<double>(num) / static_cast<double>(den));
      CHECK(std::abs(pm.ari - oracle::pair_loop_ari(pred, truth)) < 1e-12);
    }
  }
}

TEST_CASE("accuracy equals the best permutation") {
  gen::Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const auto n = static_cast<std::size_t>(gen::uniform_int(rng, 1, 60));
    const auto pred = gen::random_labels(rng, n, static_cast<int>(gen::uniform_int(rng, 1, 6)));
    const auto truth = gen::random_labels(rng, n, static_cast<int>(gen::uniform_int(rng, 1, 6)));
    CHECK(accuracy(pred, truth) == doctest::Approx(oracle::brute_force_accuracy(pred, truth)).epsilon(1e-15));
  }
}

TEST_CASE("metrics are invariant under relabeling and stay in range") {
  gen::Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    const auto n = static_cast<std::size_t>(gen::uniform_int(rng, 2, 80));
    const int kp = static_cast<int>(gen::uniform_int(rng, 1, 5)), kt = static_cast<int>(gen::uniform_int(rng, 1, 5));
    const auto pred = gen::random_labels(rng, n, kp);
    const auto truth = gen::random_labels(rng, n, kt);
    std::vector<int> mp(static_cast<std::size_t>(kp)), mt(static_cast<std::size_t>(kt));
    for (int i = 0; i < kp; ++i) mp[i] = 10 + i;
    for (int i = 0; i < kt; ++i) mt[i] = i;
    std::shuffle(mp.begin(), mp.end(), rng);
    std::shuffle(mt.begin(), mt.end(), rng);
    const MetricsReport a = evaluate(pred, truth);
    const MetricsReport b = evaluate(relabel(pred, mp), relabel(truth, mt));
    CHECK(a.acc == doctest::Approx(b.acc).epsilon(1e-14));
    CHECK(a.nmi == doctest::Approx(b.nmi).epsilon(1e-12));
    CHECK(a.purity == doctest::Approx(b.purity).epsilon(1e-14));
    CHECK(a.precision == b.precision);
    CHECK(a.recall == b.recall);
    CHECK(a.f_score == b.f_score);
    CHECK(a.ari == b.ari);
    for (const double v : {a.acc, a.nmi, a.purity, a.precision, a.recall, a.f_score}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-15);
    }
    CHECK(a.ari >= -1.0);
    CHECK(a.ari <= 1.0);
  }
}

TEST_CASE("ARI of independent labelings averages to zero") {
  gen::Rng rng(5);
  double sum = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    sum += pair_metrics(gen::random_labels(rng, 10000, 5), gen::random_labels(rng, 10000, 5)).ari;
  }
  CHECK(std::abs(sum / 100.0) <= 0.01);
}
