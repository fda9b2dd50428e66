#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "check_error.hpp"
#include "oracles.hpp"
#include "snmf/eval.hpp"

using snmf::DenseMatrix;
using snmf::ErrorCode;
using snmf::SyntheticKind;
using snmf::SyntheticSpec;

namespace {

std::vector<int> random_labels(std::size_t n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(0, k - 1);
  std::vector<int> v(n);
  for (int& x : v) x = u(rng);
  return v;
}

std::vector<int> relabel(const std::vector<int>& labels, int k, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = perm[static_cast<std::size_t>(labels[i])];
  return out;
}

double ac(const std::vector<int>& pred, const std::vector<int>& gold) {
  return snmf::best_mapping(pred, gold).ac;
}

}  // namespace

TEST_CASE("assign_clusters: argmax with lowest-index ties") {
  CHECK(snmf::assign_clusters(DenseMatrix{{0.9, 0.1}, {0.2, 0.8}}).labels ==
        std::vector<int>{0, 1});
  CHECK(snmf::assign_clusters(DenseMatrix{{0.5, 0.5, 0.5}}).labels == std::vector<int>{0});
  CHECK(snmf::assign_clusters(DenseMatrix{{0.1, 0.7, 0.7}}).labels == std::vector<int>{1});
  const auto one = snmf::assign_clusters(DenseMatrix(4, 1, 2.0));
  CHECK(one.labels == std::vector<int>(4, 0));
  CHECK(one.k == 1);
}

TEST_CASE("best_mapping: identity and relabeling give 100") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gold = random_labels(40, 5, rng);
    const auto report = snmf::best_mapping(gold, gold);
    CHECK(report.ac == 100.0);
    CHECK(report.matched == 40);
    CHECK(ac(relabel(gold, 5, rng), gold) == 100.0);
  }
}

TEST_CASE("best_mapping: hand example") {
  // Cluster 0 holds {a, a, b}, cluster 1 holds {b, b, a}: best map 0->a, 1->b.
  const std::vector<int> pred{0, 0, 0, 1, 1, 1};
  const std::vector<int> gold{7, 7, 9, 9, 9, 7};
  const auto r = snmf::best_mapping(pred, gold);
  CHECK(r.matched == 4);
  CHECK(r.ac == doctest::Approx(400.0 / 6.0));
  CHECK(r.mapping == std::vector<std::pair<int, int>>{{0, 7}, {1, 9}});
}

TEST_CASE("best_mapping: equals exhaustive permutations for K <= 6") {
  std::mt19937_64 rng(62);
  std::uniform_int_distribution<int> pick_k(1, 6);
  std::uniform_int_distribution<std::size_t> pick_n(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = pick_k(rng);
    const std::size_t n = trial < 100 ? 6 : pick_n(rng);
    const auto pred = random_labels(n, k, rng);
    const auto gold = random_labels(n, k, rng);
    const double expected = oracle::exhaustive_accuracy(pred, gold, k);
    const auto r = snmf::best_mapping(pred, gold);
    CHECK(r.ac == expected);
    CHECK(r.ac == 100.0 * static_cast<double>(r.matched) / static_cast<double>(n));
  }
}

TEST_CASE("best_mapping: symmetry, bounds and relabeling invariance") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + trial % 6;
    const auto pred = random_labels(30, k, rng);
    const auto gold = random_labels(30, k, rng);
    const double base = ac(pred, gold);
    CHECK(base >= 0.0);
    CHECK(base <= 100.0);
    CHECK(ac(gold, pred) == base);
    CHECK(ac(relabel(pred, k, rng), gold) == base);
    CHECK(ac(pred, relabel(gold, k, rng)) == base);
  }
}

TEST_CASE("best_mapping: unequal label counts are padded") {
  const std::vector<int> pred{0, 0, 1, 1, 2, 2};
  const std::vector<int> gold{0, 0, 1, 1, 1, 1};
  const auto r = snmf::best_mapping(pred, gold);
  CHECK(r.matched == 4);
  CHECK(r.mapping.size() == 2);
  CHECK(ac(gold, pred) == r.ac);
  CHECK(ac({}, {}) == 100.0);
  CHECK(code_of([] { snmf::best_mapping(std::vector<int>{0, 1}, std::vector<int>{0}); }) ==
        ErrorCode::LengthMismatch);
}

TEST_CASE("solve_assignment: minimum-cost permutation") {
  const DenseMatrix cost{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  // Optimum 1 + 2 + 2 = 5 via rows -> cols {1, 0, 2}.
  CHECK(snmf::solve_assignment(cost) == std::vector<std::size_t>{1, 0, 2});
}

TEST_CASE("generate: blobs are separated by construction") {
  SyntheticSpec spec;
  spec.k = 3;
  spec.per_cluster = 100;
  spec.noise = 0.05 * snmf::kBlobCenterSpacing;
  spec.seed = 1;
  const auto data = snmf::generate(spec);
  REQUIRE(data.size() == 300);
  REQUIRE(data.labels);
  CHECK(snmf::kBlobCenterSpacing >= 10 * spec.noise);
  // Empirical centers sit within a few noise widths of unit-spaced vertices.
  DenseMatrix mean(3, data.dims());
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t d = 0; d < data.dims(); ++d)
      mean(static_cast<std::size_t>((*data.labels)[i]), d) += data.points(i, d) / 100.0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < data.dims(); ++d)
        d2 += (mean(a, d) - mean(b, d)) * (mean(a, d) - mean(b, d));
      CHECK(std::sqrt(d2) == doctest::Approx(snmf::kBlobCenterSpacing).epsilon(0.05));
      CHECK(std::sqrt(d2) >= 10 * spec.noise);
    }
}

TEST_CASE("generate: rings are radially ordered") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::Rings;
  spec.k = 2;
  spec.noise = 0.1;  // ring gap is 1
  spec.seed = 4;
  const auto data = snmf::generate(spec);
  double max_inner = 0.0, min_outer = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = std::hypot(data.points(i, 0), data.points(i, 1));
    if ((*data.labels)[i] == 0)
      max_inner = std::max(max_inner, r);
    else
      min_outer = std::min(min_outer, r);
  }
  CHECK(max_inner < min_outer);
}

TEST_CASE("generate: deterministic per seed") {
  for (auto kind : {SyntheticKind::Blobs, SyntheticKind::Rings, SyntheticKind::Moons}) {
    SyntheticSpec spec;
    spec.kind = kind;
    spec.k = 2;
    spec.seed = 17;
    const auto a = snmf::generate(spec);
    const auto b = snmf::generate(spec);
    CHECK(a.points == b.points);
    CHECK(a.labels == b.labels);
    spec.seed = 18;
    CHECK_FALSE(snmf::generate(spec).points == a.points);
  }
  SyntheticSpec moons;
  moons.kind = SyntheticKind::Moons;
  moons.k = 3;
  CHECK(code_of([&] { snmf::generate(moons); }) == ErrorCode::InvalidConfig);
  CHECK(snmf::parse_synthetic_kind("rings") == SyntheticKind::Rings);
  CHECK(snmf::to_string(SyntheticKind::Moons) == "moons");
  CHECK(code_of([] { snmf::parse_synthetic_kind("spirals"); }) == ErrorCode::InvalidConfig);
}
