#include <doctest.h>

#include <cmath>
#include <random>

#include "check_error.hpp"
#include "oracles.hpp"
#include "snmf/admm.hpp"
#include "snmf/factor_init.hpp"

using snmf::AdmmConfig;
using snmf::AdmmState;
using snmf::DenseMatrix;
using snmf::ErrorCode;
using snmf::SparseSymMatrix;

namespace {

DenseMatrix planted_dense(std::size_t n, std::size_t k) {
  const DenseMatrix l = oracle::block_indicator(n, k);
  return oracle::naive_mul(l, oracle::naive_transpose(l));
}

// D^{-1/2} L* L*^T D^{-1/2}: still exactly rank K and nonnegative, at the
// unit spectral scale of a normalized graph.
DenseMatrix normalized_planted_dense(std::size_t n, std::size_t k) {
  DenseMatrix a = planted_dense(n, k);
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i] += a(i, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) /= std::sqrt(d[i] * d[j]);
  return a;
}

double max_state_change(const AdmmState& a, const AdmmState& b) {
  return std::max({oracle::fro_diff(a.x, b.x), oracle::fro_diff(a.y, b.y),
                   oracle::fro_diff(a.l, b.l), oracle::fro_diff(a.lambda, b.lambda),
                   oracle::fro_diff(a.gamma, b.gamma)});
}

}  // namespace

TEST_CASE("update_split: symmetric cancellation") {
  const auto a = SparseSymMatrix::identity(2);
  const DenseMatrix i2 = DenseMatrix::identity(2);
  const DenseMatrix x = snmf::update_split(a, i2, i2, DenseMatrix(2, 2), 1.0);
  CHECK(oracle::fro_diff(x, i2) < 1e-15);
}

TEST_CASE("update_split: large rho returns l") {
  std::mt19937_64 rng(41);
  const auto a = SparseSymMatrix::from_dense(oracle::random_sparse_symmetric(10, 0.3, rng));
  const DenseMatrix y = oracle::random_matrix(10, 3, rng, 0.0, 1.0);
  const DenseMatrix l = oracle::random_matrix(10, 3, rng, 0.0, 1.0);
  const DenseMatrix x = snmf::update_split(a, y, l, DenseMatrix(10, 3), 1e6);
  CHECK(oracle::fro_diff(x, l) / oracle::fro(l) < 1e-4);
}

TEST_CASE("update_split: explicit-inverse oracle and stationarity") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = trial < 25 ? 6 : 15;
    const std::size_t k = trial < 25 ? 2 : 4;
    const DenseMatrix dense_a = oracle::random_sparse_symmetric(n, 0.4, rng);
    const auto a = SparseSymMatrix::from_dense(dense_a);
    const DenseMatrix y = oracle::random_matrix(n, k, rng);
    const DenseMatrix l = oracle::random_matrix(n, k, rng, 0.0, 1.0);
    const DenseMatrix dual = oracle::random_matrix(n, k, rng);
    const double rho = 0.1;
    const DenseMatrix x = snmf::update_split(a, y, l, dual, rho);

    DenseMatrix rhs = oracle::naive_mul(dense_a, y);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) rhs(i, j) += rho * l(i, j) + dual(i, j);
    DenseMatrix system = oracle::naive_mul(oracle::naive_transpose(y), y);
    for (std::size_t j = 0; j < k; ++j) system(j, j) += rho;

    const DenseMatrix expected = oracle::naive_mul(rhs, oracle::gauss_jordan_inverse(system));
    CHECK(oracle::fro_diff(x, expected) / oracle::fro(expected) < 1e-10);
    CHECK(oracle::fro_diff(oracle::naive_mul(x, system), rhs) / oracle::fro(rhs) < 1e-10);
  }
}

TEST_CASE("update_l: formula") {
  const DenseMatrix x{{1.0, -2.0}, {0.5, 3.0}};
  const DenseMatrix zero(2, 2);
  CHECK(snmf::update_l(x, x, zero, zero, 0.1) == DenseMatrix{{1.0, 0.0}, {0.5, 3.0}});
  CHECK(snmf::update_l(DenseMatrix{{2}}, DenseMatrix{{0}}, DenseMatrix{{1}}, DenseMatrix{{-1}},
                       1.0) == DenseMatrix{{1}});
  // 1 - 10 + 1 - 10 < 0 projects to exactly 0.
  CHECK(snmf::update_l(DenseMatrix{{1}}, DenseMatrix{{1}}, DenseMatrix{{1}}, DenseMatrix{{1}}, 0.1)(
            0, 0) == 0.0);
}

TEST_CASE("update_duals: ascent steps") {
  AdmmState s = AdmmState::from_init(DenseMatrix{{1, 2}, {3, 4}});
  s.lambda = DenseMatrix{{0.5, 0}, {0, 0}};
  const AdmmState same = snmf::update_duals(s, 0.1);
  CHECK(same.lambda == s.lambda);
  CHECK(same.gamma == s.gamma);

  AdmmState r = AdmmState::from_init(DenseMatrix(2, 2, 1.0));
  r.x = DenseMatrix(2, 2, 0.0);
  const AdmmState once = snmf::update_duals(r, 0.1);
  CHECK(oracle::fro_diff(once.lambda, DenseMatrix(2, 2, 0.1)) < 1e-15);
  CHECK(once.gamma == DenseMatrix(2, 2));
  CHECK(once.x == r.x);
  CHECK(once.l == r.l);
  const AdmmState twice = snmf::update_duals(once, 0.1);
  CHECK(oracle::fro_diff(twice.lambda, DenseMatrix(2, 2, 0.2)) < 1e-15);
}

TEST_CASE("solve_admm: planted factor recovery") {
  const auto a = SparseSymMatrix::from_dense(planted_dense(30, 3));
  AdmmConfig cfg;
  cfg.epsilon = 1e-7;
  cfg.max_iter = 20000;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto r = snmf::solve_admm(a, 3, cfg);
    CHECK(r.stop == snmf::AdmmStop::Converged);
    CHECK(r.snmf_objective <= 1e-6);
    CHECK(r.gap_x <= 1e-4);
    CHECK(r.gap_y <= 1e-4);
    CHECK(r.kkt.norm <= 1e-4);
  }
}

TEST_CASE("solve_admm: two-vertex graph with K = 1") {
  const auto a = SparseSymMatrix::from_dense(DenseMatrix{{0, 1}, {1, 0}});
  AdmmConfig cfg;
  cfg.epsilon = 1e-9;
  cfg.max_iter = 100000;
  cfg.seed = 3;
  const auto r = snmf::solve_admm(a, 1, cfg);
  // min over gamma of ||A - gamma 11^T||^2 = 2 gamma^2 + 2 (1 - gamma)^2 is at gamma = 1/2.
  double best_gamma = 0.0, best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100000; ++i) {
    const double g = i * 1e-5;
    const double f = 2 * g * g + 2 * (1 - g) * (1 - g);
    if (f < best_f) best_f = f, best_gamma = g;
  }
  CHECK(r.l(0, 0) == doctest::Approx(std::sqrt(best_gamma)).epsilon(1e-4));
  CHECK(r.l(1, 0) == doctest::Approx(r.l(0, 0)).epsilon(1e-6));
  CHECK(r.snmf_objective == doctest::Approx(best_f).epsilon(1e-6));
}

TEST_CASE("solve_admm: planted init is a near fixed point") {
  const auto a = SparseSymMatrix::from_dense(planted_dense(30, 3));
  AdmmConfig cfg;
  cfg.max_iter = 1;
  const auto r = snmf::solve_admm(a, 3, cfg, oracle::block_indicator(30, 3));
  REQUIRE(r.objective_trace.size() == 1);
  CHECK(r.objective_trace.front() <= 1e-8);
}

TEST_CASE("admm_step: L stays nonnegative") {
  std::mt19937_64 rng(43);
  const auto a = SparseSymMatrix::from_dense(oracle::random_sparse_symmetric(20, 0.3, rng));
  AdmmState s = AdmmState::from_init(snmf::random_factor(a, 3, 9));
  for (int i = 0; i < 300; ++i) {
    s = snmf::admm_step(a, std::move(s), 0.1);
    for (double v : s.l.values()) REQUIRE(v >= 0.0);
  }
  CHECK(s.iteration == 300);
}

TEST_CASE("solve_admm: the initial X does not enter the iteration") {
  // Algorithm order is X <- f(Y), Y <- f(X), so only Y^0 and L^0 matter.
  std::mt19937_64 rng(44);
  const auto a = SparseSymMatrix::from_dense(oracle::random_sparse_symmetric(25, 0.3, rng));
  const DenseMatrix init = snmf::random_factor(a, 3, 11);
  AdmmState first = AdmmState::from_init(init);
  AdmmState second = AdmmState::from_init(init);
  second.x = snmf::random_factor(a, 3, 12);
  AdmmConfig cfg;
  cfg.max_iter = 200;
  const auto r1 = snmf::solve_admm(a, cfg, first);
  const auto r2 = snmf::solve_admm(a, cfg, second);
  CHECK(r1.objective_trace == r2.objective_trace);
}

TEST_CASE("solve_admm: primal gaps within 10 epsilon on normalized planted instances") {
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{30, 3}, {40, 4}, {24, 2}}) {
    const auto a = SparseSymMatrix::from_dense(normalized_planted_dense(n, k));
    for (double eps : {1e-5, 1e-7}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        AdmmConfig cfg;
        cfg.epsilon = eps;
        cfg.seed = seed;
        cfg.max_iter = 20000;
        const auto r = snmf::solve_admm(a, k, cfg);
        REQUIRE(r.stop == snmf::AdmmStop::Converged);
        CHECK(r.gap_x >= 0.0);
        CHECK(r.gap_x <= 10 * eps);
        CHECK(r.gap_y <= 10 * eps);
      }
    }
  }
}

TEST_CASE("solve_admm: duals match the stationarity terms at exit") {
  const DenseMatrix dense_a = planted_dense(30, 3);
  const auto a = SparseSymMatrix::from_dense(dense_a);
  AdmmConfig cfg;
  cfg.seed = 2;
  const auto r = snmf::solve_admm(a, 3, cfg);
  const double scale = std::max(1.0, oracle::fro(dense_a));
  const auto& s = r.final_state;
  const auto residual = [&](const DenseMatrix& u, const DenseMatrix& v, const DenseMatrix& m) {
    DenseMatrix t = oracle::naive_mul(u, oracle::naive_transpose(v));
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) -= dense_a(i, j);
    return oracle::fro_diff(oracle::naive_mul(t, v), m);
  };
  CHECK(residual(s.x, s.y, s.lambda) <= r.kkt.norm * scale * (1 + 1e-9));
  CHECK(residual(s.y, s.x, s.gamma) <= r.kkt.norm * scale * (1 + 1e-9));
  CHECK(r.kkt.norm <= 1e-4);
}

TEST_CASE("solve_admm: fixed point implies small KKT residual") {
  const auto a = SparseSymMatrix::from_dense(planted_dense(30, 3));
  AdmmState s = AdmmState::from_init(snmf::random_factor(a, 3, 7));
  double change = 1.0;
  for (int i = 0; i < 20000 && change > 1e-10; ++i) {
    AdmmState next = snmf::admm_step(a, s, 0.1);
    change = max_state_change(next, s);
    s = std::move(next);
  }
  REQUIRE(change <= 1e-10);
  CHECK(snmf::kkt_residual(a, s).norm <= 1e-8);
}

TEST_CASE("solve_admm: iteration cap is soft") {
  std::mt19937_64 rng(45);
  const auto a = SparseSymMatrix::from_dense(oracle::random_sparse_symmetric(20, 0.3, rng));
  AdmmConfig cfg;
  cfg.max_iter = 3;
  const auto r = snmf::solve_admm(a, 2, cfg);
  CHECK(r.hit_iteration_cap());
  CHECK(r.iterations == 3);
  CHECK(r.objective_trace.size() == 3);
  CHECK(r.l.rows() == 20);
}

TEST_CASE("solve_admm: argument errors") {
  const auto a = SparseSymMatrix::from_dense(planted_dense(6, 2));
  CHECK(code_of([&] { snmf::solve_admm(a, 6, AdmmConfig{}); }) == ErrorCode::InvalidK);
  AdmmConfig bad;
  bad.rho = -1.0;
  CHECK(code_of([&] { snmf::solve_admm(a, 2, bad); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { snmf::solve_admm(a, 2, AdmmConfig{}, DenseMatrix(5, 2)); }) ==
        ErrorCode::DimensionMismatch);
}
