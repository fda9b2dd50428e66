#include "snmf/admm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "snmf/factor_init.hpp"

namespace snmf {

void AdmmConfig::validate() const {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidConfig, "admm rho must be > 0");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidConfig, "admm epsilon must be > 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidConfig, "admm max_iter must be >= 1");
}

AdmmState AdmmState::from_init(const DenseMatrix& init) {
  AdmmState s;
  s.x = init;
  s.y = init;
  s.l = init;
  s.lambda = DenseMatrix(init.rows(), init.cols());
  s.gamma = DenseMatrix(init.rows(), init.cols());
  return s;
}

DenseMatrix update_split(const SparseSymMatrix& a, const DenseMatrix& other, const DenseMatrix& l,
                         const DenseMatrix& dual, double rho) {
  if (!other.same_shape(l) || !other.same_shape(dual) || other.rows() != a.order()) {
    throw Error(ErrorCode::DimensionMismatch, "update_split: operand shapes disagree");
  }
  DenseMatrix system = gram(other);
  add_to_diagonal(system, rho);
  const CholeskyFactor c = cholesky_factor(system);

  DenseMatrix rhs = sparse_dense_mul(a, other);
  rhs += rho * l;
  rhs += dual;
  return cholesky_solve_right(c, rhs);
}

DenseMatrix update_l(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& lambda,
                     const DenseMatrix& gamma, double rho) {
  if (!x.same_shape(y) || !x.same_shape(lambda) || !x.same_shape(gamma)) {
    throw Error(ErrorCode::DimensionMismatch, "update_l: operand shapes disagree");
  }
  DenseMatrix out(x.rows(), x.cols());
  const double inv_rho = 1.0 / rho;
  const auto xv = x.values();
  const auto yv = y.values();
  const auto lv = lambda.values();
  const auto gv = gamma.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    const double v = xv[i] - inv_rho * lv[i] + yv[i] - inv_rho * gv[i];
    ov[i] = v > 0.0 ? 0.5 * v : 0.0;
  }
  return out;
}

AdmmState update_duals(AdmmState state, double rho) {
  state.lambda += rho * (state.l - state.x);
  state.gamma += rho * (state.l - state.y);
  return state;
}

AdmmState admm_step(const SparseSymMatrix& a, AdmmState state, double rho) {
  state.x = update_split(a, state.y, state.l, state.lambda, rho);
  state.y = update_split(a, state.x, state.l, state.gamma, rho);
  state.l = update_l(state.x, state.y, state.lambda, state.gamma, rho);
  state = update_duals(std::move(state), rho);
  state.iteration += 1;
  return state;
}

AdmmResult solve_admm(const SparseSymMatrix& a, std::size_t k, const AdmmConfig& cfg,
                      const std::optional<DenseMatrix>& init) {
  check_cluster_count(a, k);
  DenseMatrix start = init ? *init : random_factor(a, k, cfg.seed);
  if (start.rows() != a.order() || start.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "admm init must be n x k");
  }
  return solve_admm(a, cfg, AdmmState::from_init(pos_part(std::move(start))));
}

AdmmResult solve_admm(const SparseSymMatrix& a, const AdmmConfig& cfg, AdmmState state) {
  cfg.validate();
  check_cluster_count(a, state.l.cols());
  for (const DenseMatrix* m : {&state.x, &state.y, &state.l, &state.lambda, &state.gamma}) {
    if (m->rows() != a.order() || m->cols() != state.l.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "admm state must be n x k throughout");
    }
    if (!m->all_finite()) throw Error(ErrorCode::NonFinite, "admm initial state");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const double a_norm_sq = a.frobenius_norm_squared();

  AdmmResult result;
  result.initial_objective = factorization_residual_squared(a, a_norm_sq, state.l, state.l);

  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    const DenseMatrix x_prev = state.x;
    const DenseMatrix y_prev = state.y;
    const DenseMatrix l_prev = state.l;
    state = admm_step(a, std::move(state), cfg.rho);

    if (!state.x.all_finite() || !state.y.all_finite() || !state.lambda.all_finite() ||
        !state.gamma.all_finite()) {
      throw Error(ErrorCode::NonFinite, "admm iterate at iteration " + std::to_string(it + 1));
    }
    result.objective_trace.push_back(
        factorization_residual_squared(a, a_norm_sq, state.l, state.l));
    result.iterations = it + 1;

    const double change = relative_change(state.x, x_prev) + relative_change(state.y, y_prev) +
                          relative_change(state.l, l_prev);
    if (change <= cfg.epsilon) {
      result.stop = AdmmStop::Converged;
      break;
    }
  }

  const double l_norm = frobenius_norm(state.l);
  const auto gap = [&](const DenseMatrix& m) {
    const double d = frobenius_distance(state.l, m);
    if (l_norm > 0.0) return d / l_norm;
    return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  result.gap_x = gap(state.x);
  result.gap_y = gap(state.y);
  result.snmf_objective =
      result.objective_trace.empty() ? result.initial_objective : result.objective_trace.back();
  result.kkt = kkt_residual(a, state);
  result.l = state.l;
  result.x = state.x;
  result.y = state.y;
  result.final_state = std::move(state);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace snmf
