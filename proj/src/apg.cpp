#include "snmf/apg.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "snmf/factor_init.hpp"

namespace snmf {

void ApgConfig::validate() const {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidConfig, "apg rho must be > 0");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidConfig, "apg epsilon must be > 0");
  if (max_outer < 1 || max_inner < 1) {
    throw Error(ErrorCode::InvalidConfig, "apg iteration caps must be >= 1");
  }
}

ApgBlockState ApgBlockState::start(DenseMatrix iterate) {
  ApgBlockState s;
  s.momentum = iterate;
  s.iterate = std::move(iterate);
  s.counter = 0;
  return s;
}

double lipschitz_step(const DenseMatrix& gram, double rho) {
  DenseMatrix h = gram;
  add_to_diagonal(h, rho);
  return 1.0 / spectral_norm(h);
}

ApgBlockCache make_block_cache(const DenseMatrix& fixed, const SparseSymMatrix& a, double rho,
                               double step) {
  DenseMatrix affine = gram(fixed);
  affine *= -step;
  add_to_diagonal(affine, 1.0 - step * rho);

  // A is symmetric, so (A^T + rho I) F for the Z block is the same product.
  DenseMatrix offset = sparse_dense_mul(a, fixed);
  offset += rho * fixed;
  offset *= step;
  return ApgBlockCache{std::move(affine), std::move(offset)};
}

ApgBlockState apg_block_update(const ApgBlockState& state, const ApgBlockCache& cache) {
  if (!state.momentum.same_shape(cache.offset) || cache.affine.rows() != state.momentum.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "apg_block_update: block and cache shapes differ");
  }
  DenseMatrix next = matmul(state.momentum, cache.affine);
  next += cache.offset;
  next = pos_part(std::move(next));
  if (!next.all_finite()) throw Error(ErrorCode::NonFinite, "apg iterate overflowed");

  const double coeff = static_cast<double>(state.counter) / static_cast<double>(state.counter + 3);
  DenseMatrix momentum = next - state.iterate;
  momentum *= coeff;
  momentum += next;

  return ApgBlockState{std::move(next), std::move(momentum), state.counter + 1};
}

ApgBlockState apg_block_update(const ApgBlockState& state, const DenseMatrix& fixed,
                               const SparseSymMatrix& a, double rho, double step) {
  return apg_block_update(state, make_block_cache(fixed, a, rho, step));
}

double qpm_objective(const SparseSymMatrix& a, const DenseMatrix& l, const DenseMatrix& z,
                     double rho) {
  const double d = frobenius_distance(l, z);
  return factorization_residual_squared(a, a.frobenius_norm_squared(), l, z) + rho * d * d;
}

DenseMatrix qpm_gradient_l(const SparseSymMatrix& a, const DenseMatrix& l, const DenseMatrix& z,
                           double rho) {
  DenseMatrix g = matmul(l, gram(z));
  g -= sparse_dense_mul(a, z);
  g += rho * (l - z);
  g *= 2.0;
  return g;
}

namespace {

struct InnerOutcome {
  DenseMatrix iterate;
  std::size_t steps = 0;
};

// Runs one block's accelerated inner loop until the relative change of the
// iterate drops to epsilon or the cap is hit. The first step always runs.
InnerOutcome run_inner_loop(DenseMatrix start, const ApgBlockCache& cache, const ApgConfig& cfg) {
  ApgBlockState state = ApgBlockState::start(std::move(start));
  std::size_t steps = 0;
  while (steps < cfg.max_inner) {
    ApgBlockState next = apg_block_update(state, cache);
    ++steps;
    const double change = relative_change(next.iterate, state.iterate);
    state = std::move(next);
    if (change <= cfg.epsilon) break;
  }
  return InnerOutcome{std::move(state.iterate), steps};
}

}  // namespace

ApgResult solve_apg(const SparseSymMatrix& a, std::size_t k, const ApgConfig& cfg,
                    const std::optional<DenseMatrix>& init) {
  cfg.validate();
  check_cluster_count(a, k);
  const auto t0 = std::chrono::steady_clock::now();

  DenseMatrix l = init ? *init : random_factor(a, k, cfg.seed);
  if (l.rows() != a.order() || l.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "apg init must be n x k");
  }
  if (!l.all_finite()) throw Error(ErrorCode::NonFinite, "apg init");
  l = pos_part(std::move(l));
  DenseMatrix z = l;

  const double a_norm_sq = a.frobenius_norm_squared();
  const auto objective = [&](const DenseMatrix& lm, const DenseMatrix& zm) {
    const double d = frobenius_distance(lm, zm);
    return factorization_residual_squared(a, a_norm_sq, lm, zm) + cfg.rho * d * d;
  };

  ApgResult result;
  result.initial_objective = objective(l, z);

  for (std::size_t outer = 0; outer < cfg.max_outer; ++outer) {
    const DenseMatrix l_prev = l;
    const DenseMatrix z_prev = z;

    // L block, with Z held at its previous value.
    const double alpha = lipschitz_step(gram(z), cfg.rho);
    ApgInnerRecord l_record;
    l_record.objective_before = objective(l, z);
    InnerOutcome l_out = run_inner_loop(l, make_block_cache(z, a, cfg.rho, alpha), cfg);
    l = std::move(l_out.iterate);
    l_record.steps = l_out.steps;
    l_record.objective_after = objective(l, z);

    // Z block, against the fresh L.
    const double beta = lipschitz_step(gram(l), cfg.rho);
    ApgInnerRecord z_record;
    z_record.objective_before = l_record.objective_after;
    InnerOutcome z_out = run_inner_loop(z, make_block_cache(l, a, cfg.rho, beta), cfg);
    z = std::move(z_out.iterate);
    z_record.steps = z_out.steps;
    z_record.objective_after = objective(l, z);

    result.inner_steps += l_record.steps + z_record.steps;
    result.inner_loops.push_back(l_record);
    result.inner_loops.push_back(z_record);
    result.objective_trace.push_back(z_record.objective_after);
    result.outer_iterations = outer + 1;

    if (!std::isfinite(z_record.objective_after)) {
      throw Error(ErrorCode::NonFinite,
                  "apg objective at outer iteration " + std::to_string(outer + 1));
    }
    if (relative_change(l, l_prev) + relative_change(z, z_prev) <= cfg.epsilon) {
      result.stop = ApgStop::Converged;
      break;
    }
  }

  const double l_norm = frobenius_norm(l);
  const double gap = frobenius_distance(l, z);
  if (l_norm > 0.0) {
    result.split_gap = gap / l_norm;
  } else {
    result.split_gap = gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  result.snmf_objective = factorization_residual_squared(a, a_norm_sq, l, l);
  result.l = std::move(l);
  result.z = std::move(z);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace snmf
