#ifndef SNMF_ADMM_HPP
#define SNMF_ADMM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "snmf/admm_state.hpp"
#include "snmf/kkt.hpp"
#include "snmf/linalg.hpp"

namespace snmf {

struct AdmmConfig {
  double rho = 0.1;
  double epsilon = 1e-5;
  std::size_t max_iter = 2000;
  std::uint64_t seed = 0;

  void validate() const;
};

// Exact minimizer over one split of the augmented Lagrangian:
//   (A V + rho L + M)(V^T V + rho I)^{-1}
// where V is the other split and M the matching multiplier. Solved through a
// Cholesky factor of V^T V + rho I and two triangular sweeps.
DenseMatrix update_split(const SparseSymMatrix& a, const DenseMatrix& other, const DenseMatrix& l,
                         const DenseMatrix& dual, double rho);

// 1/2 [X - Lambda/rho + Y - Gamma/rho]^+
DenseMatrix update_l(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& lambda,
                     const DenseMatrix& gamma, double rho);

// Lambda += rho (L - X), Gamma += rho (L - Y).
AdmmState update_duals(AdmmState state, double rho);

// One full iteration in the order X, Y (against the fresh X), L, duals.
AdmmState admm_step(const SparseSymMatrix& a, AdmmState state, double rho);

enum class AdmmStop { Converged, MaxIterations };

struct AdmmResult {
  DenseMatrix l;
  DenseMatrix x;
  DenseMatrix y;
  AdmmState final_state;
  std::size_t iterations = 0;
  AdmmStop stop = AdmmStop::MaxIterations;
  double initial_objective = 0.0;
  std::vector<double> objective_trace;  // ||A - L L^T||_F^2 after each iteration
  double gap_x = 0.0;                   // ||L - X||_F / ||L||_F
  double gap_y = 0.0;                   // ||L - Y||_F / ||L||_F
  double snmf_objective = 0.0;
  KktResidual kkt;
  double wall_seconds = 0.0;

  bool hit_iteration_cap() const noexcept { return stop == AdmmStop::MaxIterations; }
};

// Running out of iterations is not an error: the result is returned with
// stop == MaxIterations and the KKT residual says how good it is.
AdmmResult solve_admm(const SparseSymMatrix& a, std::size_t k, const AdmmConfig& cfg,
                      const std::optional<DenseMatrix>& init = std::nullopt);
AdmmResult solve_admm(const SparseSymMatrix& a, const AdmmConfig& cfg, AdmmState start);

}  // namespace snmf

#endif  // SNMF_ADMM_HPP
