#ifndef SNMF_APG_HPP
#define SNMF_APG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "snmf/linalg.hpp"

namespace snmf {

// Alternating accelerated proximal gradient on the quadratic-penalty
// relaxation
//   minimize ||A - L Z^T||_F^2 + rho ||L - Z||_F^2   s.t. L, Z >= 0.

struct ApgConfig {
  double rho = 1.0;
  double epsilon = 1e-5;
  std::size_t max_outer = 500;
  std::size_t max_inner = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

// One block (L with momentum Phi, or Z with momentum Psi) of the inner loop.
struct ApgBlockState {
  DenseMatrix iterate;
  DenseMatrix momentum;
  std::size_t counter = 0;

  // Fresh inner loop: momentum starts at the iterate, counter at zero.
  static ApgBlockState start(DenseMatrix iterate);
};

// The two matrices of the collected-terms step that depend only on the fixed
// block:  affine = (1 - step*rho) I - step * F^T F  and  offset = step (A + rho I) F.
// Built once per outer iteration and reused by every inner step.
struct ApgBlockCache {
  DenseMatrix affine;  // K x K
  DenseMatrix offset;  // n x K
};

ApgBlockCache make_block_cache(const DenseMatrix& fixed, const SparseSymMatrix& a, double rho,
                               double step);

// 1 / ||G + rho I||_2.
double lipschitz_step(const DenseMatrix& gram, double rho);

// iterate' = [momentum * affine + offset]^+,
// momentum' = iterate' + counter/(counter+3) (iterate' - iterate).
ApgBlockState apg_block_update(const ApgBlockState& state, const ApgBlockCache& cache);
ApgBlockState apg_block_update(const ApgBlockState& state, const DenseMatrix& fixed,
                               const SparseSymMatrix& a, double rho, double step);

// Value of the relaxed objective.
double qpm_objective(const SparseSymMatrix& a, const DenseMatrix& l, const DenseMatrix& z,
                     double rho);

// Gradient of the relaxed objective in L:  2[(L Z^T - A) Z + rho (L - Z)].
// The factor 2 is the exact derivative of the squared norms; the step rule
// absorbs it, as the update above shows.
DenseMatrix qpm_gradient_l(const SparseSymMatrix& a, const DenseMatrix& l, const DenseMatrix& z,
                           double rho);

enum class ApgStop { Converged, MaxOuter };

struct ApgInnerRecord {
  std::size_t steps = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
};

struct ApgResult {
  DenseMatrix l;
  DenseMatrix z;
  std::size_t outer_iterations = 0;
  std::size_t inner_steps = 0;
  ApgStop stop = ApgStop::MaxOuter;
  double initial_objective = 0.0;
  std::vector<double> objective_trace;      // relaxed objective after each outer iteration
  std::vector<ApgInnerRecord> inner_loops;  // L then Z, per outer iteration
  double split_gap = 0.0;                   // ||L - Z||_F / ||L||_F
  double snmf_objective = 0.0;              // ||A - L L^T||_F^2
  double wall_seconds = 0.0;
};

ApgResult solve_apg(const SparseSymMatrix& a, std::size_t k, const ApgConfig& cfg,
                    const std::optional<DenseMatrix>& init = std::nullopt);

}  // namespace snmf

#endif  // SNMF_APG_HPP
