#ifndef SNMF_COSTMODEL_HPP
#define SNMF_COSTMODEL_HPP

#include <cstddef>
#include <cstdint>

#include "snmf/linalg.hpp"

namespace snmf {

// Per-iteration flop counts of the ADMM solver on a sparse q-NN graph. The
// n log2 n terms use the real logarithm; q uses the floor form.
struct CostEstimate {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t q = 0;                    // floor(log2 n) + 1 nonzeros per row
  double flops_admm = 0.0;              // 2/3 K^3 + 6 n K^2 + 4 (n log2 n) K + 22 n K
  double flops_per_update_split = 0.0;  // 1/3 K^3 + 3 n K^2 + 2 (n log2 n) K + 5 n K
  double approx_flops = 0.0;            // 2 n K (3 K + 2 log2 n)
};

CostEstimate flops_admm(std::size_t n, std::size_t k);

// Seconds per ADMM iteration on `a`, measured over `iterations` steps from a
// seeded random start; the best of `repeats` runs is returned. Only the
// iteration loop is timed.
double time_admm_iteration(const SparseSymMatrix& a, std::size_t k, std::size_t iterations,
                           std::size_t repeats, std::uint64_t seed, double rho = 0.1);

}  // namespace snmf

#endif  // SNMF_COSTMODEL_HPP
