#ifndef SNMF_FACTOR_INIT_HPP
#define SNMF_FACTOR_INIT_HPP

#include <cstdint>

#include "snmf/linalg.hpp"

namespace snmf {

// n x k matrix with entries uniform on [0, 1) scaled by sqrt(mean(A) / k), so
// that L L^T starts at the same overall magnitude as A. Deterministic in seed.
DenseMatrix random_factor(const SparseSymMatrix& a, std::size_t k, std::uint64_t seed);

// Throws InvalidK unless 1 <= k < n.
void check_cluster_count(const SparseSymMatrix& a, std::size_t k);

// FNV-1a over the raw entries; used to show that solvers share an init.
std::uint64_t checksum(const DenseMatrix& m);

}  // namespace snmf

#endif  // SNMF_FACTOR_INIT_HPP
