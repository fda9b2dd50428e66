#include "snmf/factor_init.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace snmf {

void check_cluster_count(const SparseSymMatrix& a, std::size_t k) {
  if (k < 1 || k >= a.order()) {
    throw Error(ErrorCode::InvalidK, "cluster count " + std::to_string(k) +
                                         " must satisfy 1 <= k < n = " + std::to_string(a.order()));
  }
}

DenseMatrix random_factor(const SparseSymMatrix& a, std::size_t k, std::uint64_t seed) {
  check_cluster_count(a, k);
  const double n = static_cast<double>(a.order());
  const double mean = a.sum() / (n * n);
  const double scale = std::sqrt(mean / static_cast<double>(k));
  std::mt19937_64 rng(seed);
  DenseMatrix m(a.order(), k);
  for (double& v : m.values()) v = scale * std::generate_canonical<double, 53>(rng);
  return m;
}

std::uint64_t checksum(const DenseMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(m.rows());
  mix(m.cols());
  for (double v : m.values()) mix(std::bit_cast<std::uint64_t>(v));
  return h;
}

}  // namespace snmf
