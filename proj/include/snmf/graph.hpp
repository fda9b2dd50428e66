#ifndef SNMF_GRAPH_HPP
#define SNMF_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "snmf/linalg.hpp"

namespace snmf {

// n points in m dimensions, one per row, plus optional gold labels.
struct DataSet {
  DenseMatrix points;
  std::optional<std::vector<int>> labels;

  std::size_t size() const noexcept { return points.rows(); }
  std::size_t dims() const noexcept { return points.cols(); }

  // Throws if a coordinate is non-finite or the label count is off.
  void validate() const;
};

struct GraphConfig {
  std::size_t scale_rank = 7;            // p: neighbor rank that sets the local scale
  std::optional<std::size_t> neighbors;  // q override; default floor(log2 n) + 1
};

struct WeightMatrix {
  SparseSymMatrix w;
  std::vector<double> local_scale;  // sigma_i, unsquared distance to p-th neighbor
};

struct AdjacencyMatrix {
  SparseSymMatrix a;
  std::vector<double> degree;  // row sums of W
};

std::size_t neighbor_count(std::size_t n, const GraphConfig& cfg);

// Adjusted q-nearest-neighbor graph with locally scaled Gaussian weights
//   W_ij = exp(-|d_i - d_j|^2 / (sigma_i sigma_j))
// whenever j is among i's q nearest neighbors or i is among j's.
// Self is never a neighbor; distance ties go to the lower index.
WeightMatrix build_weight_matrix(const DataSet& data, const GraphConfig& cfg);

// A = D^{-1/2} W D^{-1/2}.
AdjacencyMatrix normalize_adjacency(const WeightMatrix& w);

}  // namespace snmf

#endif  // SNMF_GRAPH_HPP
