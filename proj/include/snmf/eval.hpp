#ifndef SNMF_EVAL_HPP
#define SNMF_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snmf/graph.hpp"
#include "snmf/linalg.hpp"

namespace snmf {

struct ClusterAssignment {
  std::vector<int> labels;
  std::size_t k = 0;
};

// Row-wise argmax of an n x K factor; ties go to the lowest column.
ClusterAssignment assign_clusters(const DenseMatrix& l);

struct AccuracyReport {
  double ac = 0.0;  // percent in [0, 100]
  // (predicted label, gold label) pairs of the optimal one-to-one mapping.
  std::vector<std::pair<int, int>> mapping;
  std::size_t matched = 0;
  std::size_t n = 0;
};

// Maps predicted clusters onto gold classes with the Kuhn-Munkres algorithm
// on the overlap-count matrix and scores the fraction of points whose mapped
// label equals the gold label. Label values are arbitrary integers; each side
// may have at most 64 distinct values. Unequal label counts are padded with
// empty rows or columns.
AccuracyReport best_mapping(std::span<const int> predicted, std::span<const int> gold);
AccuracyReport best_mapping(const ClusterAssignment& predicted, std::span<const int> gold);

// Minimum-cost perfect matching on a square cost matrix. Returns, for each
// row, the assigned column. O(n^3).
std::vector<std::size_t> solve_assignment(const DenseMatrix& cost);

enum class SyntheticKind { Blobs, Rings, Moons };

SyntheticKind parse_synthetic_kind(const std::string& name);
std::string to_string(SyntheticKind kind);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::Blobs;
  std::size_t per_cluster = 100;
  std::size_t k = 3;
  double noise = 0.05;
  std::uint64_t seed = 0;
};

// Blobs: isotropic Gaussians (std = noise) centered on the vertices of a
//   regular simplex with unit edge, embedded in k dimensions.
// Rings: k concentric circles of radius 1, 2, ..., k in the plane, uniform
//   angle, Gaussian radial noise.
// Moons: two interleaved unit half-circles with Gaussian noise; k must be 2.
// Deterministic for a given spec.
DataSet generate(const SyntheticSpec& spec);

// Distance between neighboring blob centers.
inline constexpr double kBlobCenterSpacing = 1.0;

}  // namespace snmf

#endif  // SNMF_EVAL_HPP
