#include "snmf/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace snmf {

void DataSet::validate() const {
  if (!points.all_finite()) {
    throw Error(ErrorCode::NonFinite, "data set contains a non-finite coordinate");
  }
  if (labels && labels->size() != points.rows()) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(points.rows()) +
                                               " labels, got " + std::to_string(labels->size()));
  }
}

std::size_t neighbor_count(std::size_t n, const GraphConfig& cfg) {
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 points");
  if (cfg.neighbors) {
    if (*cfg.neighbors < 1) throw Error(ErrorCode::InvalidConfig, "neighbor count must be >= 1");
    return *cfg.neighbors;
  }
  return static_cast<std::size_t>(std::bit_width(n));  // floor(log2 n) + 1
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

}  // namespace

WeightMatrix build_weight_matrix(const DataSet& data, const GraphConfig& cfg) {
  data.validate();
  const std::size_t n = data.size();
  const std::size_t q = neighbor_count(n, cfg);
  const std::size_t p = cfg.scale_rank;
  if (p < 1) throw Error(ErrorCode::InvalidConfig, "scale rank p must be >= 1");
  const std::size_t rank = std::max(p, q);
  if (n <= rank) {
    throw Error(ErrorCode::TooFewPoints, "need more than max(p, q) = " + std::to_string(rank) +
                                             " points, got " + std::to_string(n));
  }

  // Sorted (distance, index) prefix of length max(p, q) for every point.
  std::vector<std::vector<std::size_t>> nearest(n);
  std::vector<double> sigma(n);
  std::vector<std::size_t> order(n - 1);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = squared_distance(data.points.row(i), data.points.row(j));
    }
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order[pos++] = j;
    }
    const auto closer = [&](std::size_t a, std::size_t b) {
      return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(rank), order.end(),
                      closer);
    nearest[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(q));
    sigma[i] = std::sqrt(dist[order[p - 1]]);
    if (sigma[i] == 0.0) {
      throw Error(ErrorCode::DegenerateScale, "point " + std::to_string(i) + " has " +
                                                  std::to_string(p) +
                                                  " or more duplicates; local scale is zero");
    }
  }

  // Union of neighbor lists, i.e. the "or" rule.
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : nearest[i]) {
      adjacency[i].push_back(j);
      adjacency[j].push_back(i);
    }
  }

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    auto& nb = adjacency[i];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (std::size_t j : nb) {
      // Evaluate with (min, max) ordering so W_ij and W_ji are bitwise equal.
      const std::size_t lo = std::min(i, j);
      const std::size_t hi = std::max(i, j);
      const double d2 = squared_distance(data.points.row(lo), data.points.row(hi));
      cols.push_back(j);
      vals.push_back(std::exp(-d2 / (sigma[lo] * sigma[hi])));
    }
    offsets[i + 1] = cols.size();
  }

  return WeightMatrix{SparseSymMatrix(n, std::move(offsets), std::move(cols), std::move(vals)),
                      std::move(sigma)};
}

AdjacencyMatrix normalize_adjacency(const WeightMatrix& w) {
  const SparseSymMatrix& m = w.w;
  const std::size_t n = m.order();
  std::vector<double> degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto vals = m.row_values(i);
    degree[i] = std::accumulate(vals.begin(), vals.end(), 0.0);
    if (!(degree[i] > 0.0)) {
      throw Error(ErrorCode::IsolatedVertex, "vertex " + std::to_string(i) + " has zero degree");
    }
  }

  std::vector<double> vals(m.values().begin(), m.values().end());
  const auto offsets = m.row_offsets();
  const auto cols = m.col_indices();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      vals[p] /= std::sqrt(degree[i] * degree[cols[p]]);
    }
  }
  return AdjacencyMatrix{SparseSymMatrix(n, {offsets.begin(), offsets.end()},
                                         {cols.begin(), cols.end()}, std::move(vals)),
                         std::move(degree)};
}

}  // namespace snmf
