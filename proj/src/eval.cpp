#include "snmf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace snmf {

ClusterAssignment assign_clusters(const DenseMatrix& l) {
  ClusterAssignment out;
  out.k = l.cols();
  out.labels.resize(l.rows(), 0);
  if (l.cols() == 0) return out;
  for (std::size_t i = 0; i < l.rows(); ++i) {
    const auto row = l.row(i);
    // max_element keeps the first maximum.
    out.labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

std::vector<std::size_t> solve_assignment(const DenseMatrix& cost) {
  // Shortest augmenting path form of the Hungarian method with row and column
  // potentials; 1-based internally with column 0 as the virtual source.
  const std::size_t n = cost.rows();
  if (cost.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "assignment cost matrix must be square");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

namespace {

constexpr std::size_t kMaxDistinctLabels = 64;

// Dense 0..m-1 codes for the distinct values of labels, in sorted order.
std::vector<int> distinct_values(std::span<const int> labels) {
  std::vector<int> values(labels.begin(), labels.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() > kMaxDistinctLabels) {
    throw Error(ErrorCode::InvalidConfig, "more than 64 distinct labels");
  }
  return values;
}

std::size_t code_of(const std::vector<int>& values, int label) {
  return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), label) -
                                  values.begin());
}

}  // namespace

AccuracyReport best_mapping(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predicted.size()) +
                                               " predicted labels vs " +
                                               std::to_string(gold.size()) + " gold labels");
  }
  AccuracyReport report;
  report.n = predicted.size();
  if (report.n == 0) {
    report.ac = 100.0;
    return report;
  }

  const auto pred_values = distinct_values(predicted);
  const auto gold_values = distinct_values(gold);
  const std::size_t size = std::max(pred_values.size(), gold_values.size());

  DenseMatrix overlap(size, size);
  for (std::size_t i = 0; i < report.n; ++i) {
    overlap(code_of(pred_values, predicted[i]), code_of(gold_values, gold[i])) += 1.0;
  }
  const auto assignment = solve_assignment(-1.0 * overlap);

  for (std::size_t r = 0; r < pred_values.size(); ++r) {
    const std::size_t c = assignment[r];
    if (c >= gold_values.size()) continue;  // mapped onto a padding column
    report.mapping.emplace_back(pred_values[r], gold_values[c]);
    report.matched += static_cast<std::size_t>(overlap(r, c));
  }
  report.ac = 100.0 * static_cast<double>(report.matched) / static_cast<double>(report.n);
  return report;
}

AccuracyReport best_mapping(const ClusterAssignment& predicted, std::span<const int> gold) {
  return best_mapping(std::span<const int>(predicted.labels), gold);
}

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "blobs") return SyntheticKind::Blobs;
  if (name == "rings") return SyntheticKind::Rings;
  if (name == "moons") return SyntheticKind::Moons;
  throw Error(ErrorCode::InvalidConfig, "unknown synthetic kind '" + name + "'");
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Blobs: return "blobs";
    case SyntheticKind::Rings: return "rings";
    case SyntheticKind::Moons: return "moons";
  }
  return "unknown";
}

DataSet generate(const SyntheticSpec& spec) {
  if (spec.k < 1 || spec.per_cluster < 1) {
    throw Error(ErrorCode::InvalidConfig, "synthetic spec needs k >= 1 and per_cluster >= 1");
  }
  if (!(spec.noise >= 0.0)) throw Error(ErrorCode::InvalidConfig, "noise must be >= 0");
  if (spec.kind == SyntheticKind::Moons && spec.k != 2) {
    throw Error(ErrorCode::InvalidConfig, "moons needs k = 2");
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = spec.per_cluster * spec.k;
  const std::size_t dims = spec.kind == SyntheticKind::Blobs ? spec.k : 2;

  DataSet data{DenseMatrix(n, dims), std::vector<int>(n)};
  auto& labels = *data.labels;
  constexpr double pi = std::numbers::pi;
  const double vertex = kBlobCenterSpacing / std::numbers::sqrt2;

  for (std::size_t c = 0; c < spec.k; ++c) {
    for (std::size_t t = 0; t < spec.per_cluster; ++t) {
      const std::size_t i = c * spec.per_cluster + t;
      labels[i] = static_cast<int>(c);
      auto row = data.points.row(i);
      switch (spec.kind) {
        case SyntheticKind::Blobs:
          for (std::size_t d = 0; d < dims; ++d) {
            row[d] = (d == c ? vertex : 0.0) + spec.noise * gauss(rng);
          }
          break;
        case SyntheticKind::Rings: {
          const double theta = 2.0 * pi * unit(rng);
          const double radius = static_cast<double>(c + 1) + spec.noise * gauss(rng);
          row[0] = radius * std::cos(theta);
          row[1] = radius * std::sin(theta);
          break;
        }
        case SyntheticKind::Moons: {
          const double theta = pi * unit(rng);
          if (c == 0) {
            row[0] = std::cos(theta);
            row[1] = std::sin(theta);
          } else {
            row[0] = 1.0 - std::cos(theta);
            row[1] = 0.5 - std::sin(theta);
          }
          row[0] += spec.noise * gauss(rng);
          row[1] += spec.noise * gauss(rng);
          break;
        }
      }
    }
  }
  return data;
}

}  // namespace snmf
