#ifndef SNMF_EXPERIMENT_HPP
#define SNMF_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "snmf/admm.hpp"
#include "snmf/apg.hpp"
#include "snmf/costmodel.hpp"
#include "snmf/eval.hpp"
#include "snmf/graph.hpp"
#include "snmf/io.hpp"
#include "snmf/kkt.hpp"

namespace snmf {

inline constexpr int kReportSchema = 1;

struct PointsInput {
  std::filesystem::path path;
  PointsFormat format;
};

struct AdjacencyInput {
  std::filesystem::path path;
};

using InputSource = std::variant<PointsInput, AdjacencyInput, SyntheticSpec>;

enum class SolverChoice { Apg, Admm, Both };

SolverChoice parse_solver_choice(const std::string& name);

struct RunConfig {
  InputSource input = SyntheticSpec{};
  std::size_t k = 3;
  SolverChoice solver = SolverChoice::Both;
  std::size_t restarts = 1;
  std::uint64_t seed = 0;
  ApgConfig apg;
  AdmmConfig admm;
  GraphConfig graph;
  std::optional<std::filesystem::path> output_dir;

  void validate() const;
};

struct RunRecord {
  std::string solver;  // "apg" or "admm"
  std::size_t restart = 0;
  std::uint64_t seed = 0;
  std::uint64_t init_checksum = 0;
  std::size_t iterations = 0;
  std::size_t inner_steps = 0;  // apg only
  bool converged = false;
  double objective = 0.0;  // ||A - L L^T||_F^2
  std::optional<double> ac;
  double wall_seconds = 0.0;
  std::optional<KktResidual> kkt;      // admm only
  std::optional<double> split_gap;     // apg only
  std::optional<double> gap_x, gap_y;  // admm only
  std::vector<int> labels;
};

struct SolverSummary {
  std::string solver;
  std::size_t runs = 0;
  std::size_t best_restart = 0;  // lowest objective
  double best_objective = 0.0;
  double mean_objective = 0.0;
  std::optional<double> best_ac;  // AC of the lowest-objective run
  std::optional<double> mean_ac;
  std::optional<double> std_ac;
  std::optional<std::size_t> perfect_runs;  // AC == 100
  double mean_wall_seconds = 0.0;
  double total_wall_seconds = 0.0;
};

struct MetricsReport {
  std::string input_kind;  // "points", "adjacency", "synthetic"
  std::size_t n = 0;
  std::size_t nnz = 0;
  std::optional<std::size_t> dims;
  bool has_gold = false;
  std::size_t k = 0;
  double ingest_seconds = 0.0;
  std::optional<double> graph_seconds;  // absent when an adjacency is supplied
  CostEstimate cost;
  std::vector<RunRecord> runs;
  std::vector<SolverSummary> summaries;
};

// Builds the graph when given points, then for each restart r draws one
// initialization from seed + r and runs every requested solver from it.
// Writes report.json and labels_<solver>_<r>.csv when output_dir is set.
MetricsReport run_experiment(const RunConfig& cfg);

// Same, for a caller that already holds the adjacency (and optional gold
// labels); no ingestion or graph timing is recorded.
MetricsReport run_on_adjacency(const SparseSymMatrix& a,
                               const std::optional<std::vector<int>>& gold, const RunConfig& cfg);

// Stable-order JSON. Timing lives under keys named "wall_seconds",
// "timing" and "environment"; everything else is reproducible from the
// input, config and seed.
std::string report_to_json(const MetricsReport& report, const RunConfig& cfg);

void write_outputs(const MetricsReport& report, const RunConfig& cfg);

}  // namespace snmf

#endif  // SNMF_EXPERIMENT_HPP
