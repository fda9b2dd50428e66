// snmf: cluster points or a graph with symmetric nonnegative matrix
// factorization (APG and ADMM solvers) and write a JSON metrics report.

#include <CLI11.hpp>
#include <charconv>
#include <iostream>
#include <string>
#include <vector>

#include "snmf/experiment.hpp"

namespace {

// kind[:per_cluster[:noise[:seed]]], e.g. "blobs:100:0.05".
snmf::SyntheticSpec parse_synthetic(const std::string& text, std::size_t k) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() > 4) {
    throw snmf::Error(snmf::ErrorCode::InvalidConfig,
                      "--synthetic expects kind[:per_cluster[:noise[:seed]]]");
  }
  snmf::SyntheticSpec spec;
  spec.kind = snmf::parse_synthetic_kind(parts[0]);
  spec.k = k;
  try {
    if (parts.size() > 1) spec.per_cluster = std::stoul(parts[1]);
    if (parts.size() > 2) spec.noise = std::stod(parts[2]);
    if (parts.size() > 3) spec.seed = std::stoull(parts[3]);
  } catch (const std::exception&) {
    throw snmf::Error(snmf::ErrorCode::InvalidConfig, "bad --synthetic value '" + text + "'");
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric NMF graph clustering (APG and ADMM solvers)"};

  std::string points_path;
  std::string adjacency_path;
  std::string synthetic;
  std::string solver = "both";
  std::string out_dir;
  std::size_t max_iter = 0;
  std::size_t max_inner = 0;
  std::size_t neighbors = 0;
  snmf::RunConfig cfg;
  bool labeled = false;
  bool header = false;
  double epsilon = 1e-5;

  auto* input_opt = app.add_option("--input", points_path, "CSV of points, one per row");
  auto* adj_opt = app.add_option("--adjacency", adjacency_path,
                                 "adjacency triplets: header 'n nnz' then 'i j value'");
  auto* syn_opt = app.add_option("--synthetic", synthetic,
                                 "generated data: blobs|rings|moons[:per_cluster[:noise[:seed]]]");
  input_opt->excludes(adj_opt, syn_opt);
  adj_opt->excludes(syn_opt);

  app.add_option("--k", cfg.k, "number of clusters")->required()->check(CLI::PositiveNumber);
  app.add_option("--solver", solver, "apg, admm or both")
      ->check(CLI::IsMember({"apg", "admm", "both"}));
  app.add_option("--restarts", cfg.restarts, "random restarts per solver")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "base seed; restart r uses seed + r");
  app.add_option("--rho-apg", cfg.apg.rho, "APG penalty weight")->check(CLI::PositiveNumber);
  app.add_option("--rho-admm", cfg.admm.rho, "ADMM penalty / dual step")
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", epsilon, "stopping threshold for both solvers")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", max_iter, "ADMM iteration cap and APG outer cap");
  app.add_option("--max-inner", max_inner, "APG inner-loop cap");
  app.add_option("--neighbors", neighbors, "override q, the neighbor count of the graph");
  app.add_option("--scale-rank", cfg.graph.scale_rank, "p, neighbor rank for the local scale")
      ->check(CLI::PositiveNumber);
  app.add_flag("--labeled", labeled, "last CSV column is an integer gold label");
  app.add_flag("--header", header, "skip the first CSV line");
  app.add_option("--out", out_dir, "directory for report.json and label CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (points_path.empty() && adjacency_path.empty() && synthetic.empty()) {
      throw snmf::Error(snmf::ErrorCode::InvalidConfig,
                        "one of --input, --adjacency or --synthetic is required");
    }
    if (!points_path.empty()) {
      cfg.input = snmf::PointsInput{points_path, snmf::PointsFormat{labeled, header}};
    } else if (!adjacency_path.empty()) {
      cfg.input = snmf::AdjacencyInput{adjacency_path};
    } else {
      cfg.input = parse_synthetic(synthetic, cfg.k);
    }
    cfg.solver = snmf::parse_solver_choice(solver);
    cfg.apg.epsilon = epsilon;
    cfg.admm.epsilon = epsilon;
    if (max_iter > 0) {
      cfg.admm.max_iter = max_iter;
      cfg.apg.max_outer = max_iter;
    }
    if (max_inner > 0) cfg.apg.max_inner = max_inner;
    if (neighbors > 0) cfg.graph.neighbors = neighbors;
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    const snmf::MetricsReport report = snmf::run_experiment(cfg);
    if (!cfg.output_dir) {
      std::cout << snmf::report_to_json(report, cfg);
    } else {
      for (const auto& s : report.summaries) {
        std::cerr << s.solver << ": best objective " << s.best_objective << " (restart "
                  << s.best_restart << ")";
        if (s.best_ac) std::cerr << ", AC " << *s.best_ac;
        std::cerr << '\n';
      }
    }
  } catch (const snmf::Error& e) {
    std::cerr << "snmf: " << e.what() << '\n';
    return e.code() == snmf::ErrorCode::NonFinite ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "snmf: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
