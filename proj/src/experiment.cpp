#include "snmf/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <sstream>

#include "snmf/factor_init.hpp"

namespace snmf {

using json = nlohmann::ordered_json;

SolverChoice parse_solver_choice(const std::string& name) {
  if (name == "apg") return SolverChoice::Apg;
  if (name == "admm") return SolverChoice::Admm;
  if (name == "both") return SolverChoice::Both;
  throw Error(ErrorCode::InvalidConfig, "unknown solver '" + name + "' (apg|admm|both)");
}

void RunConfig::validate() const {
  if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be >= 1");
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  apg.validate();
  admm.validate();
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string context(const std::string& solver, std::size_t restart) {
  return solver + " restart " + std::to_string(restart) + ": ";
}

SolverSummary summarize(const std::string& solver, const std::vector<RunRecord>& runs) {
  SolverSummary s;
  s.solver = solver;
  std::vector<const RunRecord*> mine;
  for (const auto& r : runs) {
    if (r.solver == solver) mine.push_back(&r);
  }
  s.runs = mine.size();
  if (mine.empty()) return s;

  const auto best = std::min_element(mine.begin(), mine.end(),
                                     [](auto* a, auto* b) { return a->objective < b->objective; });
  s.best_restart = (*best)->restart;
  s.best_objective = (*best)->objective;
  s.best_ac = (*best)->ac;

  const double count = static_cast<double>(mine.size());
  for (const auto* r : mine) {
    s.mean_objective += r->objective / count;
    s.total_wall_seconds += r->wall_seconds;
  }
  s.mean_wall_seconds = s.total_wall_seconds / count;

  if (mine.front()->ac) {
    double mean = 0.0;
    std::size_t perfect = 0;
    for (const auto* r : mine) {
      mean += *r->ac / count;
      if (*r->ac == 100.0) ++perfect;
    }
    double var = 0.0;
    for (const auto* r : mine) var += (*r->ac - mean) * (*r->ac - mean) / count;
    s.mean_ac = mean;
    s.std_ac = std::sqrt(var);
    s.perfect_runs = perfect;
  }
  return s;
}

json kkt_json(const KktResidual& r) {
  return json{{"stationarity_x", r.stationarity_x},
              {"stationarity_y", r.stationarity_y},
              {"primal_x", r.primal_x},
              {"primal_y", r.primal_y},
              {"nonneg", r.nonneg},
              {"dual", r.dual},
              {"complementarity", r.complementarity},
              {"norm", r.norm}};
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

MetricsReport run_on_adjacency(const SparseSymMatrix& a,
                               const std::optional<std::vector<int>>& gold, const RunConfig& cfg) {
  cfg.validate();
  check_cluster_count(a, cfg.k);
  if (gold && gold->size() != a.order()) {
    throw Error(ErrorCode::LengthMismatch, "gold labels do not match the graph order");
  }

  MetricsReport report;
  report.input_kind = "adjacency";
  report.n = a.order();
  report.nnz = a.nnz();
  report.has_gold = gold.has_value();
  report.k = cfg.k;
  report.cost = flops_admm(a.order(), cfg.k);

  const bool run_apg = cfg.solver != SolverChoice::Admm;
  const bool run_admm = cfg.solver != SolverChoice::Apg;

  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed = cfg.seed + r;
    const DenseMatrix init = random_factor(a, cfg.k, seed);
    const std::uint64_t init_sum = checksum(init);

    const auto finish = [&](RunRecord& rec, const DenseMatrix& assign_from) {
      rec.labels = assign_clusters(assign_from).labels;
      if (gold) rec.ac = best_mapping(std::span<const int>(rec.labels), *gold).ac;
      report.runs.push_back(std::move(rec));
    };

    if (run_apg) {
      ApgConfig apg_cfg = cfg.apg;
      apg_cfg.seed = seed;
      ApgResult res;
      try {
        res = solve_apg(a, cfg.k, apg_cfg, init);
      } catch (const Error& e) {
        throw Error(e.code(), context("apg", r) + e.what());
      }
      RunRecord rec;
      rec.solver = "apg";
      rec.restart = r;
      rec.seed = seed;
      rec.init_checksum = init_sum;
      rec.iterations = res.outer_iterations;
      rec.inner_steps = res.inner_steps;
      rec.converged = res.stop == ApgStop::Converged;
      rec.objective = res.snmf_objective;
      rec.wall_seconds = res.wall_seconds;
      rec.split_gap = res.split_gap;
      finish(rec, res.z);
    }
    if (run_admm) {
      AdmmConfig admm_cfg = cfg.admm;
      admm_cfg.seed = seed;
      AdmmResult res;
      try {
        res = solve_admm(a, cfg.k, admm_cfg, init);
      } catch (const Error& e) {
        throw Error(e.code(), context("admm", r) + e.what());
      }
      RunRecord rec;
      rec.solver = "admm";
      rec.restart = r;
      rec.seed = seed;
      rec.init_checksum = init_sum;
      rec.iterations = res.iterations;
      rec.converged = res.stop == AdmmStop::Converged;
      rec.objective = res.snmf_objective;
      rec.wall_seconds = res.wall_seconds;
      rec.kkt = res.kkt;
      rec.gap_x = res.gap_x;
      rec.gap_y = res.gap_y;
      finish(rec, res.l);
    }
  }

  if (run_apg) report.summaries.push_back(summarize("apg", report.runs));
  if (run_admm) report.summaries.push_back(summarize("admm", report.runs));
  return report;
}

MetricsReport run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const auto t_ingest = std::chrono::steady_clock::now();

  MetricsReport report;
  if (const auto* adj = std::get_if<AdjacencyInput>(&cfg.input)) {
    const SparseSymMatrix a = ingest_adjacency(adj->path);
    const double ingest = seconds_since(t_ingest);
    report = run_on_adjacency(a, std::nullopt, cfg);
    report.ingest_seconds = ingest;
  } else {
    DataSet data;
    std::string kind;
    if (const auto* pts = std::get_if<PointsInput>(&cfg.input)) {
      data = ingest_points(pts->path, pts->format);
      kind = "points";
    } else {
      data = generate(std::get<SyntheticSpec>(cfg.input));
      kind = "synthetic";
    }
    const double ingest = seconds_since(t_ingest);

    const auto t_graph = std::chrono::steady_clock::now();
    const AdjacencyMatrix graph_adj = normalize_adjacency(build_weight_matrix(data, cfg.graph));
    const double graph = seconds_since(t_graph);

    report = run_on_adjacency(graph_adj.a, data.labels, cfg);
    report.input_kind = kind;
    report.dims = data.dims();
    report.ingest_seconds = ingest;
    report.graph_seconds = graph;
  }

  if (cfg.output_dir) write_outputs(report, cfg);
  return report;
}

std::string report_to_json(const MetricsReport& report, const RunConfig& cfg) {
  json j;
  j["schema"] = kReportSchema;

  json input{{"kind", report.input_kind}, {"n", report.n}, {"nnz", report.nnz}};
  if (report.dims) input["dims"] = *report.dims;
  input["gold_labels"] = report.has_gold;
  if (const auto* spec = std::get_if<SyntheticSpec>(&cfg.input)) {
    input["synthetic"] = json{{"kind", to_string(spec->kind)},
                              {"per_cluster", spec->per_cluster},
                              {"k", spec->k},
                              {"noise", spec->noise},
                              {"seed", spec->seed}};
  }
  j["input"] = std::move(input);

  j["config"] = json{
      {"k", cfg.k},
      {"solver", cfg.solver == SolverChoice::Apg    ? "apg"
                 : cfg.solver == SolverChoice::Admm ? "admm"
                                                    : "both"},
      {"restarts", cfg.restarts},
      {"seed", cfg.seed},
      {"apg", json{{"rho", cfg.apg.rho},
                   {"epsilon", cfg.apg.epsilon},
                   {"max_outer", cfg.apg.max_outer},
                   {"max_inner", cfg.apg.max_inner}}},
      {"admm",
       json{{"rho", cfg.admm.rho}, {"epsilon", cfg.admm.epsilon}, {"max_iter", cfg.admm.max_iter}}},
      {"graph", json{{"p", cfg.graph.scale_rank},
                     {"q", cfg.graph.neighbors ? json(*cfg.graph.neighbors) : json(nullptr)}}}};

  j["cost"] = json{{"n", report.cost.n},
                   {"k", report.cost.k},
                   {"q", report.cost.q},
                   {"flops_admm", report.cost.flops_admm},
                   {"flops_per_update_split", report.cost.flops_per_update_split},
                   {"approx_flops", report.cost.approx_flops}};

  json timing{{"ingest_seconds", report.ingest_seconds}};
  if (report.graph_seconds) timing["graph_seconds"] = *report.graph_seconds;
  j["timing"] = std::move(timing);

  json runs = json::array();
  for (const auto& r : report.runs) {
    json rec{{"solver", r.solver},
             {"restart", r.restart},
             {"seed", r.seed},
             {"init_checksum", hex64(r.init_checksum)},
             {"iterations", r.iterations}};
    if (r.solver == "apg") rec["inner_steps"] = r.inner_steps;
    rec["converged"] = r.converged;
    rec["objective"] = r.objective;
    if (r.ac) rec["ac"] = *r.ac;
    if (r.split_gap) rec["split_gap"] = *r.split_gap;
    if (r.gap_x) rec["gap_x"] = *r.gap_x;
    if (r.gap_y) rec["gap_y"] = *r.gap_y;
    if (r.kkt) rec["kkt"] = kkt_json(*r.kkt);
    rec["labels_file"] = "labels_" + r.solver + "_" + std::to_string(r.restart) + ".csv";
    rec["wall_seconds"] = r.wall_seconds;
    runs.push_back(std::move(rec));
  }
  j["runs"] = std::move(runs);

  json summaries = json::array();
  for (const auto& s : report.summaries) {
    json sj{{"solver", s.solver},
            {"runs", s.runs},
            {"best_restart", s.best_restart},
            {"best_objective", s.best_objective},
            {"mean_objective", s.mean_objective}};
    if (s.best_ac) sj["best_ac"] = *s.best_ac;
    if (s.mean_ac) sj["mean_ac"] = *s.mean_ac;
    if (s.std_ac) sj["std_ac"] = *s.std_ac;
    if (s.perfect_runs) sj["perfect_runs"] = *s.perfect_runs;
    sj["timing"] = json{{"mean_wall_seconds", s.mean_wall_seconds},
                        {"total_wall_seconds", s.total_wall_seconds}};
    summaries.push_back(std::move(sj));
  }
  j["summary"] = std::move(summaries);

  j["environment"] = json{{"compiler", __VERSION__},
                          {"cplusplus", static_cast<long>(__cplusplus)},
                          {"generated_at", utc_timestamp()}};
  return j.dump(2) + "\n";
}

void write_outputs(const MetricsReport& report, const RunConfig& cfg) {
  if (!cfg.output_dir) return;
  const auto& dir = *cfg.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& r : report.runs) {
    write_file_atomic(dir / ("labels_" + r.solver + "_" + std::to_string(r.restart) + ".csv"),
                      format_labels(r.labels));
  }
  write_file_atomic(dir / "report.json", report_to_json(report, cfg));
}

}  // namespace snmf
