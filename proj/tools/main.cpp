// sonclust command line: solve a single weighted sum-of-norms clustering
// problem, trace a clustering path over a gamma grid, or run benchmark
// suites that emit plot-ready CSV tables.
//
// Exit codes: 0 converged, 1 usage or I/O error, 2 solver did not converge.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "sonclust/datagen.hpp"
#include "sonclust/path.hpp"
#include "sonclust/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sonclust;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// options shared by the subcommands

struct DatasetOptions {
  std::string input;    // CSV path
  std::string dataset;  // halfmoon | ugauss
  int n = 1000;
  double noise = 0.1;
  std::uint64_t seed = 0;
  std::string orientation = "rows";  // rows|cols are observations in the CSV
  bool skip_header = false;
  bool scale = false;
};

struct GraphOptions {
  int knn = 10;
  double phi = 0.5;
};

struct SolveOptions {
  double gamma = 0.0;
  std::string gamma_grid;
  double tol = 1e-6;
  std::string solver = "ssnal";
  int warmstart_iters = 100;
  double cluster_tol = 1e-5;
  std::string out_dir = ".";
};

void add_dataset_flags(CLI::App* cmd, DatasetOptions& opt) {
  cmd->add_option("--input", opt.input, "CSV file with the data matrix");
  cmd->add_option("--dataset", opt.dataset, "Built-in generator: halfmoon or ugauss")
      ->check(CLI::IsMember({"halfmoon", "ugauss"}));
  cmd->add_option("--n", opt.n, "Number of observations for generated datasets");
  cmd->add_option("--noise", opt.noise, "Noise standard deviation for halfmoon");
  cmd->add_option("--seed", opt.seed, "Generator seed");
  cmd->add_option("--orientation", opt.orientation, "CSV orientation: rows or cols hold observations")
      ->check(CLI::IsMember({"rows", "cols"}));
  cmd->add_flag("--header", opt.skip_header, "Skip the first CSV row");
  cmd->add_flag("--scale-unit", opt.scale, "Min-max scale each coordinate onto [0,1]");
}

void add_graph_flags(CLI::App* cmd, GraphOptions& opt) {
  cmd->add_option("--knn", opt.knn, "Neighbors per node in the kNN graph")->check(CLI::PositiveNumber);
  cmd->add_option("--phi", opt.phi, "Gaussian weight decay exponent")->check(CLI::NonNegativeNumber);
}

struct LoadedDataset {
  DataMatrix data;
  std::vector<int> labels;  // empty for CSV data
  json descriptor;
};

LoadedDataset load_dataset(const DatasetOptions& opt) {
  if (opt.input.empty() == opt.dataset.empty()) {
    throw UsageError("exactly one of --input or --dataset is required");
  }
  LoadedDataset out;
  if (!opt.input.empty()) {
    out.data = load_csv(opt.input, opt.orientation == "rows", opt.skip_header);
    if (opt.scale) out.data = scale_unit(out.data);
    out.descriptor = {{"source", "csv"},
                      {"path", opt.input},
                      {"orientation", opt.orientation},
                      {"header", opt.skip_header},
                      {"scaled", opt.scale}};
  } else if (opt.dataset == "halfmoon") {
    LabeledDataset data = two_half_moons(opt.n, opt.noise, opt.seed);
    out.data = std::move(data.data);
    out.labels = std::move(data.labels);
    out.descriptor = {{"source", "halfmoon"}, {"n", opt.n}, {"noise", opt.noise}, {"seed", opt.seed}};
  } else {
    GaussianMixtureSpec mix = unbalanced_gaussian_spec();
    const int full = 6500;
    if (opt.n != full) {
      const int divisor = std::max(1, full / std::max(1, opt.n));
      mix = unbalanced_gaussian_spec(divisor);
    }
    LabeledDataset data = unbalanced_gaussian(opt.seed, mix);
    out.data = std::move(data.data);
    out.labels = std::move(data.labels);
    out.descriptor = {{"source", "ugauss"},
                      {"n", static_cast<int>(out.data.cols())},
                      {"seed", opt.seed}};
  }
  out.descriptor["d"] = static_cast<int>(out.data.rows());
  return out;
}

// ---------------------------------------------------------------------------
// artifact writing

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string centroids_csv(const DataMatrix& X) {
  std::string out;
  out.reserve(static_cast<std::size_t>(X.size()) * 20);
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      out += format_double(X(r, i));
      out += (r + 1 < X.rows()) ? ',' : '\n';
    }
  }
  return out;
}

std::string assignment_csv(const std::vector<int>& labels) {
  std::string out;
  for (int l : labels) {
    out += std::to_string(l);
    out += '\n';
  }
  return out;
}

json solver_config_json(const SolverConfig& c) {
  return {{"tol", c.tol},
          {"sigma0", c.sigma0},
          {"sigma_max", c.sigma_max},
          {"sigma_growth", c.sigma_growth},
          {"eps0", c.eps0},
          {"eps_decay", c.eps_decay},
          {"max_outer", c.max_outer},
          {"ssncg",
           {{"mu", c.ssncg.mu},
            {"tau", c.ssncg.tau},
            {"eta_bar", c.ssncg.eta_bar},
            {"delta", c.ssncg.delta},
            {"max_newton", c.ssncg.max_newton},
            {"max_cg", c.ssncg.max_cg}}}};
}

json kkt_json(const KKTResidual& kkt) {
  return {{"eta_P", kkt.eta_P}, {"eta_D", kkt.eta_D}, {"eta", kkt.eta}, {"max", kkt.max()}};
}

json base_manifest(const std::string& command, const json& dataset, const GraphOptions& graph) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["dataset"] = dataset;
  m["graph"] = {{"knn", graph.knn}, {"phi", graph.phi}};
  const char* threads = std::getenv("SONCLUST_THREADS");
  m["threads"] = threads != nullptr ? json(std::string(threads)) : json(nullptr);
  return m;
}

// ---------------------------------------------------------------------------
// gamma grids

std::vector<double> parse_gamma_grid(const std::string& text) {
  std::vector<double> grid;
  const auto to_double = [&](const std::string& token) {
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad gamma grid component '" + token + "'");
    }
  };
  const auto first_colon = text.find(':');
  if (first_colon == std::string::npos) {
    grid.push_back(to_double(text));
  } else {
    const auto second_colon = text.find(':', first_colon + 1);
    if (second_colon == std::string::npos) {
      throw UsageError("gamma grid must be a value or start:step:stop");
    }
    const double start = to_double(text.substr(0, first_colon));
    const double step = to_double(text.substr(first_colon + 1, second_colon - first_colon - 1));
    const double stop = to_double(text.substr(second_colon + 1));
    if (!(step > 0.0) || stop < start) {
      throw UsageError("gamma grid must ascend: need step > 0 and stop >= start");
    }
    for (double g = start; g <= stop * (1.0 + 1e-12); g += step) grid.push_back(g);
  }
  for (double g : grid) {
    if (!(g > 0.0)) throw UsageError("gamma values must be positive");
  }
  return grid;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_solve(const DatasetOptions& data_opt, const GraphOptions& graph_opt,
              const SolveOptions& solve_opt) {
  const auto t_total = Clock::now();
  const LoadedDataset data = load_dataset(data_opt);
  fs::create_directories(solve_opt.out_dir);

  const auto t_graph = Clock::now();
  const WeightedGraph graph = build_knn_graph(data.data, graph_opt.knn, graph_opt.phi);
  const double graph_seconds = seconds_since(t_graph);
  Problem problem(data.data, graph, solve_opt.gamma);

  SolverConfig config;
  config.tol = solve_opt.tol;

  SolveResult result;
  double warmstart_seconds = 0.0;
  double solve_seconds = 0.0;
  int admm_sweeps = 0;
  if (solve_opt.solver == "iadmm") {
    const auto t0 = Clock::now();
    result = iadmm_run(problem, AdmmConfig{}, std::nullopt, AdmmStop::tolerance(solve_opt.tol));
    solve_seconds = seconds_since(t0);
    admm_sweeps = result.outer_iters;
  } else {
    std::optional<WarmStart> init;
    if (solve_opt.warmstart_iters > 0) {
      const auto t0 = Clock::now();
      SolveResult admm = iadmm_run(problem, AdmmConfig{}, std::nullopt,
                                   AdmmStop::budget(solve_opt.warmstart_iters));
      warmstart_seconds = seconds_since(t0);
      admm_sweeps = admm.outer_iters;
      init = WarmStart{std::move(admm.X), std::move(admm.U), std::move(admm.Z)};
    }
    const auto t0 = Clock::now();
    result = solve(problem, config, init);
    solve_seconds = seconds_since(t0);
  }

  const ClusterAssignment clusters =
      extract_clusters(result.X, graph, solve_opt.cluster_tol);

  json result_json = {
      {"gamma", solve_opt.gamma},
      {"solver", solve_opt.solver},
      {"converged", result.converged},
      {"kkt", kkt_json(result.kkt)},
      {"primal_obj", result.primal_obj},
      {"dual_obj", result.dual_obj},
      {"iterations",
       {{"outer", result.outer_iters},
        {"newton", result.total_newton_iters},
        {"cg", result.total_cg_iters},
        {"admm_sweeps", admm_sweeps}}},
      {"num_clusters", clusters.num_clusters},
      {"n", problem.n()},
      {"d", problem.d()},
      {"num_edges", graph.num_edges()}};

  json manifest = base_manifest("solve", data.descriptor, graph_opt);
  manifest["gamma"] = solve_opt.gamma;
  manifest["solver"] = solve_opt.solver;
  manifest["solver_config"] = solver_config_json(config);
  manifest["warmstart_iters"] = solve_opt.warmstart_iters;
  manifest["cluster_tol"] = solve_opt.cluster_tol;
  manifest["timings"] = {{"graph_s", graph_seconds},
                         {"warmstart_s", warmstart_seconds},
                         {"solve_s", solve_seconds},
                         {"total_s", seconds_since(t_total)}};
  manifest["summary"] = {{"converged", result.converged},
                         {"num_clusters", clusters.num_clusters},
                         {"kkt_max", result.kkt.max()}};

  const fs::path out(solve_opt.out_dir);
  write_atomic(out / "result.json", result_json.dump(2) + "\n");
  write_atomic(out / "centroids.csv", centroids_csv(result.X));
  write_atomic(out / "assignment.csv", assignment_csv(clusters.labels));
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "solve: converged=" << (result.converged ? "yes" : "no")
            << " kkt=" << result.kkt.max() << " clusters=" << clusters.num_clusters
            << " primal=" << result.primal_obj << " time=" << solve_seconds << "s\n";
  return result.converged ? 0 : 2;
}

int cmd_path(const DatasetOptions& data_opt, const GraphOptions& graph_opt,
             const SolveOptions& solve_opt) {
  const auto t_total = Clock::now();
  const LoadedDataset data = load_dataset(data_opt);
  fs::create_directories(solve_opt.out_dir);

  PathConfig config;
  config.gamma_grid = parse_gamma_grid(solve_opt.gamma_grid);
  config.solver.tol = solve_opt.tol;
  config.cluster_tol = solve_opt.cluster_tol;
  config.warmstart_sweeps = solve_opt.warmstart_iters;

  const ClusteringPath path =
      clustering_path(data.data, graph_opt.knn, graph_opt.phi, config);

  std::string jsonl;
  std::string summary =
      "gamma,num_clusters,primal_obj,eta_max,outer_iters,newton_iters,cg_iters,"
      "solve_seconds,warmstart_seconds,converged\n";
  bool all_converged = !path.points.empty() && !path.error.has_value();
  for (const PathPoint& point : path.points) {
    json record = {{"gamma", point.gamma},
                   {"num_clusters", point.num_clusters},
                   {"primal_obj", point.primal_obj},
                   {"eta_max", point.kkt.max()},
                   {"kkt", kkt_json(point.kkt)},
                   {"outer_iters", point.outer_iters},
                   {"newton_iters", point.newton_iters},
                   {"cg_iters", point.cg_iters},
                   {"solve_seconds", point.solve_seconds},
                   {"warmstart_seconds", point.warmstart_seconds},
                   {"converged", point.converged},
                   {"assignment", point.assignment}};
    jsonl += record.dump() + "\n";
    summary += format_double(point.gamma) + "," + std::to_string(point.num_clusters) + "," +
               format_double(point.primal_obj) + "," + format_double(point.kkt.max()) + "," +
               std::to_string(point.outer_iters) + "," + std::to_string(point.newton_iters) +
               "," + std::to_string(point.cg_iters) + "," +
               format_double(point.solve_seconds) + "," +
               format_double(point.warmstart_seconds) + "," +
               (point.converged ? "1" : "0") + "\n";
    all_converged = all_converged && point.converged;
  }

  json manifest = base_manifest("path", data.descriptor, graph_opt);
  manifest["gamma_grid"] = config.gamma_grid;
  manifest["solver_config"] = solver_config_json(config.solver);
  manifest["warmstart_sweeps"] = config.warmstart_sweeps;
  manifest["cluster_tol"] = config.cluster_tol;
  manifest["timings"] = {{"total_s", seconds_since(t_total)}};
  manifest["summary"] = {{"points", path.points.size()}, {"all_converged", all_converged}};
  if (path.error.has_value()) manifest["error"] = *path.error;

  const fs::path out(solve_opt.out_dir);
  write_atomic(out / "path.jsonl", jsonl);
  write_atomic(out / "path_summary.csv", summary);
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "path: " << path.points.size() << "/" << config.gamma_grid.size()
            << " grid points, all_converged=" << (all_converged ? "yes" : "no") << "\n";
  if (path.error.has_value()) {
    std::cerr << json{{"code", "numerical"}, {"message", *path.error}}.dump() << "\n";
  }
  return all_converged ? 0 : 2;
}

struct BenchOptions {
  std::string suite;
  std::string sizes = "500,1000,2000,5000,10000";
  std::string ks = "5,10,15,20,25,30,35,40,45,50";
  std::string gamma_grid;
  int n = 0;  // 0 = suite default
  int reps = 1;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string out_dir = ".";
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string token = text.substr(pos, comma - pos);
    try {
      out.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw UsageError("bad integer list component '" + token + "'");
    }
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  if (out.empty()) throw UsageError("empty list");
  std::sort(out.begin(), out.end());  // canonical cell order
  return out;
}

struct BenchCell {
  double key = 0.0;
  std::vector<double> solve_seconds;
  long total_newton = 0;
  long total_cg = 0;
  int solves = 0;
};

// runs the clustering path for one bench cell and accumulates SSNAL times
BenchCell run_cell(double key, const DataMatrix& data, int knn, double phi,
                   const std::vector<double>& grid, int reps, double tol) {
  BenchCell cell;
  cell.key = key;
  for (int rep = 0; rep < reps; ++rep) {
    PathConfig config;
    config.gamma_grid = grid;
    config.solver.tol = tol;
    const ClusteringPath path = clustering_path(data, knn, phi, config);
    if (path.error.has_value()) {
      throw NumericalError("bench cell failed: " + *path.error);
    }
    for (const PathPoint& point : path.points) {
      cell.solve_seconds.push_back(point.solve_seconds);
      cell.total_newton += point.newton_iters;
      cell.total_cg += point.cg_iters;
      ++cell.solves;
    }
  }
  return cell;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_bench(const BenchOptions& opt, const GraphOptions& graph_opt) {
  fs::create_directories(opt.out_dir);
  std::string csv = "suite,cell,n,k,solves,mean_solve_s,median_solve_s,max_solve_s,"
                    "total_newton,total_cg\n";
  std::vector<BenchCell> cells;
  std::vector<double> keys;
  std::vector<double> means;
  int n_for_suite = opt.n;

  std::string grid_text = opt.gamma_grid;
  if (grid_text.empty()) {
    grid_text = opt.suite == "gamma-sensitivity" ? "0.2:0.2:10" : "0.5:0.5:2.5";
  }
  const std::vector<double> grid = parse_gamma_grid(grid_text);

  if (opt.suite == "scaling-n") {
    for (int n : parse_int_list(opt.sizes)) {
      const LabeledDataset data = two_half_moons(n, 0.1, opt.seed + static_cast<std::uint64_t>(n));
      cells.push_back(run_cell(n, data.data, graph_opt.knn, graph_opt.phi, grid, opt.reps, opt.tol));
    }
  } else if (opt.suite == "scaling-k") {
    if (n_for_suite == 0) n_for_suite = 2000;
    const LabeledDataset data = two_half_moons(n_for_suite, 0.1, opt.seed);
    for (int k : parse_int_list(opt.ks)) {
      cells.push_back(run_cell(k, data.data, k, graph_opt.phi, grid, opt.reps, opt.tol));
    }
  } else if (opt.suite == "gamma-sensitivity") {
    if (n_for_suite == 0) n_for_suite = 1000;
    const LabeledDataset data = two_half_moons(n_for_suite, 0.1, opt.seed);
    // one path run; each gamma is its own cell
    const BenchCell all =
        run_cell(0, data.data, graph_opt.knn, graph_opt.phi, grid, opt.reps, opt.tol);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      BenchCell cell;
      cell.key = grid[g];
      for (int rep = 0; rep < opt.reps; ++rep) {
        cell.solve_seconds.push_back(all.solve_seconds[rep * grid.size() + g]);
      }
      cell.solves = opt.reps;
      cells.push_back(cell);
    }
  } else {
    throw UsageError("unknown suite '" + opt.suite + "'");
  }

  for (const BenchCell& cell : cells) {
    const int n = opt.suite == "scaling-n" ? static_cast<int>(cell.key)
                  : (n_for_suite > 0 ? n_for_suite : opt.n);
    const int k = opt.suite == "scaling-k" ? static_cast<int>(cell.key) : graph_opt.knn;
    csv += opt.suite + "," + format_double(cell.key) + "," + std::to_string(n) + "," +
           std::to_string(k) + "," + std::to_string(cell.solves) + "," +
           format_double(mean(cell.solve_seconds)) + "," +
           format_double(median(cell.solve_seconds)) + "," +
           format_double(*std::max_element(cell.solve_seconds.begin(), cell.solve_seconds.end())) +
           "," + std::to_string(cell.total_newton) + "," + std::to_string(cell.total_cg) + "\n";
    keys.push_back(cell.key);
    means.push_back(mean(cell.solve_seconds));
  }

  json manifest = base_manifest("bench", {{"source", "halfmoon"}, {"seed", opt.seed}}, graph_opt);
  manifest["suite"] = opt.suite;
  manifest["gamma_grid"] = grid;
  manifest["reps"] = opt.reps;
  manifest["tol"] = opt.tol;

  std::cout << csv;
  if (opt.suite == "scaling-n" || opt.suite == "scaling-k") {
    const double slope = fit_loglog_slope(keys, means);
    manifest["loglog_slope"] = slope;
    std::cout << "# log-log slope of mean solve time: " << slope << "\n";
  } else {
    std::vector<double> all;
    for (const BenchCell& cell : cells) all.push_back(mean(cell.solve_seconds));
    const double ratio = *std::max_element(all.begin(), all.end()) / median(all);
    manifest["max_over_median"] = ratio;
    std::cout << "# max/median solve time over the gamma grid: " << ratio << "\n";
  }

  const fs::path out(opt.out_dir);
  write_atomic(out / "bench.csv", csv);
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("SONCLUST_THREADS")) {
    const int count = std::atoi(threads);
    if (count > 0) Eigen::setNbThreads(count);
  }

  CLI::App app{"Weighted sum-of-norms convex clustering solver"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  DatasetOptions data_opt;
  GraphOptions graph_opt;
  SolveOptions solve_opt;
  BenchOptions bench_opt;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one problem instance");
  add_dataset_flags(solve_cmd, data_opt);
  add_graph_flags(solve_cmd, graph_opt);
  solve_cmd->add_option("--gamma", solve_opt.gamma, "Fusion penalty strength")
      ->required()
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol", solve_opt.tol, "Relative KKT tolerance");
  solve_cmd->add_option("--solver", solve_opt.solver, "ssnal or iadmm")
      ->check(CLI::IsMember({"ssnal", "iadmm"}));
  solve_cmd->add_option("--warmstart-iters", solve_opt.warmstart_iters,
                        "ADMM sweeps before the Newton solver (0 disables)");
  solve_cmd->add_option("--cluster-tol", solve_opt.cluster_tol, "Relative centroid merge tolerance");
  solve_cmd->add_option("--out", solve_opt.out_dir, "Output directory");

  CLI::App* path_cmd = app.add_subcommand("path", "Trace a clustering path over a gamma grid");
  add_dataset_flags(path_cmd, data_opt);
  add_graph_flags(path_cmd, graph_opt);
  path_cmd->add_option("--gamma-grid", solve_opt.gamma_grid, "Grid as start:step:stop or a single value")
      ->required();
  path_cmd->add_option("--tol", solve_opt.tol, "Relative KKT tolerance");
  path_cmd->add_option("--warmstart-iters", solve_opt.warmstart_iters,
                       "ADMM sweeps before the first grid point (0 disables)");
  path_cmd->add_option("--cluster-tol", solve_opt.cluster_tol, "Relative centroid merge tolerance");
  path_cmd->add_option("--out", solve_opt.out_dir, "Output directory");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  add_graph_flags(bench_cmd, graph_opt);
  bench_cmd->add_option("--suite", bench_opt.suite, "scaling-n, scaling-k, or gamma-sensitivity")
      ->required()
      ->check(CLI::IsMember({"scaling-n", "scaling-k", "gamma-sensitivity"}));
  bench_cmd->add_option("--sizes", bench_opt.sizes, "Comma list of n for scaling-n");
  bench_cmd->add_option("--ks", bench_opt.ks, "Comma list of k for scaling-k");
  bench_cmd->add_option("--gamma-grid", bench_opt.gamma_grid, "Grid per cell (suite default otherwise)");
  bench_cmd->add_option("--n", bench_opt.n, "Problem size for scaling-k / gamma-sensitivity");
  bench_cmd->add_option("--reps", bench_opt.reps, "Repetitions per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench_opt.seed, "Base seed (per-cell seeds derive from it)");
  bench_cmd->add_option("--tol", bench_opt.tol, "Relative KKT tolerance");
  bench_cmd->add_option("--out", bench_opt.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
    if (solve_cmd->parsed()) return cmd_solve(data_opt, graph_opt, solve_opt);
    if (path_cmd->parsed()) return cmd_path(data_opt, graph_opt, solve_opt);
    return cmd_bench(bench_opt, graph_opt);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << json{{"code", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << json{{"code", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"code", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << json{{"code", "numerical"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"code", "io"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
