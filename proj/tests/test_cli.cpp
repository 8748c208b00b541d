#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sonclust/datagen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  TempDir() {
    path = fs::temp_directory_path() / ("sonclust_cli_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
  fs::path path;
};

int run_cli(const std::string& args) {
  const std::string command = std::string(SONCLUST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json read_json(const fs::path& file) { return json::parse(slurp(file)); }

}  // namespace

TEST_CASE("solve writes artifacts and exits 0 on convergence") {
  TempDir dir;
  const int code =
      run_cli("solve --dataset halfmoon --n 200 --seed 1 --gamma 5 --out " + dir.str());
  CHECK(code == 0);
  for (const char* name : {"result.json", "centroids.csv", "assignment.csv", "manifest.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir.path / name));
  }
  const json result = read_json(dir.path / "result.json");
  CHECK(result["converged"].get<bool>());
  CHECK(result["num_clusters"].get<int>() == 2);
  CHECK(result["kkt"]["max"].get<double>() <= 1e-6);

  const json manifest = read_json(dir.path / "manifest.json");
  CHECK(manifest["version"] == "0.1.0");
  CHECK(manifest["dataset"]["seed"].get<int>() == 1);
  CHECK(manifest["solver_config"]["tol"].get<double>() == 1e-6);
}

TEST_CASE("missing --gamma is a usage error") {
  TempDir dir;
  CHECK(run_cli("solve --dataset halfmoon --n 50 --out " + dir.str()) == 1);
}

TEST_CASE("an unreachable tolerance exits 2 and reports honestly") {
  TempDir dir;
  const int code = run_cli(
      "solve --dataset halfmoon --n 40 --gamma 1 --tol 1e-15 --out " + dir.str());
  CHECK(code == 2);
  const json result = read_json(dir.path / "result.json");
  CHECK_FALSE(result["converged"].get<bool>());
}

TEST_CASE("unknown dataset and conflicting inputs are usage errors") {
  TempDir dir;
  CHECK(run_cli("solve --dataset blob --gamma 1 --out " + dir.str()) == 1);
  CHECK(run_cli("solve --gamma 1 --out " + dir.str()) == 1);  // neither input nor dataset
}

TEST_CASE("solver artifacts are bit-reproducible for a fixed seed") {
  TempDir a;
  TempDir b;
  const std::string flags = "solve --dataset halfmoon --n 120 --seed 9 --gamma 2 --out ";
  REQUIRE(run_cli(flags + a.str()) == 0);
  REQUIRE(run_cli(flags + b.str()) == 0);
  CHECK(slurp(a.path / "result.json") == slurp(b.path / "result.json"));
  CHECK(slurp(a.path / "centroids.csv") == slurp(b.path / "centroids.csv"));
  CHECK(slurp(a.path / "assignment.csv") == slurp(b.path / "assignment.csv"));
}

TEST_CASE("both solvers agree on the primal objective at tight tolerance") {
  TempDir a;
  TempDir b;
  const std::string base = "solve --dataset halfmoon --n 80 --seed 4 --gamma 1 --tol 1e-7 ";
  REQUIRE(run_cli(base + "--solver ssnal --out " + a.str()) == 0);
  REQUIRE(run_cli(base + "--solver iadmm --out " + b.str()) == 0);
  const double p_newton = read_json(a.path / "result.json")["primal_obj"].get<double>();
  const double p_admm = read_json(b.path / "result.json")["primal_obj"].get<double>();
  CHECK(std::abs(p_admm - p_newton) <= 1e-6 * std::abs(p_newton));
}

TEST_CASE("path emits one record per grid point") {
  TempDir dir;
  const int code = run_cli(
      "path --dataset halfmoon --n 120 --seed 2 --gamma-grid 0.5:0.5:2 --out " + dir.str());
  CHECK(code == 0);
  std::ifstream jsonl(dir.path / "path.jsonl");
  int records = 0;
  std::string line;
  int last_clusters = -1;
  while (std::getline(jsonl, line)) {
    const json record = json::parse(line);
    CHECK(record["converged"].get<bool>());
    CHECK(record["assignment"].size() == 120);
    last_clusters = record["num_clusters"].get<int>();
    ++records;
  }
  CHECK(records == 4);
  CHECK(last_clusters >= 1);

  const std::string summary = slurp(dir.path / "path_summary.csv");
  CHECK(summary.find("gamma,num_clusters") == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 5);  // header + 4 rows
}

TEST_CASE("descending or bad grids are usage errors") {
  TempDir dir;
  CHECK(run_cli("path --dataset halfmoon --n 50 --gamma-grid 2:-0.5:1 --out " + dir.str()) == 1);
  CHECK(run_cli("path --dataset halfmoon --n 50 --gamma-grid 5:1:2 --out " + dir.str()) == 1);
  CHECK(run_cli("path --dataset halfmoon --n 50 --gamma-grid nonsense --out " + dir.str()) == 1);
}

TEST_CASE("a single-element grid matches a solve run") {
  TempDir path_dir;
  TempDir solve_dir;
  REQUIRE(run_cli("path --dataset halfmoon --n 90 --seed 3 --gamma-grid 2 --out " +
                  path_dir.str()) == 0);
  REQUIRE(run_cli("solve --dataset halfmoon --n 90 --seed 3 --gamma 2 --out " +
                  solve_dir.str()) == 0);
  std::ifstream jsonl(path_dir.path / "path.jsonl");
  std::string line;
  REQUIRE(std::getline(jsonl, line));
  const json record = json::parse(line);
  const json result = read_json(solve_dir.path / "result.json");
  CHECK(record["primal_obj"].get<double>() ==
        doctest::Approx(result["primal_obj"].get<double>()).epsilon(1e-12));
  CHECK(record["num_clusters"] == result["num_clusters"]);
}

TEST_CASE("csv input round-trips through the solver") {
  TempDir dir;
  const sonclust::LabeledDataset data = sonclust::two_half_moons(60, 0.05, 5);
  const std::string csv = (dir.path / "input.csv").string();
  sonclust::save_csv(data.data, csv, /*rows_are_observations=*/true);
  const int code = run_cli("solve --input " + csv + " --gamma 3 --knn 8 --out " + dir.str());
  CHECK(code == 0);
  const json result = read_json(dir.path / "result.json");
  CHECK(result["n"].get<int>() == 60);
  CHECK(result["d"].get<int>() == 2);
}

TEST_CASE("bench gamma-sensitivity writes a csv table") {
  TempDir dir;
  const int code = run_cli(
      "bench --suite gamma-sensitivity --n 100 --gamma-grid 0.5:0.5:2 --out " + dir.str());
  CHECK(code == 0);
  const std::string csv = slurp(dir.path / "bench.csv");
  CHECK(csv.find("suite,cell") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 cells
  const json manifest = read_json(dir.path / "manifest.json");
  CHECK(manifest.contains("max_over_median"));
}
