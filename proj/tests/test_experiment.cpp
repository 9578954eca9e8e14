#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "s3fse/experiment.hpp"
#include "s3fse/io.hpp"
#include "s3fse/rng.hpp"

using namespace s3fse;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& tag) {
  const auto p = fs::temp_directory_path() / ("s3fse_exp_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentConfig synthetic_config(const fs::path& out, std::uint64_t seed) {
  ExperimentConfig cfg;
  SyntheticSpec spec;
  cfg.synthetic = spec;
  cfg.split.per_class_train = 30;
  cfg.solver.d = 12;
  cfg.out_dir = out.string();
  cfg.seed = seed;
  return cfg;
}

HyperspectralCube tiny_cube(int w, int h, int b, std::uint64_t seed) {
  HyperspectralCube cube;
  cube.width = w;
  cube.height = h;
  cube.bands = b;
  cube.data.resize(static_cast<std::size_t>(w) * h * b);
  Rng rng(seed);
  for (auto& v : cube.data) v = static_cast<float>(rng.normal());
  return cube;
}

}  // namespace

TEST_CASE("baseline on separable synthetic data reaches OA 1.0") {
  const auto out = fresh_dir("baseline");
  auto cfg = synthetic_config(out, 5);
  cfg.synthetic->noise_sigma = 0.0;
  cfg.methods = {Method::baseline};
  const auto result = run_experiment(cfg);
  CHECK(result.methods.size() == 1);
  CHECK(result.methods[0].oa == 1.0);

  const auto rows = read_csv((out / "metrics.csv").string());
  CHECK(rows[0] == std::vector<std::string>{"method", "class", "accuracy", "oa",
                                            "kappa", "runtime_seconds"});
  bool found_overall = false;
  for (const auto& row : rows) {
    if (row.size() >= 4 && row[0] == "baseline" && row[1] == "overall") {
      CHECK(row[3] == "1");
      found_overall = true;
    }
  }
  CHECK(found_overall);
}

TEST_CASE("s3fse run writes a non-increasing objective trace") {
  const auto out = fresh_dir("trace");
  auto cfg = synthetic_config(out, 6);
  cfg.methods = {Method::s3fse};
  run_experiment(cfg);
  const auto rows = read_csv((out / "trace.csv").string());
  REQUIRE(rows.size() >= 3);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double obj = std::stod(rows[i][1]);
    CHECK(obj <= prev + 1e-8);
    prev = obj;
  }
  CHECK(fs::exists(out / "sparsity.txt"));
  CHECK(fs::exists(out / "projection.txt"));
  CHECK(fs::exists(out / "manifest.txt"));
}

TEST_CASE("cube input produces a class map with raster dimensions") {
  const auto out = fresh_dir("cube");
  const auto data_dir = fresh_dir("cube_data");
  const auto cube = tiny_cube(33, 32, 12, 7);
  const auto hdr = (data_dir / "scene.hdr").string();
  save_cube(cube, hdr);

  std::vector<int> codes(static_cast<std::size_t>(cube.pixels()), 0);
  Rng rng(8);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const auto r = rng.index(4);
    codes[i] = r < 2 ? static_cast<int>(r) + 1 : 0;  // classes 1..2, rest unlabeled
  }
  const auto labels_path = (data_dir / "labels.txt").string();
  save_label_raster(codes, labels_path);

  ExperimentConfig cfg;
  cfg.cube_header = hdr;
  cfg.labels_path = labels_path;
  cfg.split.per_class_train = 20;
  cfg.methods = {Method::baseline};
  cfg.out_dir = out.string();
  cfg.seed = 9;
  const auto result = run_experiment(cfg);
  CHECK(result.methods[0].oa > 0.0);

  std::ifstream pgm((out / "map.pgm").string(), std::ios::binary);
  REQUIRE(pgm.good());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  pgm >> magic >> w >> h >> maxval;
  CHECK(magic == "P5");
  CHECK(w == 33);
  CHECK(h == 32);
  CHECK(maxval == 255);

  const std::string manifest = read_file((out / "manifest.txt").string());
  for (const char* key :
       {"alpha=", "beta=", "d=", "k=", "t=", "max_iter=", "tol=", "eps_row=",
        "ridge=", "per_class_train=", "seed=", "split_seed=", "solver_seed=",
        "k_cls=", "map_gray_class_1=", "width=33", "height=32"}) {
    INFO(key);
    CHECK(manifest.find(key) != std::string::npos);
  }
}

TEST_CASE("experiments are reproducible modulo wall-clock fields") {
  const auto out_a = fresh_dir("repro_a");
  const auto out_b = fresh_dir("repro_b");
  auto cfg = synthetic_config(out_a, 11);
  cfg.methods = {Method::s3fse, Method::baseline};
  run_experiment(cfg);
  cfg.out_dir = out_b.string();
  run_experiment(cfg);

  CHECK(read_file((out_a / "manifest.txt").string()) ==
        read_file((out_b / "manifest.txt").string()));
  CHECK(read_file((out_a / "sparsity.txt").string()) ==
        read_file((out_b / "sparsity.txt").string()));
  CHECK(read_file((out_a / "projection.txt").string()) ==
        read_file((out_b / "projection.txt").string()));

  const auto metrics_a = read_csv((out_a / "metrics.csv").string());
  const auto metrics_b = read_csv((out_b / "metrics.csv").string());
  REQUIRE(metrics_a.size() == metrics_b.size());
  for (std::size_t r = 0; r < metrics_a.size(); ++r) {
    for (std::size_t c = 0; c + 1 < metrics_a[r].size(); ++c) {
      CHECK(metrics_a[r][c] == metrics_b[r][c]);  // all but runtime_seconds
    }
  }
  const auto trace_a = read_csv((out_a / "trace.csv").string());
  const auto trace_b = read_csv((out_b / "trace.csv").string());
  REQUIRE(trace_a.size() == trace_b.size());
  for (std::size_t r = 0; r < trace_a.size(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) {  // iteration, objective, sparsity
      CHECK(trace_a[r][c] == trace_b[r][c]);
    }
  }
}

TEST_CASE("sweep: singleton d matches run_experiment, rows complete") {
  const auto out_run = fresh_dir("sweep_run");
  auto cfg = synthetic_config(out_run, 12);
  cfg.methods = {Method::colgp, Method::baseline};
  const auto run_result = run_experiment(cfg);

  const auto out_sweep = fresh_dir("sweep_one");
  cfg.out_dir = out_sweep.string();
  const auto rows = sweep_dimension(cfg, {cfg.solver.d});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == Method::colgp);
  CHECK(rows[0].oa == run_result.methods[0].oa);
  CHECK(rows[1].oa == run_result.methods[1].oa);

  const auto csv = read_csv((out_sweep / "sweep.csv").string());
  CHECK(csv.size() == 3);  // header + |methods| x |d_values|
  CHECK(csv[0] == std::vector<std::string>{"method", "d", "oa"});
}

TEST_CASE("sweep: s3fse OA plateaus within 2% of its best for d >= 10") {
  const auto out = fresh_dir("sweep_curve");
  auto cfg = synthetic_config(out, 13);
  cfg.methods = {Method::s3fse};
  std::vector<int> d_values;
  for (int d = 1; d <= 20; ++d) d_values.push_back(d);
  const auto rows = sweep_dimension(cfg, d_values);
  REQUIRE(rows.size() == 20);
  double best = 0.0;
  for (const auto& row : rows) best = std::max(best, row.oa);
  for (const auto& row : rows) {
    if (row.d >= 10) CHECK(row.oa >= best - 0.02);
  }
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.out_dir = fresh_dir("bad").string();
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);  // no input
  cfg.synthetic = SyntheticSpec{};
  cfg.methods = {};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);  // no methods
  cfg.methods = {Method::baseline};
  cfg.view_csvs = {"x.csv"};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);  // two sources
}

TEST_CASE("method names round trip") {
  for (Method method : {Method::s3fse, Method::colgp, Method::pca, Method::baseline}) {
    CHECK(method_from_string(to_string(method)) == method);
  }
  CHECK_THROWS_AS(method_from_string("svm"), std::invalid_argument);
}
