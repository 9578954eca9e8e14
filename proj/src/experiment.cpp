#include "s3fse/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "s3fse/dataset.hpp"
#include "s3fse/graphs.hpp"
#include "s3fse/io.hpp"

namespace s3fse {

std::string to_string(Method m) {
  switch (m) {
    case Method::s3fse: return "s3fse";
    case Method::colgp: return "colgp";
    case Method::pca: return "pca";
    case Method::baseline: return "baseline";
  }
  throw std::logic_error("unknown method");
}

Method method_from_string(const std::string& s) {
  if (s == "s3fse") return Method::s3fse;
  if (s == "colgp") return Method::colgp;
  if (s == "pca") return Method::pca;
  if (s == "baseline") return Method::baseline;
  throw std::invalid_argument("unknown method '" + s + "'");
}

namespace {

struct Prepared {
  MultiViewDataset full_norm;  // every sample, z-scored
  MultiViewDataset train, test;
  std::vector<int> original_ids;  // label code mapped to class c at [c-1]
  SplitSpec split;
  S3FSEConfig solver;
  bool has_raster = false;
  int width = 0, height = 0;
  std::string input_kind;
  std::optional<SyntheticSpec> synth_spec;
};

LabelVector dummy_labels(Eigen::Index n) {
  LabelVector l;
  l.num_classes = 1;
  l.classes.assign(static_cast<std::size_t>(n), 1);
  return l;
}

Prepared prepare(const ExperimentConfig& cfg) {
  Prepared prep;
  prep.split = cfg.split;
  prep.split.seed = cfg.seed + 1;
  prep.solver = cfg.solver;
  prep.solver.seed = cfg.seed + 2;

  MultiViewDataset full;
  std::vector<int> codes;

  const int sources = (!cfg.cube_header.empty() ? 1 : 0) +
                      (!cfg.view_csvs.empty() ? 1 : 0) +
                      (cfg.synthetic.has_value() ? 1 : 0);
  if (sources != 1) {
    throw std::invalid_argument(
        "experiment: exactly one input source (cube, view CSVs, or synthetic) "
        "must be given");
  }

  if (cfg.synthetic.has_value()) {
    prep.input_kind = "synthetic";
    SyntheticSpec sp = *cfg.synthetic;
    sp.seed = cfg.seed;
    prep.synth_spec = sp;
    SyntheticDataset synth = synth_generate(sp);
    full = std::move(synth.data);
    codes = full.labels.classes;
  } else if (!cfg.cube_header.empty()) {
    prep.input_kind = "cube";
    if (cfg.labels_path.empty()) {
      throw std::invalid_argument("experiment: cube input needs a label raster");
    }
    const HyperspectralCube cube = load_cube(cfg.cube_header);
    prep.has_raster = true;
    prep.width = cube.width;
    prep.height = cube.height;
    codes = load_label_raster(cfg.labels_path);
    if (static_cast<int>(codes.size()) != cube.pixels()) {
      throw std::invalid_argument(
          "experiment: label raster length does not match cube pixels");
    }
    full.views.push_back(spectral_view(cube));
    full.views.push_back(gabor_texture(cube, cfg.gabor));
    full.views.push_back(dmp_features(cube, cfg.dmp));
  } else {
    prep.input_kind = "csv";
    if (cfg.labels_path.empty()) {
      throw std::invalid_argument("experiment: csv input needs a label file");
    }
    for (const auto& path : cfg.view_csvs) {
      full.views.push_back(load_view_csv(path));
    }
    codes = load_label_raster(cfg.labels_path);
    if (full.views.empty() ||
        static_cast<Eigen::Index>(codes.size()) != full.views.front().n()) {
      throw std::invalid_argument(
          "experiment: label count does not match view samples");
    }
  }

  full.labels = dummy_labels(full.views.front().n());
  prep.full_norm = normalize_views(full);

  std::vector<Eigen::Index> labeled_idx;
  std::vector<int> labeled_codes;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] != 0) {
      labeled_idx.push_back(static_cast<Eigen::Index>(i));
      labeled_codes.push_back(codes[i]);
    }
  }
  if (labeled_idx.empty()) {
    throw std::invalid_argument("experiment: no labeled samples");
  }
  LabelRemap remap = remap_labels(labeled_codes);
  prep.original_ids = remap.original_ids;

  MultiViewDataset labeled = take_rows(prep.full_norm, labeled_idx);
  labeled.labels = remap.labels;

  auto [train_idx, test_idx] = stratified_split_indices(labeled.labels, prep.split);
  prep.train = take_rows(labeled, train_idx);
  prep.test = take_rows(labeled, test_idx);
  return prep;
}

struct MethodEval {
  MethodResult result;
  std::optional<ProjectionMatrix> projection;
  std::optional<SolveTrace> trace;
  std::vector<int> map_pred;  // per-sample predictions over full_norm
};

MethodEval evaluate_method(const Prepared& prep, Method method,
                           const S3FSEConfig& solver_cfg, int k_cls,
                           bool want_map) {
  MethodEval ev;
  ev.result.method = method;
  const auto tic = std::chrono::steady_clock::now();

  Eigen::MatrixXd embed_train, embed_test, embed_full;
  switch (method) {
    case Method::baseline: {
      embed_train = stack_views(prep.train).values;
      embed_test = stack_views(prep.test).values;
      if (want_map) embed_full = stack_views(prep.full_norm).values;
      break;
    }
    case Method::pca: {
      const PcaModel model = pca_fit(stack_views(prep.train), solver_cfg.d);
      embed_train = model.transform(stack_views(prep.train).values);
      embed_test = model.transform(stack_views(prep.test).values);
      if (want_map) embed_full = model.transform(stack_views(prep.full_norm).values);
      break;
    }
    case Method::colgp: {
      const ProjectionMatrix P = colgp_fit(prep.train, solver_cfg);
      embed_train = project(prep.train, P);
      embed_test = project(prep.test, P);
      if (want_map) embed_full = project(prep.full_norm, P);
      ev.projection = P;
      break;
    }
    case Method::s3fse: {
      auto [P, trace] = fit(prep.train, solver_cfg);
      embed_train = project(prep.train, P);
      embed_test = project(prep.test, P);
      if (want_map) embed_full = project(prep.full_norm, P);
      ev.projection = std::move(P);
      ev.trace = std::move(trace);
      break;
    }
  }

  const std::vector<int>& train_labels = prep.train.labels.classes;
  const std::vector<int> pred =
      knn_classify(embed_train, train_labels, embed_test, k_cls);
  const auto toc = std::chrono::steady_clock::now();

  ev.result.cm = ConfusionMatrix::from_predictions(
      prep.test.labels.classes, pred, prep.train.labels.num_classes);
  ev.result.oa = overall_accuracy(ev.result.cm);
  ev.result.kappa_value = kappa(ev.result.cm);
  ev.result.class_acc = class_accuracies(ev.result.cm);
  ev.result.runtime_seconds = std::chrono::duration<double>(toc - tic).count();

  if (want_map) {
    ev.map_pred = knn_classify(embed_train, train_labels, embed_full, k_cls);
  }
  return ev;
}

void write_metrics_csv(const std::vector<MethodResult>& results,
                       const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "method,class,accuracy,oa,kappa,runtime_seconds\n";
  for (const auto& r : results) {
    for (std::size_t c = 0; c < r.class_acc.size(); ++c) {
      f << to_string(r.method) << "," << (c + 1) << ",";
      if (r.class_acc[c].has_value()) f << format_double(*r.class_acc[c]);
      f << ",,,\n";
    }
    f << to_string(r.method) << ",overall,," << format_double(r.oa) << ","
      << format_double(r.kappa_value) << ","
      << format_double(r.runtime_seconds) << "\n";
  }
}

void write_sparsity_report(const RowSupport& rs,
                           const std::vector<std::string>& view_names,
                           const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "tau=" << format_double(rs.tau) << "\n";
  f << "overall_row_sparsity=" << format_double(rs.overall_sparsity) << "\n";
  f << "entry_sparsity=" << format_double(rs.entry_sparsity) << "\n";
  for (std::size_t v = 0; v < rs.selected.size(); ++v) {
    f << "view=" << view_names[v]
      << " sparsity=" << format_double(rs.view_sparsity[v])
      << " selected=";
    for (std::size_t i = 0; i < rs.selected[v].size(); ++i) {
      f << (i ? "," : "") << rs.selected[v][i];
    }
    f << "\n";
  }
}

std::uint8_t class_gray(int cls, int num_classes) {
  return static_cast<std::uint8_t>(
      std::lround(255.0 * cls / static_cast<double>(num_classes)));
}

void write_manifest(const ExperimentConfig& cfg, const Prepared& prep,
                    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "input=" << prep.input_kind << "\n";
  if (!cfg.cube_header.empty()) f << "cube=" << cfg.cube_header << "\n";
  for (const auto& v : cfg.view_csvs) f << "view_csv=" << v << "\n";
  if (!cfg.labels_path.empty()) f << "labels=" << cfg.labels_path << "\n";
  if (prep.synth_spec.has_value()) {
    const auto& sp = *prep.synth_spec;
    f << "synth_n_per_class=" << sp.n_per_class << "\n"
      << "synth_classes=" << sp.num_classes << "\n"
      << "synth_view_dims=";
    for (std::size_t i = 0; i < sp.view_dims.size(); ++i) {
      f << (i ? "," : "") << sp.view_dims[i];
    }
    f << "\nsynth_separation=" << format_double(sp.class_separation) << "\n"
      << "synth_noise_sigma=" << format_double(sp.noise_sigma) << "\n"
      << "synth_redundant_frac=" << format_double(sp.redundant_frac) << "\n"
      << "synth_seed=" << sp.seed << "\n";
  }
  if (prep.has_raster) {
    f << "width=" << prep.width << "\nheight=" << prep.height << "\n";
    f << "gabor_kernel_size=" << cfg.gabor.kernel_size << "\n";
    f << "gabor_scales=" << cfg.gabor.scales.size() << "\n";
    f << "gabor_directions=" << cfg.gabor.directions.size() << "\n";
    f << "dmp_radii=";
    for (std::size_t i = 0; i < cfg.dmp.radii.size(); ++i) {
      f << (i ? "," : "") << cfg.dmp.radii[i];
    }
    f << "\ndmp_num_pcs=" << cfg.dmp.num_pcs << "\n";
  }
  f << "n_total=" << prep.full_norm.n() << "\n";
  f << "n_train=" << prep.train.n() << "\n";
  f << "n_test=" << prep.test.n() << "\n";
  f << "num_classes=" << prep.train.labels.num_classes << "\n";
  f << "views=";
  for (std::size_t v = 0; v < prep.full_norm.views.size(); ++v) {
    f << (v ? "," : "") << prep.full_norm.views[v].name;
  }
  f << "\nview_dims=";
  for (std::size_t v = 0; v < prep.full_norm.views.size(); ++v) {
    f << (v ? "," : "") << prep.full_norm.views[v].dim();
  }
  f << "\nmethods=";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    f << (i ? "," : "") << to_string(cfg.methods[i]);
  }
  f << "\nper_class_train=" << prep.split.per_class_train << "\n";
  f << "seed=" << cfg.seed << "\n";
  f << "split_seed=" << prep.split.seed << "\n";
  f << "solver_seed=" << prep.solver.seed << "\n";
  f << "alpha=" << format_double(prep.solver.alpha) << "\n";
  f << "beta=" << format_double(prep.solver.beta) << "\n";
  f << "d=" << prep.solver.d << "\n";
  f << "k=" << prep.solver.k << "\n";
  f << "t=" << format_double(prep.solver.t) << "\n";
  f << "max_iter=" << prep.solver.max_iter << "\n";
  f << "tol=" << format_double(prep.solver.tol) << "\n";
  f << "eps_row=" << format_double(prep.solver.eps_row) << "\n";
  f << "ridge=" << format_double(prep.solver.ridge) << "\n";
  f << "k_cls=" << cfg.k_cls << "\n";
  for (std::size_t c = 0; c < prep.original_ids.size(); ++c) {
    f << "label_map_class_" << (c + 1) << "=" << prep.original_ids[c] << "\n";
  }
  if (prep.has_raster) {
    for (int c = 1; c <= prep.train.labels.num_classes; ++c) {
      f << "map_gray_class_" << c << "="
        << static_cast<int>(class_gray(c, prep.train.labels.num_classes))
        << "\n";
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) {
    throw std::invalid_argument("experiment: at least one method required");
  }
  if (cfg.out_dir.empty()) {
    throw std::invalid_argument("experiment: output directory required");
  }
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path out(cfg.out_dir);

  const Prepared prep = prepare(cfg);
  const Method map_method = cfg.map_method.empty()
                                ? cfg.methods.front()
                                : method_from_string(cfg.map_method);

  ExperimentResult result;
  for (Method method : cfg.methods) {
    const bool want_map = prep.has_raster && method == map_method;
    MethodEval ev = evaluate_method(prep, method, prep.solver, cfg.k_cls,
                                    want_map);
    if (method == Method::s3fse && ev.projection.has_value()) {
      const auto trace_path = (out / "trace.csv").string();
      save_trace(*ev.trace, trace_path);
      result.artifacts.push_back(trace_path);

      const auto sparsity_path = (out / "sparsity.txt").string();
      write_sparsity_report(row_support(*ev.projection),
                            ev.projection->view_names, sparsity_path);
      result.artifacts.push_back(sparsity_path);

      const auto proj_path = (out / "projection.txt").string();
      save_projection(*ev.projection, prep.solver, "s3fse", proj_path);
      result.artifacts.push_back(proj_path);
    }
    if (want_map) {
      std::vector<std::uint8_t> gray(ev.map_pred.size());
      for (std::size_t i = 0; i < ev.map_pred.size(); ++i) {
        gray[i] = class_gray(ev.map_pred[i], prep.train.labels.num_classes);
      }
      const auto map_path = (out / "map.pgm").string();
      save_pgm(map_path, prep.width, prep.height, gray);
      result.artifacts.push_back(map_path);
    }
    result.methods.push_back(std::move(ev.result));
  }

  const auto metrics_path = (out / "metrics.csv").string();
  write_metrics_csv(result.methods, metrics_path);
  result.artifacts.push_back(metrics_path);

  const auto manifest_path = (out / "manifest.txt").string();
  write_manifest(cfg, prep, manifest_path);
  result.artifacts.push_back(manifest_path);
  return result;
}

std::vector<SweepRow> sweep_dimension(const ExperimentConfig& cfg,
                                      const std::vector<int>& d_values) {
  if (cfg.methods.empty()) {
    throw std::invalid_argument("experiment: at least one method required");
  }
  if (d_values.empty()) {
    throw std::invalid_argument("sweep: need at least one d value");
  }
  if (cfg.out_dir.empty()) {
    throw std::invalid_argument("experiment: output directory required");
  }
  std::filesystem::create_directories(cfg.out_dir);

  const Prepared prep = prepare(cfg);
  const Eigen::Index m = prep.train.total_dim();
  for (int d : d_values) {
    if (d < 1 || d > m) {
      throw std::invalid_argument("sweep: d=" + std::to_string(d) +
                                  " outside [1, " + std::to_string(m) + "]");
    }
  }

  std::vector<SweepRow> rows;
  for (int d : d_values) {
    S3FSEConfig solver = prep.solver;
    solver.d = d;
    for (Method method : cfg.methods) {
      MethodEval ev = evaluate_method(prep, method, solver, cfg.k_cls, false);
      rows.push_back({method, d, ev.result.oa});
    }
  }

  const auto path = (std::filesystem::path(cfg.out_dir) / "sweep.csv").string();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "method,d,oa\n";
  for (const auto& row : rows) {
    f << to_string(row.method) << "," << row.d << "," << format_double(row.oa)
      << "\n";
  }
  return rows;
}

}  // namespace s3fse
