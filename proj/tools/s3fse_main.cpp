#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "s3fse/dataset.hpp"
#include "s3fse/experiment.hpp"
#include "s3fse/features.hpp"
#include "s3fse/io.hpp"
#include "s3fse/solver.hpp"
#include "s3fse/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

// key=value config support: entries become flags unless the flag was
// already given on the command line, so explicit flags win.
std::vector<std::string> merge_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;

  std::ifstream f(config_path);
  if (!f) throw std::runtime_error("cannot open config file: " + config_path);
  std::string line;
  while (std::getline(f, line)) {
    const auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r\n");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config file: malformed line '" + line + "'");
    }
    const std::string flag = "--" + line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    bool present = false;
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    }
    if (present) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value != "false") {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

std::vector<int> iota_vec(int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

void add_solver_flags(CLI::App* cmd, s3fse::S3FSEConfig& solver) {
  cmd->add_option("--alpha", solver.alpha, "co-graph regularization weight");
  cmd->add_option("--beta", solver.beta, "l2,1 regularization weight");
  cmd->add_option("--dim", solver.d, "target subspace dimensionality");
  cmd->add_option("--knn", solver.k, "neighbor count for the per-view graphs");
  cmd->add_option("--kernel-width", solver.t, "heat-kernel width t");
  cmd->add_option("--max-iter", solver.max_iter, "maximum solver iterations");
  cmd->add_option("--tol", solver.tol, "relative objective-change threshold");
  cmd->add_option("--eps-row", solver.eps_row, "row-norm floor for reweighting");
  cmd->add_option("--ridge", solver.ridge, "constraint regularizer");
}

struct SynthFlags {
  s3fse::SyntheticSpec spec;
  void add(CLI::App* cmd) {
    cmd->add_option("--classes", spec.num_classes, "number of classes");
    cmd->add_option("--n-per-class", spec.n_per_class, "samples per class");
    cmd->add_option("--view-dims", spec.view_dims, "per-view dimensionalities")
        ->delimiter(',');
    cmd->add_option("--separation", spec.class_separation,
                    "latent class separation");
    cmd->add_option("--noise-sigma", spec.noise_sigma, "view noise sigma");
    cmd->add_option("--redundant-frac", spec.redundant_frac,
                    "fraction of pure-noise columns per view");
  }
};

struct FeatureFlags {
  int gabor_scales = 5;
  int gabor_directions = 12;
  s3fse::GaborBankSpec gabor;
  s3fse::DmpSpec dmp;
  void add(CLI::App* cmd) {
    cmd->add_option("--gabor-scales", gabor_scales, "number of Gabor scales");
    cmd->add_option("--gabor-directions", gabor_directions,
                    "number of Gabor directions");
    cmd->add_option("--gabor-kernel", gabor.kernel_size,
                    "Gabor kernel size (odd)");
    cmd->add_option("--dmp-radii", dmp.radii,
                    "disk radii for the morphological profile")
        ->delimiter(',');
    cmd->add_option("--dmp-pcs", dmp.num_pcs,
                    "number of PC images for the profile");
  }
  void finalize() {
    gabor.scales = iota_vec(gabor_scales);
    gabor.directions = iota_vec(gabor_directions);
  }
};

void print_results(const s3fse::ExperimentResult& result) {
  for (const auto& r : result.methods) {
    std::cout << s3fse::to_string(r.method) << ": OA=" << r.oa
              << " kappa=" << r.kappa_value << " time=" << r.runtime_seconds
              << "s\n";
  }
  for (const auto& a : result.artifacts) std::cout << "wrote " << a << "\n";
}

int run_synth(const s3fse::SyntheticSpec& spec, const std::string& out_dir) {
  const s3fse::SyntheticDataset synth = s3fse::synth_generate(spec);
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  for (std::size_t v = 0; v < synth.data.views.size(); ++v) {
    s3fse::save_view_csv(synth.data.views[v],
                         (out / (synth.data.views[v].name + ".csv")).string());
  }
  s3fse::save_label_raster(synth.data.labels.classes,
                           (out / "labels.txt").string());
  std::ofstream noise((out / "noise_columns.txt").string());
  for (std::size_t v = 0; v < synth.noise_columns.size(); ++v) {
    noise << synth.data.views[v].name << "=";
    for (std::size_t i = 0; i < synth.noise_columns[v].size(); ++i) {
      noise << (i ? "," : "") << synth.noise_columns[v][i];
    }
    noise << "\n";
  }
  std::cout << "wrote " << synth.data.views.size() << " views, n="
            << synth.data.n() << " to " << out_dir << "\n";
  return 0;
}

int run_features(const std::string& cube_path, FeatureFlags& ff,
                 const std::string& out_dir) {
  ff.finalize();
  const s3fse::HyperspectralCube cube = s3fse::load_cube(cube_path);
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  s3fse::save_view_csv(s3fse::spectral_view(cube),
                       (out / "spectral.csv").string());
  s3fse::save_view_csv(s3fse::gabor_texture(cube, ff.gabor),
                       (out / "texture.csv").string());
  s3fse::save_view_csv(s3fse::dmp_features(cube, ff.dmp),
                       (out / "dmp.csv").string());
  std::cout << "wrote spectral/texture/dmp views to " << out_dir << "\n";
  return 0;
}

s3fse::MultiViewDataset load_csv_dataset(const std::vector<std::string>& views,
                                         const std::string& labels_path) {
  s3fse::MultiViewDataset ds;
  for (const auto& path : views) ds.views.push_back(s3fse::load_view_csv(path));
  const std::vector<int> codes = s3fse::load_label_raster(labels_path);
  std::vector<int> nonzero;
  for (int c : codes) {
    if (c != 0) nonzero.push_back(c);
  }
  if (nonzero.size() != codes.size()) {
    throw std::invalid_argument(
        "fit/eval expect fully labeled csv data (no 0 codes)");
  }
  ds.labels = s3fse::remap_labels(codes).labels;
  ds.validate();
  return ds;
}

int run_fit(const std::vector<std::string>& views, const std::string& labels,
            const std::string& method, const s3fse::S3FSEConfig& solver,
            std::uint64_t seed, const std::string& out_dir) {
  s3fse::S3FSEConfig cfg = solver;
  cfg.seed = seed;
  const s3fse::MultiViewDataset ds =
      s3fse::normalize_views(load_csv_dataset(views, labels));
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  if (method == "colgp") {
    const s3fse::ProjectionMatrix P = s3fse::colgp_fit(ds, cfg);
    s3fse::save_projection(P, cfg, method, (out / "projection.txt").string());
  } else if (method == "s3fse") {
    const auto [P, trace] = s3fse::fit(ds, cfg);
    s3fse::save_projection(P, cfg, method, (out / "projection.txt").string());
    s3fse::save_trace(trace, (out / "trace.csv").string());
    std::cout << "converged=" << (trace.converged ? "yes" : "no")
              << " iterations=" << trace.iterations << "\n";
  } else {
    throw std::invalid_argument("fit: method must be s3fse or colgp");
  }
  std::cout << "wrote " << (out / "projection.txt").string() << "\n";
  return 0;
}

int run_eval(const std::vector<std::string>& views, const std::string& labels,
             const std::string& projection_path, int per_class_train,
             int k_cls, std::uint64_t seed, const std::string& out_dir) {
  const s3fse::LoadedProjection loaded =
      s3fse::load_projection(projection_path);
  const s3fse::MultiViewDataset ds =
      s3fse::normalize_views(load_csv_dataset(views, labels));
  s3fse::SplitSpec split;
  split.per_class_train = per_class_train;
  split.seed = seed;
  const auto [train, test] = s3fse::stratified_split(ds, split);
  const Eigen::MatrixXd embed_train = s3fse::project(train, loaded.projection);
  const Eigen::MatrixXd embed_test = s3fse::project(test, loaded.projection);
  const std::vector<int> pred = s3fse::knn_classify(
      embed_train, train.labels.classes, embed_test, k_cls);
  const auto cm = s3fse::ConfusionMatrix::from_predictions(
      test.labels.classes, pred, train.labels.num_classes);

  fs::create_directories(out_dir);
  std::ofstream f((fs::path(out_dir) / "metrics.csv").string());
  f << "method,class,accuracy,oa,kappa,runtime_seconds\n";
  const auto acc = s3fse::class_accuracies(cm);
  for (std::size_t c = 0; c < acc.size(); ++c) {
    f << loaded.method << "," << (c + 1) << ",";
    if (acc[c].has_value()) f << s3fse::format_double(*acc[c]);
    f << ",,,\n";
  }
  f << loaded.method << ",overall,,"
    << s3fse::format_double(s3fse::overall_accuracy(cm)) << ","
    << s3fse::format_double(s3fse::kappa(cm)) << ",\n";
  std::cout << "OA=" << s3fse::overall_accuracy(cm)
            << " kappa=" << s3fse::kappa(cm) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "s3fse: simultaneous multi-view feature selection and extraction"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  SynthFlags synth_flags;
  std::string synth_out;
  std::uint64_t synth_seed = 0;
  synth_flags.add(synth);
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--out", synth_out, "output directory")->required();

  // features
  auto* features = app.add_subcommand(
      "features", "extract spectral/texture/morphology views from a cube");
  FeatureFlags feature_flags;
  std::string feat_cube, feat_out;
  features->add_option("--cube", feat_cube, "cube header file")->required();
  feature_flags.add(features);
  features->add_option("--out", feat_out, "output directory")->required();

  // fit
  auto* fitc = app.add_subcommand(
      "fit", "learn a projection from fully labeled view CSVs");
  std::vector<std::string> fit_views;
  std::string fit_labels, fit_method = "s3fse", fit_out;
  std::uint64_t fit_seed = 42;
  s3fse::S3FSEConfig fit_solver;
  fitc->add_option("--views", fit_views, "view CSV files")
      ->required()
      ->delimiter(',');
  fitc->add_option("--labels", fit_labels, "label file")->required();
  fitc->add_option("--method", fit_method, "s3fse or colgp");
  add_solver_flags(fitc, fit_solver);
  fitc->add_option("--seed", fit_seed, "initialization seed");
  fitc->add_option("--out", fit_out, "output directory")->required();

  // eval
  auto* evalc = app.add_subcommand(
      "eval", "split, embed with a stored projection, and classify");
  std::vector<std::string> eval_views;
  std::string eval_labels, eval_proj, eval_out;
  int eval_pct = 30, eval_kcls = 5;
  std::uint64_t eval_seed = 0;
  evalc->add_option("--views", eval_views, "view CSV files")
      ->required()
      ->delimiter(',');
  evalc->add_option("--labels", eval_labels, "label file")->required();
  evalc->add_option("--projection", eval_proj, "projection file")->required();
  evalc->add_option("--per-class-train", eval_pct, "train samples per class");
  evalc->add_option("--k-cls", eval_kcls, "kNN classifier neighbors");
  evalc->add_option("--seed", eval_seed, "split seed");
  evalc->add_option("--out", eval_out, "output directory")->required();

  // run / sweep share the experiment flags
  s3fse::ExperimentConfig run_cfg;
  SynthFlags run_synth_flags;
  FeatureFlags run_feature_flags;
  std::vector<std::string> run_methods;
  bool run_use_synth = false;
  std::vector<int> sweep_dims;

  std::string config_path;
  auto add_experiment_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "key=value config file (command line wins)");
    cmd->add_option("--cube", run_cfg.cube_header, "cube header file");
    cmd->add_option("--views", run_cfg.view_csvs, "view CSV files")
        ->delimiter(',');
    cmd->add_option("--labels", run_cfg.labels_path, "label file");
    cmd->add_flag("--synthetic", run_use_synth, "use the synthetic generator");
    run_synth_flags.add(cmd);
    run_feature_flags.add(cmd);
    cmd->add_option("--methods", run_methods,
                    "subset of s3fse,colgp,pca,baseline")
        ->delimiter(',');
    cmd->add_option("--per-class-train", run_cfg.split.per_class_train,
                    "train samples per class");
    add_solver_flags(cmd, run_cfg.solver);
    cmd->add_option("--k-cls", run_cfg.k_cls, "kNN classifier neighbors");
    cmd->add_option("--seed", run_cfg.seed, "master seed");
    cmd->add_option("--map-method", run_cfg.map_method,
                    "method rendered to map.pgm (cube inputs)");
    cmd->add_option("--out", run_cfg.out_dir, "output directory")->required();
  };

  auto* runc = app.add_subcommand("run", "end-to-end experiment");
  add_experiment_flags(runc);

  auto* sweepc =
      app.add_subcommand("sweep", "OA versus subspace dimensionality");
  add_experiment_flags(sweepc);
  sweepc->add_option("--d-values", sweep_dims, "dimensionalities to evaluate")
      ->required()
      ->delimiter(',');

  try {
    const auto args = merge_config_args(argc, argv);
    std::vector<const char*> argv2 = {argc > 0 ? argv[0] : "s3fse"};
    for (const auto& a : args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (synth->parsed()) {
      synth_flags.spec.seed = synth_seed;
      return run_synth(synth_flags.spec, synth_out);
    }
    if (features->parsed()) {
      return run_features(feat_cube, feature_flags, feat_out);
    }
    if (fitc->parsed()) {
      return run_fit(fit_views, fit_labels, fit_method, fit_solver, fit_seed,
                     fit_out);
    }
    if (evalc->parsed()) {
      return run_eval(eval_views, eval_labels, eval_proj, eval_pct, eval_kcls,
                      eval_seed, eval_out);
    }
    if (runc->parsed() || sweepc->parsed()) {
      run_feature_flags.finalize();
      run_cfg.gabor = run_feature_flags.gabor;
      run_cfg.dmp = run_feature_flags.dmp;
      if (run_use_synth) run_cfg.synthetic = run_synth_flags.spec;
      if (!run_methods.empty()) {
        run_cfg.methods.clear();
        for (const auto& name : run_methods) {
          run_cfg.methods.push_back(s3fse::method_from_string(name));
        }
      }
      if (runc->parsed()) {
        print_results(s3fse::run_experiment(run_cfg));
      } else {
        const auto rows = s3fse::sweep_dimension(run_cfg, sweep_dims);
        for (const auto& row : rows) {
          std::cout << s3fse::to_string(row.method) << " d=" << row.d
                    << " OA=" << row.oa << "\n";
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
