#ifndef S3FSE_EXPERIMENT_HPP
#define S3FSE_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "s3fse/eval.hpp"
#include "s3fse/features.hpp"
#include "s3fse/solver.hpp"
#include "s3fse/synthetic.hpp"
#include "s3fse/types.hpp"

namespace s3fse {

enum class Method { s3fse, colgp, pca, baseline };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

// Exactly one input source must be set: a cube header (+ label raster),
// a list of view CSVs (+ label file), or a synthetic spec. The master seed
// drives everything derived: synthetic data use seed, the split seed + 1,
// the solver initialization seed + 2; the nested seeds are overridden.
struct ExperimentConfig {
  std::string cube_header;
  std::vector<std::string> view_csvs;
  std::optional<SyntheticSpec> synthetic;
  std::string labels_path;

  SplitSpec split;
  S3FSEConfig solver;
  GaborBankSpec gabor;
  DmpSpec dmp;
  std::vector<Method> methods = {Method::s3fse, Method::colgp, Method::pca,
                                 Method::baseline};
  int k_cls = 5;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string map_method;  // which method's map.pgm to emit; default first
};

struct MethodResult {
  Method method;
  ConfusionMatrix cm;
  double oa = 0.0;
  double kappa_value = 0.0;
  std::vector<std::optional<double>> class_acc;
  double runtime_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<MethodResult> methods;
  std::vector<std::string> artifacts;
};

// Learns each requested method on the training split, classifies the test
// split, and writes metrics.csv, manifest.txt, and (for s3fse) trace.csv,
// sparsity.txt and projection.txt; cube inputs also get per-pixel class
// maps as PGM. Throws on invalid configs and I/O failures.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  Method method;
  int d = 0;
  double oa = 0.0;
};

// Re-fits and evaluates every method per subspace dimensionality, writing
// sweep.csv (method,d,oa) to the output directory.
std::vector<SweepRow> sweep_dimension(const ExperimentConfig& cfg,
                                      const std::vector<int>& d_values);

}  // namespace s3fse

#endif
