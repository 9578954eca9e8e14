#ifndef S3FSE_EVAL_HPP
#define S3FSE_EVAL_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "s3fse/solver.hpp"
#include "s3fse/types.hpp"

namespace s3fse {

// Rows = true class, cols = predicted, ids 1..C.
struct ConfusionMatrix {
  Eigen::MatrixXi counts;

  int num_classes() const { return static_cast<int>(counts.rows()); }
  long total() const { return counts.sum(); }

  static ConfusionMatrix from_predictions(const std::vector<int>& truth,
                                          const std::vector<int>& predicted,
                                          int num_classes);
};

// Majority vote among the k_cls nearest training embeddings (Euclidean).
// Neighbor candidates are ordered by (distance, label) so the vote set is
// independent of training sample order; vote ties break toward the
// smallest class id.
std::vector<int> knn_classify(const Eigen::MatrixXd& train_embed,
                              const std::vector<int>& train_labels,
                              const Eigen::MatrixXd& test_embed, int k_cls);

double overall_accuracy(const ConfusionMatrix& cm);

// Cohen's kappa: (p_o - p_e) / (1 - p_e), p_e from the marginal products.
double kappa(const ConfusionMatrix& cm);

// Producer's accuracy per class (row-normalized diagonal); nullopt for
// classes with an empty true row.
std::vector<std::optional<double>> class_accuracies(const ConfusionMatrix& cm);

// Geometry-only ablation: the smallest-d generalized eigenvectors of the
// block-diagonal H1 against the stacked Gram constraint. Equals fit with
// alpha = beta = 0 up to per-column sign.
ProjectionMatrix colgp_fit(const MultiViewDataset& ds, const S3FSEConfig& cfg);

// Dense-projection baseline over the stacked features.
struct PcaModel {
  Eigen::MatrixXd loadings;  // m x d_actual, d_actual <= requested d
  Eigen::RowVectorXd mean;

  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const {
    return (X.rowwise() - mean) * loadings;
  }
};

// Top-d principal loadings of the mean-centered stacked matrix, descending
// variance, deterministic sign. Requests beyond the numerical rank return
// fewer components (with a warning on stderr).
PcaModel pca_fit(const ViewMatrix& stacked, int d);

}  // namespace s3fse

#endif
