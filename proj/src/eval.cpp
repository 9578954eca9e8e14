#include "s3fse/eval.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

#include "s3fse/dataset.hpp"

namespace s3fse {

ConfusionMatrix ConfusionMatrix::from_predictions(
    const std::vector<int>& truth, const std::vector<int>& predicted,
    int num_classes) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("confusion: truth/prediction size mismatch");
  }
  ConfusionMatrix cm;
  cm.counts = Eigen::MatrixXi::Zero(num_classes, num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i], p = predicted[i];
    if (t < 1 || t > num_classes || p < 1 || p > num_classes) {
      throw std::invalid_argument("confusion: class id out of range");
    }
    ++cm.counts(t - 1, p - 1);
  }
  return cm;
}

std::vector<int> knn_classify(const Eigen::MatrixXd& train_embed,
                              const std::vector<int>& train_labels,
                              const Eigen::MatrixXd& test_embed, int k_cls) {
  const Eigen::Index n_tr = train_embed.rows();
  if (n_tr == 0) {
    throw std::invalid_argument("knn_classify: empty training set");
  }
  if (static_cast<Eigen::Index>(train_labels.size()) != n_tr) {
    throw std::invalid_argument("knn_classify: label count mismatch");
  }
  if (k_cls < 1 || k_cls > n_tr) {
    throw std::invalid_argument("knn_classify: need 1 <= k_cls <= n_train");
  }
  if (test_embed.cols() != train_embed.cols()) {
    throw std::invalid_argument("knn_classify: embedding dims differ");
  }
  const int C = *std::max_element(train_labels.begin(), train_labels.end());

  std::vector<int> out(static_cast<std::size_t>(test_embed.rows()));
  std::vector<std::pair<double, int>> cand(static_cast<std::size_t>(n_tr));
  std::vector<int> votes(static_cast<std::size_t>(C) + 1);
  for (Eigen::Index q = 0; q < test_embed.rows(); ++q) {
    for (Eigen::Index i = 0; i < n_tr; ++i) {
      cand[static_cast<std::size_t>(i)] = {
          (train_embed.row(i) - test_embed.row(q)).squaredNorm(),
          train_labels[static_cast<std::size_t>(i)]};
    }
    // (distance, label) ordering keeps the vote multiset independent of
    // the training sample order.
    std::partial_sort(cand.begin(), cand.begin() + k_cls, cand.end());
    std::fill(votes.begin(), votes.end(), 0);
    for (int i = 0; i < k_cls; ++i) {
      ++votes[static_cast<std::size_t>(cand[static_cast<std::size_t>(i)].second)];
    }
    int winner = 1;
    for (int c = 2; c <= C; ++c) {
      if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(winner)]) {
        winner = c;
      }
    }
    out[static_cast<std::size_t>(q)] = winner;
  }
  return out;
}

double overall_accuracy(const ConfusionMatrix& cm) {
  const long total = cm.total();
  if (total <= 0) {
    throw std::invalid_argument("overall_accuracy: empty confusion matrix");
  }
  return static_cast<double>(cm.counts.diagonal().sum()) /
         static_cast<double>(total);
}

double kappa(const ConfusionMatrix& cm) {
  const double total = static_cast<double>(cm.total());
  if (total <= 0) {
    throw std::invalid_argument("kappa: empty confusion matrix");
  }
  const double p_o = cm.counts.diagonal().sum() / total;
  double p_e = 0.0;
  for (int c = 0; c < cm.num_classes(); ++c) {
    p_e += (cm.counts.row(c).sum() / total) * (cm.counts.col(c).sum() / total);
  }
  if (p_e >= 1.0) {
    throw std::domain_error("kappa: undefined when chance agreement is 1");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

std::vector<std::optional<double>> class_accuracies(const ConfusionMatrix& cm) {
  std::vector<std::optional<double>> acc;
  acc.reserve(static_cast<std::size_t>(cm.num_classes()));
  for (int c = 0; c < cm.num_classes(); ++c) {
    const long row = cm.counts.row(c).sum();
    if (row == 0) {
      acc.push_back(std::nullopt);
    } else {
      acc.push_back(static_cast<double>(cm.counts(c, c)) /
                    static_cast<double>(row));
    }
  }
  return acc;
}

ProjectionMatrix colgp_fit(const MultiViewDataset& ds, const S3FSEConfig& cfg) {
  ds.validate();
  const Eigen::Index m = ds.total_dim();
  if (cfg.d < 1 || cfg.d > m) {
    throw std::invalid_argument("colgp_fit: d must be in [1, total feature dim]");
  }
  const Eigen::MatrixXd H1 = assemble_h1(ds, cfg.k, cfg.t);
  const ViewMatrix stacked = stack_views(ds);
  Eigen::MatrixXd B = stacked.values.transpose() * stacked.values;
  B = 0.5 * (B + B.transpose()).eval();
  B.diagonal().array() += cfg.ridge;

  ProjectionMatrix out;
  out.total = generalized_eigensolve(H1, B, cfg.d).first;
  for (const auto& v : ds.views) {
    out.view_dims.push_back(v.dim());
    out.view_names.push_back(v.name);
  }
  return out;
}

PcaModel pca_fit(const ViewMatrix& stacked, int d) {
  stacked.validate();
  const Eigen::Index m = stacked.dim();
  if (d < 1 || d > m) {
    throw std::invalid_argument("pca_fit: d must be in [1, m]");
  }
  if (stacked.n() < 2) {
    throw std::invalid_argument("pca_fit: need at least 2 samples");
  }
  PcaModel model;
  model.mean = stacked.values.colwise().mean();
  const Eigen::MatrixXd Xc = stacked.values.rowwise() - model.mean;
  Eigen::MatrixXd cov =
      Xc.transpose() * Xc / static_cast<double>(stacked.n() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("pca_fit: eigendecomposition failed");
  }
  const double floor = std::max(es.eigenvalues().maxCoeff(), 0.0) * 1e-12;
  int rank = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (es.eigenvalues()[i] > floor) ++rank;
  }
  const int keep = std::min(d, std::max(rank, 1));
  if (keep < d) {
    std::cerr << "pca_fit: requested " << d << " components but data rank is "
              << keep << "; returning " << keep << "\n";
  }
  model.loadings.resize(m, keep);
  for (int i = 0; i < keep; ++i) {
    Eigen::VectorXd axis = es.eigenvectors().col(m - 1 - i);
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < m; ++r) {
      if (std::abs(axis[r]) > std::abs(axis[best])) best = r;
    }
    if (axis[best] < 0) axis = -axis;
    model.loadings.col(i) = axis;
  }
  return model;
}

}  // namespace s3fse
