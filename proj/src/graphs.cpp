#include "s3fse/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace s3fse {

namespace {

SparseGraph graph_from_triplets(Eigen::Index n,
                                std::vector<Eigen::Triplet<double>>&& trips) {
  SparseGraph g;
  g.n_nodes = n;
  g.weights.resize(n, n);
  g.weights.setFromTriplets(trips.begin(), trips.end());
  g.weights.makeCompressed();
  g.degree = g.weights * Eigen::VectorXd::Ones(n);
  return g;
}

}  // namespace

SparseGraph knn_heat_graph(const ViewMatrix& X, int k, double t) {
  const Eigen::Index n = X.n();
  if (k < 1 || k >= n) {
    throw std::invalid_argument("knn_heat_graph: need 1 <= k < n");
  }
  if (t <= 0.0) {
    throw std::invalid_argument("knn_heat_graph: kernel width t must be > 0");
  }
  X.validate();

  // Squared Euclidean distances via the Gram expansion; clamp fp negatives.
  const Eigen::VectorXd sq = X.values.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                       2.0 * X.values * X.values.transpose();
  d2 = d2.cwiseMax(0.0);

  // Directed kNN per node; ties at the k-th neighbor break toward the
  // smaller index.
  std::vector<std::vector<Eigen::Index>> nbrs(static_cast<std::size_t>(n));
  std::vector<std::pair<double, Eigen::Index>> cand;
  for (Eigen::Index i = 0; i < n; ++i) {
    cand.clear();
    cand.reserve(static_cast<std::size_t>(n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(d2(i, j), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    auto& lst = nbrs[static_cast<std::size_t>(i)];
    for (int q = 0; q < k; ++q) lst.push_back(cand[static_cast<std::size_t>(q)].second);
  }

  // Symmetric OR-merge.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * k * 2);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j : nbrs[static_cast<std::size_t>(i)]) {
      const double wij = std::exp(-d2(i, j) / t);
      w(i, j) = wij;
      w(j, i) = wij;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (w(i, j) != 0.0) trips.emplace_back(i, j, w(i, j));
    }
  }
  return graph_from_triplets(n, std::move(trips));
}

Laplacian laplacian(const SparseGraph& g, Laplacian::Kind kind) {
  Laplacian out;
  out.kind = kind;
  out.matrix = Eigen::MatrixXd(g.degree.asDiagonal());
  out.matrix -= Eigen::MatrixXd(g.weights);
  return out;
}

SparseGraph joint_label_graph(const LabelVector& labels, int num_views) {
  labels.validate();
  if (num_views < 1) {
    throw std::invalid_argument("joint_label_graph: need at least one view");
  }
  const Eigen::Index n = labels.n();
  const Eigen::Index total = n * num_views;

  std::vector<std::vector<Eigen::Index>> class_nodes(
      static_cast<std::size_t>(labels.num_classes));
  for (int v = 0; v < num_views; ++v) {
    for (Eigen::Index i = 0; i < n; ++i) {
      class_nodes[static_cast<std::size_t>(labels.classes[i] - 1)].push_back(
          static_cast<Eigen::Index>(v) * n + i);
    }
  }
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& nodes : class_nodes) {
    for (Eigen::Index p : nodes) {
      for (Eigen::Index q : nodes) {
        if (p != q) trips.emplace_back(p, q, 1.0);
      }
    }
  }
  return graph_from_triplets(total, std::move(trips));
}

std::vector<Eigen::MatrixXd> joint_laplacian_blocks(const SparseGraph& g,
                                                    Eigen::Index n,
                                                    int num_views) {
  if (n < 1 || num_views < 1 || g.n_nodes != n * num_views) {
    throw std::invalid_argument(
        "joint_laplacian_blocks: node count is not n * V");
  }
  const Eigen::MatrixXd L = laplacian(g, Laplacian::Kind::joint).matrix;
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(num_views) * num_views);
  for (int s = 0; s < num_views; ++s) {
    for (int t = 0; t < num_views; ++t) {
      blocks.push_back(L.block(s * n, t * n, n, n));
    }
  }
  return blocks;
}

void save_edge_list(const SparseGraph& g, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  for (int outer = 0; outer < g.weights.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.weights, outer); it;
         ++it) {
      if (it.row() < it.col()) {
        f << it.row() << " " << it.col() << " " << it.value() << "\n";
      }
    }
  }
}

}  // namespace s3fse
