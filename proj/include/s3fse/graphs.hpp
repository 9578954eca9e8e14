#ifndef S3FSE_GRAPHS_HPP
#define S3FSE_GRAPHS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "s3fse/types.hpp"

namespace s3fse {

// Symmetric nonnegative weights with zero diagonal; degree = row sums.
struct SparseGraph {
  Eigen::Index n_nodes = 0;
  Eigen::SparseMatrix<double> weights;
  Eigen::VectorXd degree;
};

struct Laplacian {
  enum class Kind { view, joint };
  Eigen::MatrixXd matrix;
  Kind kind = Kind::view;
};

// Heat-kernel kNN graph: w_ij = exp(-|x_i - x_j|^2 / t) when j is among the
// k nearest neighbors of i or i among the k nearest of j, else 0. Ties at
// the k-th neighbor break toward the smaller sample index.
SparseGraph knn_heat_graph(const ViewMatrix& X, int k, double t);

Laplacian laplacian(const SparseGraph& g,
                    Laplacian::Kind kind = Laplacian::Kind::view);

// Supervised graph on nV nodes, node (v-1)*n + i = sample i seen in view v.
// Unit weight between every pair of nodes whose underlying samples share a
// class (including the same sample across two views); zero diagonal.
SparseGraph joint_label_graph(const LabelVector& labels, int num_views);

// L = D - W of the joint graph, partitioned into a V x V grid of n x n
// blocks; entry (s, t) of the grid is blocks[s*V + t].
std::vector<Eigen::MatrixXd> joint_laplacian_blocks(const SparseGraph& g,
                                                    Eigen::Index n,
                                                    int num_views);

// Debug dump: one "i j w" line per stored upper-triangle edge.
void save_edge_list(const SparseGraph& g, const std::string& path);

}  // namespace s3fse

#endif
