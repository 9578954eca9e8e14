#ifndef S3FSE_SOLVER_HPP
#define S3FSE_SOLVER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "s3fse/types.hpp"

namespace s3fse {

struct S3FSEConfig {
  double alpha = 0.1;   // co-graph weight
  double beta = 0.01;   // l2,1 weight
  int d = 20;           // target subspace dimensionality
  int k = 5;            // neighbor count for the per-view graphs
  double t = 1.0;       // heat-kernel width
  int max_iter = 30;
  double tol = 1e-6;    // relative objective-change threshold
  double eps_row = 1e-8;  // row-norm floor for the reweighting
  double ridge = 1e-6;    // added to X^T X to make the constraint definite
  std::uint64_t seed = 42;
};

// Stacked row-sparse projector, partitioned by view. Row block v of total
// is the d_v x d projector of view v.
struct ProjectionMatrix {
  Eigen::MatrixXd total;  // m x d, m = sum of view dims
  std::vector<Eigen::Index> view_dims;
  std::vector<std::string> view_names;

  Eigen::Index m() const { return total.rows(); }
  Eigen::Index d() const { return total.cols(); }
  int num_views() const { return static_cast<int>(view_dims.size()); }

  Eigen::Index view_offset(int v) const;
  Eigen::MatrixXd block(int v) const;
};

struct SolveTrace {
  std::vector<double> objective;  // per-iteration value of the full objective
  std::vector<double> sparsity;   // per-iteration fraction of near-zero rows
  std::vector<double> seconds;
  int iterations = 0;
  bool converged = false;
};

// Row norm threshold used for the sparsity column of SolveTrace and as the
// default tau of row_support.
inline constexpr double kRowZeroTau = 1e-6;

// Sum of row-wise l2 norms.
double l21_norm(const Eigen::MatrixXd& M);

// Block-diagonal geometry matrix: block v is X^(v)T L^(v) X^(v) with L^(v)
// the Laplacian of the per-view heat-kernel kNN graph. Symmetric PSD.
Eigen::MatrixXd assemble_h1(const MultiViewDataset& ds, int k, double t);

// Cross-view supervised matrix: block (s, t) is X^(s)T L^st X^(t) with L^st
// the blocks of the joint label-graph Laplacian. Symmetric PSD.
Eigen::MatrixXd assemble_h2(const MultiViewDataset& ds,
                            const LabelVector& labels);

// Diagonal of the reweighting matrix: entry i = 1 / (2 max(|row_i|, eps)).
Eigen::VectorXd reweight_h3(const Eigen::MatrixXd& P, double eps_row);

// d eigenpairs with smallest eta of A v = eta B v, eta ascending. B must be
// positive-definite. Vectors are B-orthonormal (V^T B V = I) and each
// column's sign is fixed so its largest-magnitude entry is positive.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> generalized_eigensolve(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int d);

// Iteratively reweighted fixed-point loop: precompute H1/H2, then
// alternate the diagonal reweighting with the constrained eigensolve until
// the relative objective change drops below tol. Expects normalized views.
std::pair<ProjectionMatrix, SolveTrace> fit(const MultiViewDataset& ds,
                                            const S3FSEConfig& cfg);

// Embedding Y = X_stacked * P.total (equivalently the sum of per-view
// block products).
Eigen::MatrixXd project(const MultiViewDataset& ds, const ProjectionMatrix& P);

struct RowSupport {
  double tau = 0.0;
  std::vector<std::vector<Eigen::Index>> selected;  // per view, local indices
  std::vector<double> view_sparsity;  // fraction of zero rows per view
  double overall_sparsity = 0.0;      // fraction of zero rows over all m
  double entry_sparsity = 0.0;        // fraction of near-zero entries
};

// A row is selected iff its l2 norm exceeds tau. Reports both the row- and
// entry-level sparsity readings.
RowSupport row_support(const ProjectionMatrix& P, double tau = kRowZeroTau);

// Text round trip: key=value header, "---", then one CSV line per row.
void save_projection(const ProjectionMatrix& P, const S3FSEConfig& cfg,
                     const std::string& method, const std::string& path);
struct LoadedProjection {
  ProjectionMatrix projection;
  S3FSEConfig config;
  std::string method;
};
LoadedProjection load_projection(const std::string& path);

// CSV: iteration,objective,sparsity,seconds.
void save_trace(const SolveTrace& trace, const std::string& path);

}  // namespace s3fse

#endif
