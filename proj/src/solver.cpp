#include "s3fse/solver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "s3fse/dataset.hpp"
#include "s3fse/graphs.hpp"
#include "s3fse/io.hpp"
#include "s3fse/rng.hpp"

namespace s3fse {

namespace {

void fix_column_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < V.rows(); ++i) {
      if (std::abs(V(i, j)) > std::abs(V(best, j))) best = i;
    }
    if (V(best, j) < 0) V.col(j) = -V.col(j);
  }
}

void check_views(const MultiViewDataset& ds) {
  if (ds.views.empty()) {
    throw std::invalid_argument("dataset: at least one view required");
  }
  const Eigen::Index n = ds.views.front().n();
  for (const auto& v : ds.views) {
    v.validate();
    if (v.n() != n) {
      throw std::invalid_argument("dataset: sample count differs across views");
    }
  }
}

double row_sparsity(const Eigen::MatrixXd& P, double tau) {
  Eigen::Index zeros = 0;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    if (P.row(i).norm() <= tau) ++zeros;
  }
  return static_cast<double>(zeros) / static_cast<double>(P.rows());
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

Eigen::Index ProjectionMatrix::view_offset(int v) const {
  Eigen::Index off = 0;
  for (int u = 0; u < v; ++u) off += view_dims[static_cast<std::size_t>(u)];
  return off;
}

Eigen::MatrixXd ProjectionMatrix::block(int v) const {
  return total.middleRows(view_offset(v), view_dims[static_cast<std::size_t>(v)]);
}

double l21_norm(const Eigen::MatrixXd& M) {
  return M.rowwise().norm().sum();
}

Eigen::MatrixXd assemble_h1(const MultiViewDataset& ds, int k, double t) {
  check_views(ds);
  const Eigen::Index m = ds.total_dim();
  Eigen::MatrixXd H1 = Eigen::MatrixXd::Zero(m, m);
  Eigen::Index offset = 0;
  for (const auto& view : ds.views) {
    const SparseGraph g = knn_heat_graph(view, k, t);
    const Laplacian L = laplacian(g);
    H1.block(offset, offset, view.dim(), view.dim()) =
        view.values.transpose() * L.matrix * view.values;
    offset += view.dim();
  }
  H1 = 0.5 * (H1 + H1.transpose()).eval();
  return H1;
}

Eigen::MatrixXd assemble_h2(const MultiViewDataset& ds,
                            const LabelVector& labels) {
  check_views(ds);
  const int V = ds.num_views();
  const Eigen::Index n = ds.n();
  if (labels.n() != n) {
    throw std::invalid_argument("assemble_h2: label count does not match samples");
  }
  const SparseGraph joint = joint_label_graph(labels, V);
  const auto blocks = joint_laplacian_blocks(joint, n, V);

  const Eigen::Index m = ds.total_dim();
  Eigen::MatrixXd H2(m, m);
  Eigen::Index row_off = 0;
  for (int s = 0; s < V; ++s) {
    const auto& Xs = ds.views[static_cast<std::size_t>(s)].values;
    Eigen::Index col_off = 0;
    for (int t = 0; t < V; ++t) {
      const auto& Xt = ds.views[static_cast<std::size_t>(t)].values;
      H2.block(row_off, col_off, Xs.cols(), Xt.cols()) =
          Xs.transpose() * blocks[static_cast<std::size_t>(s) * V + t] * Xt;
      col_off += Xt.cols();
    }
    row_off += Xs.cols();
  }
  H2 = 0.5 * (H2 + H2.transpose()).eval();
  return H2;
}

Eigen::VectorXd reweight_h3(const Eigen::MatrixXd& P, double eps_row) {
  if (eps_row <= 0.0) {
    throw std::invalid_argument("reweight_h3: eps_row must be > 0");
  }
  Eigen::VectorXd diag(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    diag[i] = 1.0 / (2.0 * std::max(P.row(i).norm(), eps_row));
  }
  return diag;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> generalized_eigensolve(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int d) {
  const Eigen::Index m = A.rows();
  if (A.cols() != m || B.rows() != m || B.cols() != m) {
    throw std::invalid_argument("generalized_eigensolve: matrices must be square and same size");
  }
  if (d < 1 || d > m) {
    throw std::invalid_argument("generalized_eigensolve: d must be in [1, m]");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "generalized_eigensolve: constraint matrix is not positive-definite "
        "(increase ridge)");
  }
  const Eigen::MatrixXd L = llt.matrixL();

  // Reduce A v = eta B v to the standard problem C y = eta y with
  // C = L^-1 A L^-T and v = L^-T y; then V^T B V = Y^T Y = I.
  const Eigen::MatrixXd half =
      L.triangularView<Eigen::Lower>().solve(A).transpose();
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(half);
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("generalized_eigensolve: eigendecomposition failed");
  }
  const Eigen::MatrixXd Y = es.eigenvectors().leftCols(d);
  Eigen::MatrixXd V =
      L.transpose().triangularView<Eigen::Upper>().solve(Y);
  fix_column_signs(V);
  return {std::move(V), es.eigenvalues().head(d)};
}

std::pair<ProjectionMatrix, SolveTrace> fit(const MultiViewDataset& ds,
                                            const S3FSEConfig& cfg) {
  ds.validate();
  const Eigen::Index m = ds.total_dim();
  if (cfg.d < 1 || cfg.d > m) {
    throw std::invalid_argument("fit: d must be in [1, total feature dim]");
  }
  if (cfg.alpha < 0.0 || cfg.beta < 0.0) {
    throw std::invalid_argument("fit: alpha and beta must be nonnegative");
  }
  if (cfg.tol <= 0.0) throw std::invalid_argument("fit: tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("fit: max_iter must be >= 1");
  if (cfg.ridge < 0.0) throw std::invalid_argument("fit: ridge must be >= 0");

  const Eigen::MatrixXd H1 = assemble_h1(ds, cfg.k, cfg.t);
  const Eigen::MatrixXd H2 = assemble_h2(ds, ds.labels);
  const ViewMatrix stacked = stack_views(ds);
  Eigen::MatrixXd B = stacked.values.transpose() * stacked.values;
  B = 0.5 * (B + B.transpose()).eval();
  B.diagonal().array() += cfg.ridge;

  Eigen::MatrixXd P(m, cfg.d);
  Rng rng(cfg.seed);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < cfg.d; ++j) P(i, j) = rng.uniform(-1.0, 1.0);
  }

  SolveTrace trace;
  double prev_obj = 0.0;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const auto tic = std::chrono::steady_clock::now();
    const Eigen::VectorXd h3 = reweight_h3(P, cfg.eps_row);
    Eigen::MatrixXd M = H1 + cfg.alpha * H2;
    M.diagonal() += cfg.beta * h3;
    P = generalized_eigensolve(M, B, cfg.d).first;

    const double obj = (P.transpose() * H1 * P).trace() +
                       cfg.alpha * (P.transpose() * H2 * P).trace() +
                       cfg.beta * l21_norm(P);
    if (!std::isfinite(obj)) {
      throw std::runtime_error("fit: objective became non-finite");
    }
    const auto toc = std::chrono::steady_clock::now();
    trace.objective.push_back(obj);
    trace.sparsity.push_back(row_sparsity(P, kRowZeroTau));
    trace.seconds.push_back(std::chrono::duration<double>(toc - tic).count());

    if (iter > 0) {
      const double rel =
          std::abs(obj - prev_obj) / std::max(std::abs(prev_obj), 1e-12);
      if (rel < cfg.tol) {
        trace.converged = true;
        break;
      }
    }
    prev_obj = obj;
  }
  trace.iterations = static_cast<int>(trace.objective.size());

  ProjectionMatrix out;
  out.total = std::move(P);
  for (const auto& v : ds.views) {
    out.view_dims.push_back(v.dim());
    out.view_names.push_back(v.name);
  }
  return {std::move(out), std::move(trace)};
}

Eigen::MatrixXd project(const MultiViewDataset& ds,
                        const ProjectionMatrix& P) {
  check_views(ds);
  if (ds.num_views() != P.num_views()) {
    throw std::invalid_argument("project: view count mismatch");
  }
  for (int v = 0; v < P.num_views(); ++v) {
    if (ds.views[static_cast<std::size_t>(v)].dim() !=
        P.view_dims[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("project: dimensionality mismatch for view " +
                                  ds.views[static_cast<std::size_t>(v)].name);
    }
  }
  return stack_views(ds).values * P.total;
}

RowSupport row_support(const ProjectionMatrix& P, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("row_support: tau must be > 0");
  RowSupport rs;
  rs.tau = tau;
  Eigen::Index zero_rows = 0;
  for (int v = 0; v < P.num_views(); ++v) {
    const Eigen::Index off = P.view_offset(v);
    const Eigen::Index dv = P.view_dims[static_cast<std::size_t>(v)];
    std::vector<Eigen::Index> sel;
    for (Eigen::Index i = 0; i < dv; ++i) {
      if (P.total.row(off + i).norm() > tau) {
        sel.push_back(i);
      } else {
        ++zero_rows;
      }
    }
    rs.view_sparsity.push_back(
        static_cast<double>(dv - static_cast<Eigen::Index>(sel.size())) /
        static_cast<double>(dv));
    rs.selected.push_back(std::move(sel));
  }
  rs.overall_sparsity =
      static_cast<double>(zero_rows) / static_cast<double>(P.m());
  rs.entry_sparsity =
      static_cast<double>((P.total.cwiseAbs().array() <= tau).count()) /
      static_cast<double>(P.m() * P.d());
  return rs;
}

void save_projection(const ProjectionMatrix& P, const S3FSEConfig& cfg,
                     const std::string& method, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "num_views=" << P.num_views() << "\n";
  f << "view_names=";
  for (int v = 0; v < P.num_views(); ++v) {
    f << (v ? "," : "") << P.view_names[static_cast<std::size_t>(v)];
  }
  f << "\nview_dims=";
  for (int v = 0; v < P.num_views(); ++v) {
    f << (v ? "," : "") << P.view_dims[static_cast<std::size_t>(v)];
  }
  f << "\nm=" << P.m() << "\nd=" << P.d() << "\nmethod=" << method << "\n";
  f << "alpha=" << format_double(cfg.alpha) << "\n";
  f << "beta=" << format_double(cfg.beta) << "\n";
  f << "k=" << cfg.k << "\n";
  f << "t=" << format_double(cfg.t) << "\n";
  f << "max_iter=" << cfg.max_iter << "\n";
  f << "tol=" << format_double(cfg.tol) << "\n";
  f << "eps_row=" << format_double(cfg.eps_row) << "\n";
  f << "ridge=" << format_double(cfg.ridge) << "\n";
  f << "seed=" << cfg.seed << "\n";
  f << "---\n";
  for (Eigen::Index i = 0; i < P.m(); ++i) {
    for (Eigen::Index j = 0; j < P.d(); ++j) {
      f << (j ? "," : "") << format_double(P.total(i, j));
    }
    f << "\n";
  }
}

LoadedProjection load_projection(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  LoadedProjection out;
  Eigen::Index m = -1, d = -1;
  std::string line;
  while (std::getline(f, line)) {
    if (line == "---") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "view_names") {
      out.projection.view_names = split_csv(val);
    } else if (key == "view_dims") {
      for (const auto& s : split_csv(val)) {
        out.projection.view_dims.push_back(std::stol(s));
      }
    } else if (key == "m") m = std::stol(val);
    else if (key == "d") d = std::stol(val);
    else if (key == "method") out.method = val;
    else if (key == "alpha") out.config.alpha = std::stod(val);
    else if (key == "beta") out.config.beta = std::stod(val);
    else if (key == "k") out.config.k = std::stoi(val);
    else if (key == "t") out.config.t = std::stod(val);
    else if (key == "max_iter") out.config.max_iter = std::stoi(val);
    else if (key == "tol") out.config.tol = std::stod(val);
    else if (key == "eps_row") out.config.eps_row = std::stod(val);
    else if (key == "ridge") out.config.ridge = std::stod(val);
    else if (key == "seed") out.config.seed = std::stoull(val);
  }
  if (m < 0 || d < 0) {
    throw std::runtime_error("projection file: missing m or d header: " + path);
  }
  out.config.d = static_cast<int>(d);
  out.projection.total.resize(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::getline(f, line)) {
      throw std::runtime_error("projection file: truncated rows: " + path);
    }
    const auto cells = split_csv(line);
    if (static_cast<Eigen::Index>(cells.size()) != d) {
      throw std::runtime_error("projection file: ragged row: " + path);
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      out.projection.total(i, j) = std::stod(cells[static_cast<std::size_t>(j)]);
    }
  }
  Eigen::Index dim_sum = 0;
  for (auto dv : out.projection.view_dims) dim_sum += dv;
  if (dim_sum != m) {
    throw std::runtime_error("projection file: view_dims do not sum to m: " + path);
  }
  return out;
}

void save_trace(const SolveTrace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "iteration,objective,sparsity,seconds\n";
  for (std::size_t i = 0; i < trace.objective.size(); ++i) {
    f << (i + 1) << "," << format_double(trace.objective[i]) << ","
      << format_double(trace.sparsity[i]) << ","
      << format_double(trace.seconds[i]) << "\n";
  }
}

}  // namespace s3fse
