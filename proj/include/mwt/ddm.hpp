#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <vector>

#include "mwt/fem.hpp"
#include "mwt/solver.hpp"

namespace mwt {

/// Overlapping partition of the mesh elements. Node sets come from the
/// overlapped element sets; the partition of unity is ownership based (each
/// node weighted 1 in exactly one subdomain), so sum_i R_i^T D_i R_i = I.
struct Partition {
  int n_sub = 0;
  int overlap = 0;
  std::vector<std::vector<int>> elements;  // per subdomain, overlapped
  std::vector<std::vector<int>> nodes;     // per subdomain, sorted global ids
  std::vector<std::vector<double>> weights;  // aligned with `nodes`
};

/// Recursive coordinate bisection on element centroids, then `overlap` layers
/// of node-adjacent elements.
Partition make_partition(const Mesh& mesh, int n_sub, int overlap);

struct GmresOptions {
  double tol = 1e-10;  // relative residual
  int restart = 200;
  int maxiter = 1000;
};

struct GmresResult {
  Eigen::VectorXcd x;
  std::vector<double> history;  // relative residual per iteration
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
};

using PrecondApply = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

/// Right-preconditioned restarted GMRES. The monitored residual is the true
/// residual of the original system. Throws SolverError (trace attached) when
/// maxiter is exceeded.
GmresResult gmres_solve(const SparseC& A, const Eigen::VectorXcd& b, const PrecondApply& precond,
                        const GmresOptions& options);

/// Optimized restricted additive Schwarz preconditioner: per-subdomain
/// matrices assembled from local elements with a Robin (impedance) interface
/// condition j*k_medium, factorized once and shared. Application is
/// M^{-1} r = sum_i R_i^T D_i A_i^{-1} R_i r.
class OrasPreconditioner {
 public:
  OrasPreconditioner(const ForwardSystem& system, const Partition& partition);

  void apply(const Eigen::VectorXcd& r, Eigen::VectorXcd& z) const;
  PrecondApply op() const {
    return [this](const Eigen::VectorXcd& r, Eigen::VectorXcd& z) { apply(r, z); };
  }
  int n_sub() const { return static_cast<int>(locals_.size()); }

 private:
  struct Local {
    std::vector<int> nodes;
    std::vector<double> weights;
    std::unique_ptr<Eigen::SparseLU<SparseC>> lu;
  };
  std::vector<Local> locals_;
  int n_nodes_ = 0;
};

/// Build and factorize the ORAS preconditioner; throws SolverError naming the
/// subdomain if a local factorization fails.
std::shared_ptr<OrasPreconditioner> build_oras(const ForwardSystem& system,
                                               const Partition& partition);

/// LinearSolver backend wrapping ORAS-preconditioned GMRES. Stateless after
/// construction: concurrent solves on distinct right-hand sides are safe.
class OrasGmresSolver final : public LinearSolver {
 public:
  OrasGmresSolver(const ForwardSystem& system, const Partition& partition, GmresOptions options);
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const override;
  Eigen::MatrixXcd solve_many(const Eigen::MatrixXcd& B) const override;
  /// Like solve but returns the convergence trace.
  GmresResult solve_traced(const Eigen::VectorXcd& b) const;
  double tolerance() const override { return options_.tol; }
  std::string name() const override { return "oras"; }

 private:
  const SparseC A_;
  std::shared_ptr<OrasPreconditioner> precond_;
  GmresOptions options_;
};

}  // namespace mwt
