#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <string>

#include "mwt/constants.hpp"
#include "mwt/fem.hpp"

namespace mwt {

/// Shared linear-solver handle. Implementations are immutable after
/// construction; concurrent `solve` calls on distinct right-hand sides are
/// safe. Every solve verifies its residual against `tolerance()`.
class LinearSolver {
 public:
  virtual ~LinearSolver() = default;
  virtual Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const = 0;
  /// Column-wise solve; the default loops, backends may batch.
  virtual Eigen::MatrixXcd solve_many(const Eigen::MatrixXcd& B) const;
  virtual double tolerance() const = 0;
  virtual std::string name() const = 0;
};

/// Sparse LU factorization (exact up to roundoff). solve_many runs one batched
/// triangular solve, which is both fastest and bitwise deterministic.
class SparseDirectSolver final : public LinearSolver {
 public:
  explicit SparseDirectSolver(const SparseC& A, double tol = 1e-10);
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const override;
  Eigen::MatrixXcd solve_many(const Eigen::MatrixXcd& B) const override;
  double tolerance() const override { return tol_; }
  std::string name() const override { return "direct"; }

 private:
  void verify(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& B) const;
  SparseC A_;
  Eigen::SparseLU<SparseC> lu_;
  double tol_;
};

}  // namespace mwt
