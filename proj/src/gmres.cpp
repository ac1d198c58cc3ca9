#include <Eigen/Dense>
#include <cmath>

#include "mwt/ddm.hpp"
#include "mwt/errors.hpp"

namespace mwt {

namespace {

void make_givens(Complex f, Complex g, double& c, Complex& s) {
  if (std::abs(g) == 0.0) {
    c = 1.0;
    s = Complex(0.0, 0.0);
  } else if (std::abs(f) == 0.0) {
    c = 0.0;
    s = std::conj(g) / std::abs(g);
  } else {
    const double denom = std::sqrt(std::norm(f) + std::norm(g));
    c = std::abs(f) / denom;
    s = (f / std::abs(f)) * std::conj(g) / denom;
  }
}

}  // namespace

GmresResult gmres_solve(const SparseC& A, const Eigen::VectorXcd& b, const PrecondApply& precond,
                        const GmresOptions& options) {
  const Eigen::Index n = b.size();
  GmresResult result;
  result.x = Eigen::VectorXcd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }
  const int m = std::max(1, options.restart);

  Eigen::MatrixXcd V(n, m + 1);
  Eigen::MatrixXcd Z(n, m);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  Eigen::VectorXcd g(m + 1);
  std::vector<double> cs(m);
  std::vector<Complex> sn(m);
  Eigen::VectorXcd z(n), w(n);

  while (true) {
    Eigen::VectorXcd r = b - A * result.x;
    double beta = r.norm();
    if (beta / bnorm <= options.tol) {
      result.converged = true;
      break;
    }
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;

    int k = 0;
    bool cycle_done = false;
    for (; k < m; ++k) {
      if (precond)
        precond(V.col(k), z);
      else
        z = V.col(k);
      Z.col(k) = z;
      w = A * z;
      for (int i = 0; i <= k; ++i) {
        const Complex h = V.col(i).dot(w);  // conjugated in the first argument
        H(i, k) = h;
        w -= h * V.col(i);
      }
      const double hnext = w.norm();
      H(k + 1, k) = hnext;
      if (hnext > 0.0) V.col(k + 1) = w / hnext;

      for (int i = 0; i < k; ++i) {
        const Complex tmp = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -std::conj(sn[i]) * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = tmp;
      }
      make_givens(H(k, k), H(k + 1, k), cs[k], sn[k]);
      H(k, k) = cs[k] * H(k, k) + sn[k] * H(k + 1, k);
      H(k + 1, k) = 0.0;
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];

      ++result.iterations;
      const double rel = std::abs(g[k + 1]) / bnorm;
      result.history.push_back(rel);
      if (rel <= options.tol || hnext == 0.0) {
        cycle_done = true;
        ++k;
        break;
      }
      if (result.iterations >= options.maxiter) {
        cycle_done = true;
        ++k;
        break;
      }
    }
    if (!cycle_done) k = m;

    // triangular solve and update
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      Complex sum = g[i];
      for (int j = i + 1; j < k; ++j) sum -= H(i, j) * y[j];
      y[i] = sum / H(i, i);
    }
    result.x += Z.leftCols(k) * y;

    const double true_rel = (b - A * result.x).norm() / bnorm;
    result.final_residual = true_rel;
    if (true_rel <= options.tol) {
      result.converged = true;
      break;
    }
    if (result.iterations >= options.maxiter) {
      throw SolverError("gmres: no convergence in " + std::to_string(result.iterations) +
                            " iterations (residual " + std::to_string(true_rel) + ")",
                        result.iterations, true_rel, result.history);
    }
  }

  result.final_residual = (b - A * result.x).norm() / bnorm;
  if (result.final_residual > 10.0 * options.tol) {
    throw SolverError("gmres: converged estimate but true residual " +
                          std::to_string(result.final_residual) + " exceeds 10x tolerance",
                      result.iterations, result.final_residual, result.history);
  }
  return result;
}

}  // namespace mwt
