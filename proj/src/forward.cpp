#include "mwt/forward.hpp"

#include <fstream>
#include <sstream>

#include "mwt/errors.hpp"

namespace mwt {

Eigen::MatrixXcd LinearSolver::solve_many(const Eigen::MatrixXcd& B) const {
  Eigen::MatrixXcd X(B.rows(), B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) X.col(j) = solve(B.col(j));
  return X;
}

SparseDirectSolver::SparseDirectSolver(const SparseC& A, double tol) : A_(A), tol_(tol) {
  lu_.compute(A_);
  if (lu_.info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed", 0, 0.0);
}

void SparseDirectSolver::verify(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& B) const {
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    const double bn = B.col(j).norm();
    if (bn == 0.0) continue;
    const double res = (A_ * X.col(j) - B.col(j)).norm() / bn;
    if (!(res <= tol_))
      throw SolverError("direct solve residual " + std::to_string(res) + " above tolerance", 1,
                        res);
  }
}

Eigen::VectorXcd SparseDirectSolver::solve(const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd x = lu_.solve(b);
  verify(x, b);
  return x;
}

Eigen::MatrixXcd SparseDirectSolver::solve_many(const Eigen::MatrixXcd& B) const {
  Eigen::MatrixXcd X = lu_.solve(B);
  verify(X, B);
  return X;
}

Eigen::VectorXcd solve_forward(const ForwardSystem& system, int transmitter,
                               const LinearSolver& solver) {
  if (transmitter < 0 || transmitter >= system.n_ports)
    throw std::invalid_argument("solve_forward: transmitter index out of range");
  Eigen::VectorXcd u = solver.solve(system.rhs(transmitter));
  for (int i = 0; i < system.n_nodes(); ++i) {
    if (system.dirichlet[i] && std::abs(u[i]) != 0.0)
      throw SolverError("field is nonzero on a metal node", 0, std::abs(u[i]));
  }
  return u;
}

Eigen::MatrixXcd solve_all_ports(const ForwardSystem& system, const LinearSolver& solver) {
  return solver.solve_many(system.rhs_all());
}

ScatteringMatrix scattering_matrix(const ForwardSystem& system, const Eigen::MatrixXcd& fields,
                                   const std::string& variant) {
  if (fields.cols() != system.n_ports || fields.rows() != system.n_nodes())
    throw std::invalid_argument("scattering_matrix: field block has wrong shape");
  ScatteringMatrix sm;
  sm.n = system.n_ports;
  sm.frequency = system.frequency;
  sm.variant = variant;
  // plain (unconjugated) projection, matching the complex-symmetric operator
  sm.s = system.port_vectors.transpose() * fields;
  for (int i = 0; i < sm.n; ++i) sm.s.row(i) /= system.port_mode_norm[i];
  return sm;
}

std::string serialize_smatrix(const ScatteringMatrix& sm) {
  std::ostringstream out;
  out.precision(17);
  out << "mwtomo-smatrix v1\n";
  out << "n " << sm.n << "\n";
  out << "frequency " << sm.frequency << "\n";
  out << "variant " << sm.variant << "\n";
  out << "noise " << sm.noise << "\n";
  for (int i = 0; i < sm.n; ++i)
    for (int j = 0; j < sm.n; ++j)
      out << i << " " << j << " " << sm.s(i, j).real() << " " << sm.s(i, j).imag() << "\n";
  return out.str();
}

ScatteringMatrix parse_smatrix(const std::string& text) {
  std::istringstream in(text);
  std::string token, version;
  in >> token >> version;
  if (token != "mwtomo-smatrix" || version != "v1")
    throw IoError("scattering matrix file: unknown format header");
  ScatteringMatrix sm;
  auto expect = [&](const char* name) {
    in >> token;
    if (token != name)
      throw IoError(std::string("scattering matrix file: expected '") + name + "'");
  };
  expect("n");
  in >> sm.n;
  expect("frequency");
  in >> sm.frequency;
  expect("variant");
  in >> sm.variant;
  expect("noise");
  std::getline(in >> std::ws, sm.noise);
  if (!in || sm.n <= 0) throw IoError("scattering matrix file: bad header");
  sm.s.resize(sm.n, sm.n);
  for (int k = 0; k < sm.n * sm.n; ++k) {
    int i = 0, j = 0;
    double re = 0.0, im = 0.0;
    in >> i >> j >> re >> im;
    if (!in || i < 0 || i >= sm.n || j < 0 || j >= sm.n)
      throw IoError("scattering matrix file: bad entry row");
    sm.s(i, j) = Complex(re, im);
  }
  return sm;
}

void save_smatrix(const ScatteringMatrix& sm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize_smatrix(sm);
}

ScatteringMatrix load_smatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_smatrix(buf.str());
}

std::string serialize_field(const Mesh& mesh, const Eigen::VectorXcd& u,
                            const std::string& quantity) {
  if (u.size() != mesh.n_vertices())
    throw std::invalid_argument("serialize_field: vector does not match the mesh");
  std::ostringstream out;
  out.precision(17);
  out << "mwtomo-field v1\n";
  out << "quantity " << quantity << "\n";
  out << "nodes " << mesh.n_vertices() << "\n";
  for (int i = 0; i < mesh.n_vertices(); ++i)
    out << mesh.vertices[i].x << " " << mesh.vertices[i].y << " " << u[i].real() << " "
        << u[i].imag() << "\n";
  return out.str();
}

void save_field(const Mesh& mesh, const Eigen::VectorXcd& u, const std::string& path,
                const std::string& quantity) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize_field(mesh, u, quantity);
}

}  // namespace mwt
