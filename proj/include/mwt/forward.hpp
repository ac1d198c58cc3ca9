#pragma once

#include <Eigen/Dense>
#include <string>

#include "mwt/fem.hpp"
#include "mwt/solver.hpp"

namespace mwt {

/// N x N complex transmission/reflection coefficients, S[i][j] = receiver i,
/// transmitter j, plus provenance metadata.
struct ScatteringMatrix {
  int n = 0;
  Eigen::MatrixXcd s;
  double frequency = 0.0;
  std::string variant = "empty";  // scene variant or "empty"
  std::string noise = "none";
};

/// Solve the forward problem for one transmitter. Verifies the residual and
/// that the field vanishes on metal nodes.
Eigen::VectorXcd solve_forward(const ForwardSystem& system, int transmitter,
                               const LinearSolver& solver);

/// All N forward fields as columns, sharing the solver handle.
Eigen::MatrixXcd solve_all_ports(const ForwardSystem& system, const LinearSolver& solver);

/// Scattering extraction: S_ij = int_{port i} u_j m ds / int_{port i} m^2 ds,
/// the diagonal included (the literal port-projection formula).
ScatteringMatrix scattering_matrix(const ForwardSystem& system, const Eigen::MatrixXcd& fields,
                                   const std::string& variant);

// ---- versioned plain-text formats ----

std::string serialize_smatrix(const ScatteringMatrix& sm);
ScatteringMatrix parse_smatrix(const std::string& text);
void save_smatrix(const ScatteringMatrix& sm, const std::string& path);
ScatteringMatrix load_smatrix(const std::string& path);

/// Per-node field dump: `x y Re(u) Im(u)` rows.
std::string serialize_field(const Mesh& mesh, const Eigen::VectorXcd& u,
                            const std::string& quantity = "field");
void save_field(const Mesh& mesh, const Eigen::VectorXcd& u, const std::string& path,
                const std::string& quantity = "field");

}  // namespace mwt
