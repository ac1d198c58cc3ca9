#pragma once

#include <Eigen/Sparse>
#include <span>
#include <vector>

#include "mwt/dielectrics.hpp"
#include "mwt/geometry.hpp"
#include "mwt/mesh.hpp"

namespace mwt {

using Triplet = Eigen::Triplet<Complex>;
using SparseC = Eigen::SparseMatrix<Complex>;

/// kappa = k^2 field, either one value per element (crisp synthesis truth) or
/// one per node (the P1-interpolated inversion unknown).
struct KappaField {
  enum class Kind { per_element, per_node };
  Kind kind = Kind::per_element;
  Eigen::VectorXcd values;
};

/// Elementwise kappa from tissue labels. Throws std::out_of_range when a
/// label is missing from the table.
KappaField permittivity_field(const Mesh& mesh, const TissueTable& table, double freq);

/// Nodal kappa sampled from the analytic scene truth (used as the exact field
/// on inversion meshes and in self-consistency tests).
KappaField nodal_kappa_field(const Mesh& mesh, const Scene& scene, const TissueTable& table);

/// Homogeneous nodal field, the inversion initial guess.
KappaField homogeneous_nodal_field(const Mesh& mesh, Complex kappa);

/// Propagation constant of the loaded guide feeding each port:
/// beta = sqrt(w^2 mu0 eps0 eps_wg - (pi/a)^2).
double waveguide_beta(double width, double eps_wg, double freq);

struct AssemblyParams {
  double beta = 0.0;       // rad/m, port Robin coefficient
  Complex k_open;          // open-arc absorbing coefficient (matching-medium k)
  double frequency = 0.0;
  bool include_boundary = true;  // tests disable to inspect K - kappa M alone
};

AssemblyParams make_assembly_params(const Scene& scene);

/// Assembled degree-1 Lagrange system for one kappa field. Metal nodes are
/// eliminated symmetrically (identity rows/columns), keeping A complex
/// symmetric. Port integrals are stored so scattering extraction and adjoint
/// sources use the same discrete functionals.
struct ForwardSystem {
  SparseC A;
  std::vector<char> dirichlet;   // per node
  SparseC port_vectors;          // n x n_ports, column i = c_i (zeroed on metal nodes)
  Eigen::VectorXd port_mode_norm;  // d_i = integral of m^2 over port i
  double beta = 0.0;
  Complex k_open;
  double frequency = 0.0;
  int n_ports = 0;
  const Mesh* mesh = nullptr;
  KappaField kappa;

  int n_nodes() const { return static_cast<int>(dirichlet.size()); }
  /// Excitation g = 2 i beta m on the transmitting port.
  Eigen::VectorXcd rhs(int transmitter) const;
  Eigen::MatrixXcd rhs_all() const;
};

ForwardSystem assemble(const Mesh& mesh, const KappaField& kappa, const AssemblyParams& params);

// -- element-level pieces, shared with the domain-decomposition local solves --

void element_stiffness(Vec2 a, Vec2 b, Vec2 c, double out[3][3]);
void element_mass(Vec2 a, Vec2 b, Vec2 c, double out[3][3]);

/// Weight of the P1 triple-product integral: int_T phi_n phi_i phi_j
/// = area/60 * phi3_weight(n, i, j) over local indices.
inline double phi3_weight(int n, int i, int j) {
  if (i == j) return n == i ? 6.0 : 2.0;
  return (n == i || n == j) ? 2.0 : 1.0;
}

/// Volume triplets (stiffness - kappa mass) for a subset of elements under a
/// global-to-local node map (-1 entries are absent). Rows and columns hitting
/// Dirichlet nodes are skipped.
void append_volume_triplets(const Mesh& mesh, const KappaField& kappa,
                            std::span<const int> elements, const std::vector<int>& g2l,
                            const std::vector<char>& dirichlet, std::vector<Triplet>& out);

/// Robin boundary triplets (j * coeff * edge mass) for tagged boundary edges.
void append_boundary_triplets(const Mesh& mesh, const AssemblyParams& params,
                              std::span<const int> boundary_edges, const std::vector<int>& g2l,
                              const std::vector<char>& dirichlet, std::vector<Triplet>& out);

/// Robin mass on arbitrary node-pair edges with coefficient j*k (ORAS
/// interface condition).
void append_edge_mass_triplets(const Mesh& mesh, Complex jk,
                               std::span<const std::pair<int, int>> edges,
                               const std::vector<int>& g2l, const std::vector<char>& dirichlet,
                               std::vector<Triplet>& out);

/// Dirichlet mask: every node on a metal boundary edge.
std::vector<char> dirichlet_mask(const Mesh& mesh);

}  // namespace mwt
