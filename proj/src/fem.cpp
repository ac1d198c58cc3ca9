#include "mwt/fem.hpp"

#include <cmath>

#include "mwt/errors.hpp"

namespace mwt {

KappaField permittivity_field(const Mesh& mesh, const TissueTable& table, double freq) {
  KappaField field;
  field.kind = KappaField::Kind::per_element;
  field.values.resize(mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    field.values[t] = wavenumber_squared(table.at(mesh.tissue_of(t)), freq);
  }
  return field;
}

KappaField nodal_kappa_field(const Mesh& mesh, const Scene& scene, const TissueTable& table) {
  KappaField field;
  field.kind = KappaField::Kind::per_node;
  field.values.resize(mesh.n_vertices());
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    field.values[i] =
        wavenumber_squared(table.at(scene.tissue_at(mesh.vertices[i])), scene.chamber.frequency);
  }
  return field;
}

KappaField homogeneous_nodal_field(const Mesh& mesh, Complex kappa) {
  KappaField field;
  field.kind = KappaField::Kind::per_node;
  field.values = Eigen::VectorXcd::Constant(mesh.n_vertices(), kappa);
  return field;
}

double waveguide_beta(double width, double eps_wg, double freq) {
  const double omega = angular_frequency(freq);
  const double k2 = omega * omega * consts::mu0 * consts::eps0 * eps_wg;
  const double cutoff = consts::pi / width;
  const double arg = k2 - cutoff * cutoff;
  if (arg <= 0.0)
    throw AssemblyError("waveguide below cutoff: widen the guide or raise the frequency");
  return std::sqrt(arg);
}

AssemblyParams make_assembly_params(const Scene& scene) {
  AssemblyParams params;
  params.beta = waveguide_beta(scene.chamber.waveguide_width, scene.chamber.waveguide_eps,
                               scene.chamber.frequency);
  params.k_open = wavenumber(scene.eps_matching, scene.chamber.frequency);
  params.frequency = scene.chamber.frequency;
  return params;
}

void element_stiffness(Vec2 a, Vec2 b, Vec2 c, double out[3][3]) {
  const double area2 = cross(b - a, c - a);  // 2 * signed area, positive for CCW
  // gradients of barycentric coordinates
  const Vec2 g[3] = {{(b.y - c.y) / area2, (c.x - b.x) / area2},
                     {(c.y - a.y) / area2, (a.x - c.x) / area2},
                     {(a.y - b.y) / area2, (b.x - a.x) / area2}};
  const double area = 0.5 * area2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = area * dot(g[i], g[j]);
}

void element_mass(Vec2 a, Vec2 b, Vec2 c, double out[3][3]) {
  const double area = 0.5 * cross(b - a, c - a);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
}

std::vector<char> dirichlet_mask(const Mesh& mesh) {
  std::vector<char> mask(mesh.n_vertices(), 0);
  for (const auto& be : mesh.boundary) {
    if (be.kind == BoundaryKind::metal) {
      mask[be.a] = 1;
      mask[be.b] = 1;
    }
  }
  return mask;
}

void append_volume_triplets(const Mesh& mesh, const KappaField& kappa,
                            std::span<const int> elements, const std::vector<int>& g2l,
                            const std::vector<char>& dirichlet, std::vector<Triplet>& out) {
  double K[3][3];
  for (const int t : elements) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    element_stiffness(a, b, c, K);
    const double area = 0.5 * cross(b - a, c - a);
    Complex kelem[3][3];
    if (kappa.kind == KappaField::Kind::per_element) {
      const Complex kv = kappa.values[t];
      if (!std::isfinite(kv.real()) || !std::isfinite(kv.imag()))
        throw AssemblyError("non-finite kappa on element " + std::to_string(t));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          kelem[i][j] = kv * (area / 12.0 * (i == j ? 2.0 : 1.0));
    } else {
      Complex kn[3];
      for (int n = 0; n < 3; ++n) {
        kn[n] = kappa.values[tri[n]];
        if (!std::isfinite(kn[n].real()) || !std::isfinite(kn[n].imag()))
          throw AssemblyError("non-finite kappa at node " + std::to_string(tri[n]));
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          Complex v = 0.0;
          for (int n = 0; n < 3; ++n) v += kn[n] * phi3_weight(n, i, j);
          kelem[i][j] = v * (area / 60.0);
        }
    }
    for (int i = 0; i < 3; ++i) {
      const int gi = tri[i];
      if (dirichlet[gi] || g2l[gi] < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int gj = tri[j];
        if (dirichlet[gj] || g2l[gj] < 0) continue;
        out.emplace_back(g2l[gi], g2l[gj], Complex(K[i][j], 0.0) - kelem[i][j]);
      }
    }
  }
}

void append_boundary_triplets(const Mesh& mesh, const AssemblyParams& params,
                              std::span<const int> boundary_edges, const std::vector<int>& g2l,
                              const std::vector<char>& dirichlet, std::vector<Triplet>& out) {
  for (const int e : boundary_edges) {
    const auto& be = mesh.boundary[e];
    if (be.kind == BoundaryKind::metal) continue;  // Dirichlet, handled by elimination
    const Complex coeff = (be.kind == BoundaryKind::port)
                              ? Complex(0.0, params.beta)
                              : Complex(0.0, 1.0) * params.k_open;
    const double len = norm(mesh.vertices[be.b] - mesh.vertices[be.a]);
    const int idx[2] = {be.a, be.b};
    for (int i = 0; i < 2; ++i) {
      if (dirichlet[idx[i]] || g2l[idx[i]] < 0) continue;
      for (int j = 0; j < 2; ++j) {
        if (dirichlet[idx[j]] || g2l[idx[j]] < 0) continue;
        out.emplace_back(g2l[idx[i]], g2l[idx[j]], coeff * (len / 6.0 * (i == j ? 2.0 : 1.0)));
      }
    }
  }
}

void append_edge_mass_triplets(const Mesh& mesh, Complex jk,
                               std::span<const std::pair<int, int>> edges,
                               const std::vector<int>& g2l, const std::vector<char>& dirichlet,
                               std::vector<Triplet>& out) {
  for (const auto& [a, b] : edges) {
    const double len = norm(mesh.vertices[b] - mesh.vertices[a]);
    const int idx[2] = {a, b};
    for (int i = 0; i < 2; ++i) {
      if (dirichlet[idx[i]] || g2l[idx[i]] < 0) continue;
      for (int j = 0; j < 2; ++j) {
        if (dirichlet[idx[j]] || g2l[idx[j]] < 0) continue;
        out.emplace_back(g2l[idx[i]], g2l[idx[j]], jk * (len / 6.0 * (i == j ? 2.0 : 1.0)));
      }
    }
  }
}

namespace {

/// Port functionals c_i[v] = int phi_v m ds and d_i = int m^2 ds with the
/// half-sine mode m(s) = sin(pi s / w); 2-point Gauss per edge. Entries on
/// metal (Dirichlet) nodes are dropped so the same vectors serve excitation,
/// extraction, and adjoint sources consistently.
void port_integrals(const Mesh& mesh, const std::vector<char>& dirichlet, SparseC& C,
                    Eigen::VectorXd& d) {
  const double w = mesh.port_arc_length;
  const int n_ports = mesh.n_ports;
  std::vector<Triplet> trips;
  d = Eigen::VectorXd::Zero(n_ports);
  const double gauss_t[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  for (const auto& be : mesh.boundary) {
    if (be.kind != BoundaryKind::port) continue;
    const double len = norm(mesh.vertices[be.b] - mesh.vertices[be.a]);
    double ca = 0.0, cb = 0.0, m2 = 0.0;
    for (const double t : gauss_t) {
      const double s = be.s0 + (be.s1 - be.s0) * t;
      const double m = std::sin(consts::pi * s / w);
      ca += 0.5 * len * (1.0 - t) * m;
      cb += 0.5 * len * t * m;
      m2 += 0.5 * len * m * m;
    }
    if (!dirichlet[be.a]) trips.emplace_back(be.a, be.port, Complex(ca, 0.0));
    if (!dirichlet[be.b]) trips.emplace_back(be.b, be.port, Complex(cb, 0.0));
    d[be.port] += m2;
  }
  C.resize(mesh.n_vertices(), n_ports);
  C.setFromTriplets(trips.begin(), trips.end());
}

}  // namespace

ForwardSystem assemble(const Mesh& mesh, const KappaField& kappa, const AssemblyParams& params) {
  const int n = mesh.n_vertices();
  ForwardSystem sys;
  sys.mesh = &mesh;
  sys.kappa = kappa;
  sys.beta = params.beta;
  sys.k_open = params.k_open;
  sys.frequency = params.frequency;
  sys.n_ports = mesh.n_ports;
  sys.dirichlet = params.include_boundary ? dirichlet_mask(mesh) : std::vector<char>(n, 0);

  std::vector<int> all_elems(mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) all_elems[t] = t;
  std::vector<int> identity(n);
  for (int i = 0; i < n; ++i) identity[i] = i;

  std::vector<Triplet> trips;
  trips.reserve(12 * mesh.n_triangles());
  append_volume_triplets(mesh, kappa, all_elems, identity, sys.dirichlet, trips);
  if (params.include_boundary) {
    std::vector<int> all_bedges(mesh.boundary.size());
    for (std::size_t e = 0; e < mesh.boundary.size(); ++e) all_bedges[e] = static_cast<int>(e);
    append_boundary_triplets(mesh, params, all_bedges, identity, sys.dirichlet, trips);
    for (int i = 0; i < n; ++i)
      if (sys.dirichlet[i]) trips.emplace_back(i, i, Complex(1.0, 0.0));
  }
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trips.begin(), trips.end());

  port_integrals(mesh, sys.dirichlet, sys.port_vectors, sys.port_mode_norm);
  return sys;
}

Eigen::VectorXcd ForwardSystem::rhs(int transmitter) const {
  if (transmitter < 0 || transmitter >= n_ports)
    throw std::invalid_argument("transmitter index out of range");
  return Complex(0.0, 2.0 * beta) * Eigen::VectorXcd(port_vectors.col(transmitter));
}

Eigen::MatrixXcd ForwardSystem::rhs_all() const {
  return Complex(0.0, 2.0 * beta) * Eigen::MatrixXcd(port_vectors);
}

}  // namespace mwt
