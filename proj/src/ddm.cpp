#include "mwt/ddm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "mwt/errors.hpp"
#include "mwt/parallel.hpp"

namespace mwt {

namespace {

/// Recursive coordinate bisection of element ids by centroid, proportional
/// splits so any subdomain count balances.
void rcb(const Mesh& mesh, std::vector<int>& elems, int n_parts, int first_part,
         std::vector<int>& part_of) {
  if (n_parts == 1) {
    for (const int e : elems) part_of[e] = first_part;
    return;
  }
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const int e : elems) {
    const Vec2 c = mesh.tri_centroid(e);
    xmin = std::min(xmin, c.x);
    xmax = std::max(xmax, c.x);
    ymin = std::min(ymin, c.y);
    ymax = std::max(ymax, c.y);
  }
  const bool split_x = (xmax - xmin) >= (ymax - ymin);
  const int left_parts = n_parts / 2;
  const int right_parts = n_parts - left_parts;
  const auto split =
      elems.begin() + static_cast<std::ptrdiff_t>(
                          static_cast<long long>(elems.size()) * left_parts / n_parts);
  std::nth_element(elems.begin(), split, elems.end(), [&](int a, int b) {
    const Vec2 ca = mesh.tri_centroid(a), cb = mesh.tri_centroid(b);
    const double va = split_x ? ca.x : ca.y;
    const double vb = split_x ? cb.x : cb.y;
    if (va != vb) return va < vb;
    return a < b;  // deterministic tie-break
  });
  std::vector<int> left(elems.begin(), split), right(split, elems.end());
  rcb(mesh, left, left_parts, first_part, part_of);
  rcb(mesh, right, right_parts, first_part + left_parts, part_of);
}

std::vector<std::vector<int>> node_to_elements(const Mesh& mesh) {
  std::vector<std::vector<int>> adj(mesh.n_vertices());
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (const int v : mesh.triangles[t]) adj[v].push_back(t);
  return adj;
}

}  // namespace

Partition make_partition(const Mesh& mesh, int n_sub, int overlap) {
  if (n_sub < 1 || n_sub > mesh.n_triangles())
    throw std::invalid_argument("partition: n_sub must be between 1 and the element count");
  if (overlap < 1) throw std::invalid_argument("partition: overlap must be at least 1 layer");

  Partition part;
  part.n_sub = n_sub;
  part.overlap = overlap;

  std::vector<int> elems(mesh.n_triangles());
  std::iota(elems.begin(), elems.end(), 0);
  std::vector<int> part_of(mesh.n_triangles(), -1);
  rcb(mesh, elems, n_sub, 0, part_of);

  // node ownership from the disjoint base partition (lowest id wins on seams)
  std::vector<int> owner(mesh.n_vertices(), n_sub);
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (const int v : mesh.triangles[t]) owner[v] = std::min(owner[v], part_of[t]);

  const auto adj = node_to_elements(mesh);
  part.elements.resize(n_sub);
  part.nodes.resize(n_sub);
  part.weights.resize(n_sub);
  for (int s = 0; s < n_sub; ++s) {
    std::vector<char> in_set(mesh.n_triangles(), 0);
    for (int t = 0; t < mesh.n_triangles(); ++t)
      if (part_of[t] == s) in_set[t] = 1;
    for (int layer = 0; layer < overlap; ++layer) {
      std::vector<int> grow;
      for (int t = 0; t < mesh.n_triangles(); ++t) {
        if (!in_set[t]) continue;
        for (const int v : mesh.triangles[t])
          for (const int e : adj[v])
            if (!in_set[e]) grow.push_back(e);
      }
      for (const int e : grow) in_set[e] = 1;
    }
    std::set<int> node_set;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      if (!in_set[t]) continue;
      part.elements[s].push_back(t);
      for (const int v : mesh.triangles[t]) node_set.insert(v);
    }
    part.nodes[s].assign(node_set.begin(), node_set.end());
    part.weights[s].resize(part.nodes[s].size());
    for (std::size_t i = 0; i < part.nodes[s].size(); ++i)
      part.weights[s][i] = owner[part.nodes[s][i]] == s ? 1.0 : 0.0;
  }
  return part;
}

OrasPreconditioner::OrasPreconditioner(const ForwardSystem& system, const Partition& partition) {
  const Mesh& mesh = *system.mesh;
  n_nodes_ = mesh.n_vertices();

  // boundary-edge ownership: sorted node pair -> boundary edge id
  std::map<std::pair<int, int>, int> boundary_of;
  for (std::size_t e = 0; e < mesh.boundary.size(); ++e) {
    const auto& be = mesh.boundary[e];
    boundary_of[{std::min(be.a, be.b), std::max(be.a, be.b)}] = static_cast<int>(e);
  }

  AssemblyParams params;
  params.beta = system.beta;
  params.k_open = system.k_open;
  params.frequency = system.frequency;

  locals_.resize(partition.n_sub);
  for (int s = 0; s < partition.n_sub; ++s) {
    Local& local = locals_[s];
    local.nodes = partition.nodes[s];
    local.weights = partition.weights[s];
    const int nl = static_cast<int>(local.nodes.size());
    std::vector<int> g2l(mesh.n_vertices(), -1);
    for (int i = 0; i < nl; ++i) g2l[local.nodes[i]] = i;

    // Edge census over the subdomain's elements: multiplicity-1 edges are the
    // subdomain boundary; those that are not global boundary edges get the
    // Robin interface condition.
    std::map<std::pair<int, int>, int> edge_count;
    for (const int t : partition.elements[s]) {
      const auto& tri = mesh.triangles[t];
      for (int j = 0; j < 3; ++j) {
        const int a = tri[j], b = tri[(j + 1) % 3];
        edge_count[{std::min(a, b), std::max(a, b)}]++;
      }
    }
    std::vector<int> local_bedges;
    std::vector<std::pair<int, int>> interface_edges;
    for (const auto& [key, count] : edge_count) {
      if (count != 1) continue;
      const auto it = boundary_of.find(key);
      if (it != boundary_of.end())
        local_bedges.push_back(it->second);
      else
        interface_edges.push_back(key);
    }

    std::vector<Triplet> trips;
    append_volume_triplets(mesh, system.kappa, partition.elements[s], g2l, system.dirichlet,
                           trips);
    append_boundary_triplets(mesh, params, local_bedges, g2l, system.dirichlet, trips);
    append_edge_mass_triplets(mesh, Complex(0.0, 1.0) * system.k_open, interface_edges, g2l,
                              system.dirichlet, trips);
    for (int i = 0; i < nl; ++i)
      if (system.dirichlet[local.nodes[i]]) trips.emplace_back(i, i, Complex(1.0, 0.0));

    SparseC Ai(nl, nl);
    Ai.setFromTriplets(trips.begin(), trips.end());
    local.lu = std::make_unique<Eigen::SparseLU<SparseC>>();
    local.lu->compute(Ai);
    if (local.lu->info() != Eigen::Success)
      throw SolverError("oras: local factorization failed on subdomain " + std::to_string(s), 0,
                        0.0);
  }
}

void OrasPreconditioner::apply(const Eigen::VectorXcd& r, Eigen::VectorXcd& z) const {
  z = Eigen::VectorXcd::Zero(n_nodes_);
  // Local solves are independent; the weighted scatter writes each node from
  // exactly one subdomain, so any execution order gives the same result.
  for (const Local& local : locals_) {
    const int nl = static_cast<int>(local.nodes.size());
    Eigen::VectorXcd ri(nl);
    for (int i = 0; i < nl; ++i) ri[i] = r[local.nodes[i]];
    const Eigen::VectorXcd xi = local.lu->solve(ri);
    for (int i = 0; i < nl; ++i)
      if (local.weights[i] != 0.0) z[local.nodes[i]] += local.weights[i] * xi[i];
  }
}

std::shared_ptr<OrasPreconditioner> build_oras(const ForwardSystem& system,
                                               const Partition& partition) {
  return std::make_shared<OrasPreconditioner>(system, partition);
}

OrasGmresSolver::OrasGmresSolver(const ForwardSystem& system, const Partition& partition,
                                 GmresOptions options)
    : A_(system.A), precond_(build_oras(system, partition)), options_(options) {}

Eigen::VectorXcd OrasGmresSolver::solve(const Eigen::VectorXcd& b) const {
  return gmres_solve(A_, b, precond_->op(), options_).x;
}

GmresResult OrasGmresSolver::solve_traced(const Eigen::VectorXcd& b) const {
  return gmres_solve(A_, b, precond_->op(), options_);
}

Eigen::MatrixXcd OrasGmresSolver::solve_many(const Eigen::MatrixXcd& B) const {
  Eigen::MatrixXcd X(B.rows(), B.cols());
  parallel_for(static_cast<int>(B.cols()), [&](int j) {
    const GmresResult result = gmres_solve(A_, B.col(j), precond_->op(), options_);
    X.col(j) = result.x;
  });
  return X;
}

}  // namespace mwt
