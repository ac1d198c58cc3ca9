#pragma once

#include <array>
#include <string>
#include <vector>

#include "mwt/geometry.hpp"

namespace mwt {

/// Conforming triangulation with per-element tissue labels and tagged
/// boundary edges. Immutable after generation.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW vertex indices
  std::vector<int> tri_label;                 // index into labels
  std::vector<std::string> labels;            // tissue names

  struct BEdge {
    int a = 0, b = 0;            // vertex indices, CCW along the chamber circle
    BoundaryKind kind = BoundaryKind::metal;
    int port = -1;               // valid when kind == port
    double s0 = 0.0, s1 = 0.0;   // arc-length along the port, from its start
  };
  std::vector<BEdge> boundary;

  int n_ports = 0;
  double port_arc_length = 0.0;
  double target_edge_length = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double tri_area(int t) const;
  Vec2 tri_centroid(int t) const;
  int label_id(const std::string& name) const;  // -1 when absent
  const std::string& tissue_of(int t) const { return labels[tri_label[t]]; }
};

/// Structural health report; see check_mesh.
struct MeshReport {
  bool conforming = false;      // interior edges shared by 2, boundary by 1
  bool all_ccw = false;
  bool labels_complete = false;
  double area_sum = 0.0;
  double max_edge = 0.0;
  double min_angle_deg = 0.0;
  int interior_edges = 0;
  int boundary_edges = 0;
};

MeshReport check_mesh(const Mesh& mesh);

/// Synthesis mesh: conforming triangulation of the chamber disk resolving all
/// phantom region interfaces and port arc endpoints. Maximum edge length is
/// lambda_matching / n_lambda. Throws MeshError on degenerate regions.
Mesh generate_mesh(const Scene& scene, double n_lambda);

/// Inversion mesh: same chamber and ports, no phantom interfaces, every
/// element labeled matching medium, ~15% finer target edge length so the two
/// discretizations never coincide.
Mesh generate_inversion_mesh(const Scene& scene, double n_lambda);

std::string serialize_mesh(const Mesh& mesh);
Mesh parse_mesh(const std::string& text);
void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

}  // namespace mwt
