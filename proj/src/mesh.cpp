#include "mwt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mwt/delaunay.hpp"
#include "mwt/errors.hpp"
#include "mwt/rng.hpp"

namespace mwt {

double Mesh::tri_area(int t) const {
  const Vec2 a = vertices[triangles[t][0]];
  const Vec2 b = vertices[triangles[t][1]];
  const Vec2 c = vertices[triangles[t][2]];
  return 0.5 * cross(b - a, c - a);
}

Vec2 Mesh::tri_centroid(int t) const {
  const Vec2 a = vertices[triangles[t][0]];
  const Vec2 b = vertices[triangles[t][1]];
  const Vec2 c = vertices[triangles[t][2]];
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

int Mesh::label_id(const std::string& name) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

struct Loop {
  std::vector<Vec2> points;  // closed polyline, CCW
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  void finalize() {
    xmin = ymin = 1e300;
    xmax = ymax = -1e300;
    for (const auto& p : points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }

  bool contains(Vec2 p) const {
    if (p.x < xmin || p.x > xmax || p.y < ymin || p.y > ymax) return false;
    // crossing number
    bool inside = false;
    const std::size_t n = points.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 a = points[j], b = points[i];
      if ((b.y > p.y) != (a.y > p.y)) {
        const double xcross = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
        if (p.x < xcross) inside = !inside;
      }
    }
    return inside;
  }
};

Loop sample_primitive(const Primitive& shape, double spacing) {
  Loop loop;
  if (const Circle* c = std::get_if<Circle>(&shape)) {
    const double perimeter = 2.0 * consts::pi * c->radius;
    const int n = std::max(14, static_cast<int>(std::ceil(perimeter / spacing)));
    loop.points.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * consts::pi * k / n;
      loop.points.push_back({c->center.x + c->radius * std::cos(t),
                             c->center.y + c->radius * std::sin(t)});
    }
  } else {
    const Ellipse& e = std::get<Ellipse>(shape);
    // Ramanujan perimeter estimate is plenty for choosing the sample count.
    const double h = std::pow((e.semi_major - e.semi_minor) / (e.semi_major + e.semi_minor), 2);
    const double perimeter = consts::pi * (e.semi_major + e.semi_minor) *
                             (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h)));
    const int n = std::max(14, static_cast<int>(std::ceil(perimeter / spacing)));
    const double ca = std::cos(e.angle), sa = std::sin(e.angle);
    loop.points.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * consts::pi * k / n;
      const double u = e.semi_major * std::cos(t);
      const double v = e.semi_minor * std::sin(t);
      loop.points.push_back({e.center.x + ca * u - sa * v, e.center.y + sa * u + ca * v});
    }
  }
  loop.finalize();
  return loop;
}

struct ChamberChain {
  std::vector<Vec2> points;  // CCW around the circle, no duplicate at wrap
  struct Seg {
    int a, b;  // indices into `points`
    BoundaryKind kind;
    int port;
    double s0, s1;  // arc length along the port from its start
  };
  std::vector<Seg> segments;
};

ChamberChain sample_chamber(const PortSet& ports, double spacing) {
  ChamberChain chain;
  const double radius = ports.radius;
  for (const auto& arc : ports.arcs) {
    const double len = radius * (arc.theta1 - arc.theta0);
    const int nseg = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    const int first = static_cast<int>(chain.points.size());
    for (int k = 0; k < nseg; ++k) {
      const double theta = arc.theta0 + (arc.theta1 - arc.theta0) * k / nseg;
      chain.points.push_back({radius * std::cos(theta), radius * std::sin(theta)});
      ChamberChain::Seg seg;
      seg.a = first + k;
      seg.b = first + k + 1;  // fixed up at wrap below
      seg.kind = arc.kind;
      seg.port = arc.port_index;
      seg.s0 = len * k / nseg;
      seg.s1 = len * (k + 1) / nseg;
      chain.segments.push_back(seg);
    }
  }
  // close the ring
  chain.segments.back().b = 0;
  return chain;
}

double dist2(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Uniform hash grid over a point cloud for nearest-neighbor culling.
class PointGrid {
 public:
  PointGrid(const std::vector<Vec2>& pts, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(pts[i])].push_back(static_cast<int>(i));
    pts_ = &pts;
  }
  bool any_within(Vec2 p, double r) const {
    const double r2 = r * r;
    const int cx = static_cast<int>(std::floor(p.x / cell_));
    const int cy = static_cast<int>(std::floor(p.y / cell_));
    const int span = static_cast<int>(std::ceil(r / cell_));
    for (int ix = cx - span; ix <= cx + span; ++ix)
      for (int iy = cy - span; iy <= cy + span; ++iy) {
        const auto it = cells_.find({ix, iy});
        if (it == cells_.end()) continue;
        for (const int i : it->second)
          if (dist2((*pts_)[i], p) < r2) return true;
      }
    return false;
  }

 private:
  std::pair<int, int> key(Vec2 p) const {
    return {static_cast<int>(std::floor(p.x / cell_)), static_cast<int>(std::floor(p.y / cell_))};
  }
  double cell_;
  std::map<std::pair<int, int>, std::vector<int>> cells_;
  const std::vector<Vec2>* pts_ = nullptr;
};

Mesh build_disk_mesh(const Scene& scene, double target_edge, bool with_interfaces) {
  const double radius = scene.ports.radius;
  const double boundary_spacing = 0.48 * target_edge;
  const double lattice_spacing = 0.48 * target_edge;

  const ChamberChain chain = sample_chamber(scene.ports, boundary_spacing);

  std::vector<Loop> loops;
  std::vector<int> loop_region;  // phantom region index per loop
  if (with_interfaces) {
    for (std::size_t r = 0; r < scene.phantom.regions.size(); ++r) {
      loops.push_back(sample_primitive(scene.phantom.regions[r].shape, boundary_spacing));
      loop_region.push_back(static_cast<int>(r));
    }
  }

  std::vector<Vec2> pts = chain.points;
  std::vector<std::pair<int, int>> constraints;
  for (const auto& seg : chain.segments) constraints.emplace_back(seg.a, seg.b);

  std::vector<int> loop_first(loops.size(), 0);
  for (std::size_t li = 0; li < loops.size(); ++li) {
    loop_first[li] = static_cast<int>(pts.size());
    const int n = static_cast<int>(loops[li].points.size());
    for (const auto& p : loops[li].points) pts.push_back(p);
    for (int k = 0; k < n; ++k)
      constraints.emplace_back(loop_first[li] + k, loop_first[li] + (k + 1) % n);
  }

  // Interior points: jittered hexagonal lattice, culled near any constraint
  // point so recovery stays local and triangles stay well shaped.
  {
    PointGrid guard(pts, std::max(boundary_spacing, 1e-9));
    const double s = lattice_spacing;
    const double row_h = s * std::sqrt(3.0) / 2.0;
        // Clearance to the nearest sampled curve point that guarantees a
    // perpendicular clearance of ~0.4 s to every constraint chord
    // (curve points are at most `boundary_spacing` apart).
    const double keepout = 0.68 * s;
    const int ny = static_cast<int>(std::ceil(2.0 * radius / row_h)) + 2;
    const int nx = static_cast<int>(std::ceil(2.0 * radius / s)) + 2;
    for (int iy = -ny; iy <= ny; ++iy) {
      const double y0 = iy * row_h;
      const double x_off = (iy & 1) ? 0.5 * s : 0.0;
      for (int ix = -nx; ix <= nx; ++ix) {
        SplitMix64 jitter = SplitMix64::stream(
            0x6a69747465724aull, (static_cast<std::uint64_t>(iy + ny) << 24) ^
                                     static_cast<std::uint64_t>(ix + nx));
        const Vec2 p{ix * s + x_off + 0.12 * s * jitter.next_symmetric(),
                     y0 + 0.12 * s * jitter.next_symmetric()};
        if (norm(p) > radius - keepout) continue;
        if (guard.any_within(p, keepout)) continue;
        pts.push_back(p);
      }
    }
  }

  detail::Delaunay dt(pts);
  dt.triangulate();
  for (const auto& [a, b] : constraints) dt.recover_segment(a, b);
  const auto raw_tris = dt.extract();

  Mesh mesh;
  mesh.vertices = std::move(pts);
  mesh.triangles = raw_tris;
  mesh.n_ports = scene.ports.n_ports;
  mesh.port_arc_length = scene.ports.port_arc_length;
  mesh.target_edge_length = target_edge;

  // Tissue labels by centroid containment against the sampled loops, in
  // region priority order; the polygonal loops are the meshed interfaces, so
  // every centroid classifies cleanly.
  std::map<std::string, int> label_ids;
  auto intern = [&](const std::string& name) {
    auto it = label_ids.find(name);
    if (it != label_ids.end()) return it->second;
    const int id = static_cast<int>(mesh.labels.size());
    mesh.labels.push_back(name);
    label_ids.emplace(name, id);
    return id;
  };

  std::vector<int> region_count(scene.phantom.regions.size(), 0);
  mesh.tri_label.resize(mesh.triangles.size());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Vec2 c = mesh.tri_centroid(t);
    std::string tissue = "matching";
    for (std::size_t li = 0; li < loops.size(); ++li) {
      if (loops[li].contains(c)) {
        tissue = scene.phantom.regions[loop_region[li]].tissue;
        ++region_count[loop_region[li]];
        break;
      }
    }
    mesh.tri_label[t] = intern(tissue);
  }
  if (with_interfaces) {
    for (std::size_t r = 0; r < scene.phantom.regions.size(); ++r) {
      if (region_count[r] == 0)
        throw MeshError("region '" + scene.phantom.regions[r].name +
                        "' has no elements at this resolution");
    }
  }

  // Boundary records straight from the chamber chain.
  for (const auto& seg : chain.segments) {
    Mesh::BEdge e;
    e.a = seg.a;
    e.b = seg.b;
    e.kind = seg.kind;
    e.port = seg.port;
    e.s0 = seg.s0;
    e.s1 = seg.s1;
    mesh.boundary.push_back(e);
  }

  // Ensure positive orientation everywhere (the triangulator emits CCW, this
  // is a cheap invariant guard).
  for (auto& tri : mesh.triangles) {
    const Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    if (cross(b - a, c - a) < 0.0) std::swap(tri[1], tri[2]);
  }

  const MeshReport report = check_mesh(mesh);
  if (!report.conforming) throw MeshError("generated mesh is not conforming");
  if (report.max_edge > target_edge * (1.0 + 1e-9))
    throw MeshError("generated mesh exceeds the target edge length");
  return mesh;
}

}  // namespace

Mesh generate_mesh(const Scene& scene, double n_lambda) {
  if (!(n_lambda >= 4.0)) throw std::invalid_argument("generate_mesh: n_lambda must be >= 4");
  const double target = scene.wavelength_matching / n_lambda;
  return build_disk_mesh(scene, target, true);
}

Mesh generate_inversion_mesh(const Scene& scene, double n_lambda) {
  if (!(n_lambda >= 4.0)) throw std::invalid_argument("generate_inversion_mesh: n_lambda must be >= 4");
  // ~15% finer than the synthesis mesh and free of phantom structure: the
  // inverse problem never sees the synthesis discretization.
  const double target = scene.wavelength_matching / n_lambda / 1.15;
  return build_disk_mesh(scene, target, false);
}

MeshReport check_mesh(const Mesh& mesh) {
  MeshReport report;
  std::map<std::pair<int, int>, int> edge_count;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  double area = 0.0;
  double max_edge = 0.0;
  double min_angle = 180.0;
  bool all_ccw = true;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const double signed_area = 0.5 * cross(b - a, c - a);
    if (signed_area <= 0.0) all_ccw = false;
    area += signed_area;
    const double lab = norm(b - a), lbc = norm(c - b), lca = norm(a - c);
    max_edge = std::max({max_edge, lab, lbc, lca});
    for (int j = 0; j < 3; ++j) edge_count[key(tri[j], tri[(j + 1) % 3])]++;
    const double angles[3] = {
        std::acos(std::clamp(dot(b - a, c - a) / (lab * lca), -1.0, 1.0)),
        std::acos(std::clamp(dot(a - b, c - b) / (lab * lbc), -1.0, 1.0)),
        std::acos(std::clamp(dot(a - c, b - c) / (lca * lbc), -1.0, 1.0))};
    for (const double ang : angles) min_angle = std::min(min_angle, ang * 180.0 / consts::pi);
  }
  int interior = 0, boundary = 0, bad = 0;
  for (const auto& [e, count] : edge_count) {
    if (count == 2)
      ++interior;
    else if (count == 1)
      ++boundary;
    else
      ++bad;
  }
  // every tagged boundary edge must exist with multiplicity one
  bool tags_ok = mesh.boundary.size() == static_cast<std::size_t>(boundary);
  for (const auto& be : mesh.boundary) {
    auto it = edge_count.find(key(be.a, be.b));
    if (it == edge_count.end() || it->second != 1) tags_ok = false;
  }
  report.conforming = bad == 0 && tags_ok;
  report.all_ccw = all_ccw;
  report.area_sum = area;
  report.max_edge = max_edge;
  report.min_angle_deg = min_angle;
  report.interior_edges = interior;
  report.boundary_edges = boundary;
  report.labels_complete =
      mesh.tri_label.size() == mesh.triangles.size() &&
      std::all_of(mesh.tri_label.begin(), mesh.tri_label.end(), [&](int l) {
        return l >= 0 && l < static_cast<int>(mesh.labels.size());
      });
  return report;
}

std::string serialize_mesh(const Mesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "mwtomo-mesh v1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  out << "triangles " << mesh.n_triangles() << "\n";
  out << "boundary " << mesh.boundary.size() << "\n";
  out << "n_ports " << mesh.n_ports << "\n";
  out << "port_arc_length " << mesh.port_arc_length << "\n";
  out << "target_edge " << mesh.target_edge_length << "\n";
  for (const auto& v : mesh.vertices) out << v.x << " " << v.y << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << " " << tri[1] << " " << tri[2] << " " << mesh.tissue_of(t) << "\n";
  }
  for (const auto& be : mesh.boundary) {
    const char* kind = be.kind == BoundaryKind::metal ? "metal"
                       : be.kind == BoundaryKind::port ? "port"
                                                       : "open";
    out << be.a << " " << be.b << " " << kind << " " << be.port << " " << be.s0 << " " << be.s1
        << "\n";
  }
  return out.str();
}

Mesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  in >> token;
  std::string version;
  in >> version;
  if (token != "mwtomo-mesh" || version != "v1")
    throw IoError("mesh file: unknown format header");
  Mesh mesh;
  int nv = 0, nt = 0, nb = 0;
  auto expect = [&](const char* name) {
    in >> token;
    if (token != name) throw IoError(std::string("mesh file: expected '") + name + "'");
  };
  expect("vertices");
  in >> nv;
  expect("triangles");
  in >> nt;
  expect("boundary");
  in >> nb;
  expect("n_ports");
  in >> mesh.n_ports;
  expect("port_arc_length");
  in >> mesh.port_arc_length;
  expect("target_edge");
  in >> mesh.target_edge_length;
  if (!in || nv <= 0 || nt <= 0 || nb < 0) throw IoError("mesh file: bad counts");
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices) in >> v.x >> v.y;
  mesh.triangles.resize(nt);
  mesh.tri_label.resize(nt);
  std::map<std::string, int> ids;
  for (int t = 0; t < nt; ++t) {
    std::string label;
    in >> mesh.triangles[t][0] >> mesh.triangles[t][1] >> mesh.triangles[t][2] >> label;
    auto it = ids.find(label);
    if (it == ids.end()) {
      it = ids.emplace(label, static_cast<int>(mesh.labels.size())).first;
      mesh.labels.push_back(label);
    }
    mesh.tri_label[t] = it->second;
  }
  mesh.boundary.resize(nb);
  for (auto& be : mesh.boundary) {
    std::string kind;
    in >> be.a >> be.b >> kind >> be.port >> be.s0 >> be.s1;
    if (kind == "metal")
      be.kind = BoundaryKind::metal;
    else if (kind == "port")
      be.kind = BoundaryKind::port;
    else if (kind == "open")
      be.kind = BoundaryKind::open;
    else
      throw IoError("mesh file: unknown boundary kind '" + kind + "'");
  }
  if (!in) throw IoError("mesh file: truncated");
  return mesh;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write mesh file '" + path + "'");
  out << serialize_mesh(mesh);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mesh(buf.str());
}

}  // namespace mwt
