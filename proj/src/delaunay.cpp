#include "mwt/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mwt/errors.hpp"
#include "mwt/rng.hpp"

namespace mwt::detail {

namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 p, Vec2 q, double tol) {
  const double o1 = orient(a, b, p);
  const double o2 = orient(a, b, q);
  const double o3 = orient(p, q, a);
  const double o4 = orient(p, q, b);
  const bool ab_splits = (o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol);
  const bool pq_splits = (o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol);
  return ab_splits && pq_splits;
}

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

Delaunay::Delaunay(const std::vector<Vec2>& points) : pts_(points) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : pts_) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);
  const double diag = std::max(1e-30, std::hypot(xmax - xmin, ymax - ymin));
  scale_ = diag;

  // Super-triangle well clear of every circumcircle of interest.
  const double r = 64.0 * diag;
  const int n = static_cast<int>(pts_.size());
  pts_.push_back({cx - 1.8 * r, cy - r});
  pts_.push_back({cx + 1.8 * r, cy - r});
  pts_.push_back({cx, cy + 1.8 * r});

  Tri root;
  root.v = {n, n + 1, n + 2};
  root.nb = {-1, -1, -1};
  root.alive = true;
  tris_.push_back(root);
  vertex_tri_.assign(pts_.size(), 0);
}

bool Delaunay::incircle(const Tri& t, Vec2 p) const {
  const Vec2 a = pts_[t.v[0]], b = pts_[t.v[1]], c = pts_[t.v[2]];
  const double ax = a.x - p.x, ay = a.y - p.y;
  const double bx = b.x - p.x, by = b.y - p.y;
  const double cx = c.x - p.x, cy = c.y - p.y;
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double det = ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
  const double m2 = std::max({a2, b2, c2});
  // Cocircular configurations (all chamber points share one circle) land in
  // the tolerance band and count as outside, which keeps cavities minimal.
  return det > 1e-11 * m2 * m2;
}

int Delaunay::locate(Vec2 p, int hint) const {
  const double tol = 1e-13 * scale_ * scale_;
  int t = -1;
  if (hint >= 0 && hint < static_cast<int>(tris_.size()) && tris_[hint].alive) t = hint;
  if (t < 0) {
    for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i)
      if (tris_[i].alive) {
        t = i;
        break;
      }
  }
  for (int step = 0; step < 1 << 20; ++step) {
    const Tri& tri = tris_[t];
    int next = -1;
    for (int k = 0; k < 3; ++k) {
      const int j = (k + step) % 3;
      const Vec2 ea = pts_[tri.v[(j + 1) % 3]];
      const Vec2 eb = pts_[tri.v[(j + 2) % 3]];
      if (orient(ea, eb, p) < -tol) {
        next = tri.nb[j];
        break;
      }
    }
    if (next == -1) {
      bool inside = true;
      for (int j = 0; j < 3; ++j) {
        const Vec2 ea = pts_[tri.v[(j + 1) % 3]];
        const Vec2 eb = pts_[tri.v[(j + 2) % 3]];
        if (orient(ea, eb, p) < -tol) inside = false;
      }
      if (inside) return t;
      break;  // walked to a dead end, fall through to the scan
    }
    t = next;
  }
  for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
    if (!tris_[i].alive) continue;
    const Tri& tri = tris_[i];
    bool inside = true;
    for (int j = 0; j < 3 && inside; ++j) {
      const Vec2 ea = pts_[tri.v[(j + 1) % 3]];
      const Vec2 eb = pts_[tri.v[(j + 2) % 3]];
      if (orient(ea, eb, p) < -tol) inside = false;
    }
    if (inside) return i;
  }
  throw MeshError("delaunay: point location failed");
}

void Delaunay::set_neighbor(int t, int old_nb, int new_nb) {
  if (t < 0) return;
  for (int j = 0; j < 3; ++j)
    if (tris_[t].nb[j] == old_nb) {
      tris_[t].nb[j] = new_nb;
      return;
    }
}

void Delaunay::insert(int point_index) {
  const Vec2 p = pts_[point_index];
  const int t0 = locate(p, last_tri_);

  // Grow the cavity: every reachable triangle whose circumcircle strictly
  // contains p.
  std::vector<int> cavity;
  std::vector<int> stack{t0};
  std::vector<char> in_cavity(tris_.size(), 0);
  in_cavity[t0] = 1;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    cavity.push_back(t);
    for (int j = 0; j < 3; ++j) {
      const int nb = tris_[t].nb[j];
      if (nb < 0 || in_cavity[nb]) continue;
      if (incircle(tris_[nb], p)) {
        in_cavity[nb] = 1;
        stack.push_back(nb);
      }
    }
  }

  struct Rim {
    int a, b, outside;
  };
  std::vector<Rim> rim;
  for (const int t : cavity) {
    for (int j = 0; j < 3; ++j) {
      const int nb = tris_[t].nb[j];
      if (nb >= 0 && in_cavity[nb]) continue;
      rim.push_back({tris_[t].v[(j + 1) % 3], tris_[t].v[(j + 2) % 3], nb});
    }
  }

  for (const int t : cavity) tris_[t].alive = false;

  // Fan the rim to p. Rim edges run CCW around the cavity, so (a, b, p) is CCW.
  std::vector<int> created(rim.size());
  std::vector<std::pair<int, int>> start_of(rim.size()), end_of(rim.size());
  for (std::size_t k = 0; k < rim.size(); ++k) {
    Tri t;
    t.v = {rim[k].a, rim[k].b, point_index};
    t.nb = {-1, -1, -1};
    t.alive = true;
    created[k] = static_cast<int>(tris_.size());
    tris_.push_back(t);
    start_of[k] = {rim[k].a, created[k]};
    end_of[k] = {rim[k].b, created[k]};
  }
  auto find_by = [](std::vector<std::pair<int, int>>& v, int key) {
    for (const auto& [k, t] : v)
      if (k == key) return t;
    return -1;
  };
  for (std::size_t k = 0; k < rim.size(); ++k) {
    const int id = created[k];
    Tri& t = tris_[id];
    // edge opposite p = (a, b) -> old outside neighbor
    t.nb[2] = rim[k].outside;
    if (rim[k].outside >= 0) {
      // In the outside triangle the shared edge runs (b, a).
      const int j_out = edge_index(tris_[rim[k].outside], rim[k].b, rim[k].a);
      if (j_out >= 0) tris_[rim[k].outside].nb[j_out] = id;
    }
    // edge opposite a = (b, p) -> triangle whose rim edge starts at b
    t.nb[0] = find_by(start_of, rim[k].b);
    // edge opposite b = (p, a) -> triangle whose rim edge ends at a
    t.nb[1] = find_by(end_of, rim[k].a);
    vertex_tri_[rim[k].a] = id;
    vertex_tri_[rim[k].b] = id;
  }
  if (!created.empty()) {
    vertex_tri_[point_index] = created[0];
    last_tri_ = created[0];
  }
}

void Delaunay::triangulate(std::uint64_t shuffle_seed) {
  const int n = static_cast<int>(pts_.size()) - 3;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 gen(shuffle_seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(gen.next() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  for (const int idx : order) insert(idx);
}

int Delaunay::edge_index(const Tri& t, int a, int b) const {
  for (int j = 0; j < 3; ++j) {
    if (t.v[(j + 1) % 3] == a && t.v[(j + 2) % 3] == b) return j;
  }
  return -1;
}

int Delaunay::find_tri_with_edge(int a, int b) const {
  // rotate around a
  const int t0 = vertex_tri_[a];
  int t = t0;
  for (int dir = 0; dir < 2; ++dir) {
    t = t0;
    for (int step = 0; step < 1 << 16; ++step) {
      const Tri& tri = tris_[t];
      int ia = -1;
      for (int j = 0; j < 3; ++j)
        if (tri.v[j] == a) ia = j;
      if (ia < 0) break;
      if (edge_index(tri, a, b) >= 0 || edge_index(tri, b, a) >= 0) return t;
      const int next = tri.nb[(ia + 1 + dir) % 3];
      if (next < 0 || next == t0) break;
      t = next;
    }
  }
  return -1;
}

bool Delaunay::has_edge(int a, int b) const {
  const int t = find_tri_with_edge(a, b);
  return t >= 0;
}

void Delaunay::flip(int t1, int j1) {
  Tri old1 = tris_[t1];
  const int w = old1.v[j1];
  const int u = old1.v[(j1 + 1) % 3];
  const int v = old1.v[(j1 + 2) % 3];
  const int t2 = old1.nb[j1];
  Tri old2 = tris_[t2];
  const int j2 = edge_index(old2, v, u);
  if (j2 < 0) throw MeshError("delaunay: inconsistent adjacency during flip");
  const int x = old2.v[j2];

  const int n_vw = old1.nb[edge_index(old1, v, w)];
  const int n_wu = old1.nb[edge_index(old1, w, u)];
  const int n_ux = old2.nb[edge_index(old2, u, x)];
  const int n_xv = old2.nb[edge_index(old2, x, v)];

  Tri a;  // (u, x, w)
  a.v = {u, x, w};
  a.alive = true;
  Tri b;  // (x, v, w)
  b.v = {x, v, w};
  b.alive = true;
  // edge opposite u in a = (x, w) -> b ; opposite x = (w, u) -> n_wu ; opposite w = (u, x) -> n_ux
  a.nb = {t2, n_wu, n_ux};
  // edge opposite x in b = (v, w) -> n_vw ; opposite v = (w, x) -> a ; opposite w = (x, v) -> n_xv
  b.nb = {n_vw, t1, n_xv};
  tris_[t1] = a;
  tris_[t2] = b;
  set_neighbor(n_ux, t2, t1);
  set_neighbor(n_vw, t1, t2);
  vertex_tri_[u] = t1;
  vertex_tri_[w] = t1;
  vertex_tri_[x] = t1;
  vertex_tri_[v] = t2;
}

void Delaunay::recover_segment(int a, int b) {
  const double tol = 1e-13 * scale_ * scale_;
  for (int attempt = 0; attempt < 1 << 14; ++attempt) {
    if (has_edge(a, b)) {
      constrained_.insert(edge_key(a, b));
      return;
    }
    // March along the pipe of triangles crossed by (a, b), collecting the
    // crossing edges in order.
    std::vector<std::pair<int, int>> crossing;  // (tri, edge index)
    int t = -1;
    {
      const int t0 = vertex_tri_[a];
      int cur = t0;
      for (int dir = 0; dir < 2 && t < 0; ++dir) {
        cur = t0;
        for (int step = 0; step < 1 << 16; ++step) {
          const Tri& tri = tris_[cur];
          int ia = -1;
          for (int j = 0; j < 3; ++j)
            if (tri.v[j] == a) ia = j;
          if (ia < 0) break;
          const int p = tri.v[(ia + 1) % 3];
          const int q = tri.v[(ia + 2) % 3];
          if (segments_cross(pts_[a], pts_[b], pts_[p], pts_[q], tol)) {
            t = cur;
            break;
          }
          const int next = tri.nb[(ia + 1 + dir) % 3];
          if (next < 0 || next == t0) break;
          cur = next;
        }
      }
    }
    if (t < 0) throw MeshError("delaunay: segment recovery could not start");
    while (true) {
      const Tri& tri = tris_[t];
      int found = -1;
      for (int j = 0; j < 3; ++j) {
        const int p = tri.v[(j + 1) % 3];
        const int q = tri.v[(j + 2) % 3];
        if (p == a || q == a) continue;
        if (!crossing.empty() && crossing.back().first >= 0) {
          // do not walk back through the edge we came from
          const auto [pt, pj] = crossing.back();
          const Tri& prev = tris_[pt];
          const int pa = prev.v[(pj + 1) % 3], pb = prev.v[(pj + 2) % 3];
          if ((p == pb && q == pa) || (p == pa && q == pb)) continue;
        }
        if (segments_cross(pts_[a], pts_[b], pts_[p], pts_[q], tol)) {
          found = j;
          break;
        }
      }
      if (found < 0) break;
      crossing.emplace_back(t, found);
      const Tri& cur = tris_[t];
      bool reached = false;
      for (int j = 0; j < 3; ++j)
        if (cur.v[j] == b) reached = true;
      if (reached) break;
      t = cur.nb[found];
      if (t < 0) throw MeshError("delaunay: segment recovery left the mesh");
      bool contains_b = false;
      for (int j = 0; j < 3; ++j)
        if (tris_[t].v[j] == b) contains_b = true;
      if (contains_b) break;
    }
    if (crossing.empty()) throw MeshError("delaunay: segment recovery found no crossings");

    bool flipped = false;
    for (const auto& [ct, cj] : crossing) {
      const Tri& tri = tris_[ct];
      const int u = tri.v[(cj + 1) % 3];
      const int v = tri.v[(cj + 2) % 3];
      if (constrained_.count(edge_key(u, v)))
        throw MeshError("delaunay: constraint segments intersect");
      const int w = tri.v[cj];
      const int t2 = tri.nb[cj];
      if (t2 < 0) continue;
      const int j2 = edge_index(tris_[t2], v, u);
      if (j2 < 0) continue;
      const int x = tris_[t2].v[j2];
      // flip only strictly convex quads
      if (segments_cross(pts_[w], pts_[x], pts_[u], pts_[v], tol)) {
        flip(ct, cj);
        flipped = true;
        break;
      }
    }
    if (!flipped) throw MeshError("delaunay: segment recovery stalled");
  }
  throw MeshError("delaunay: segment recovery exceeded iteration budget");
}

std::vector<std::array<int, 3>> Delaunay::extract() const {
  const int n = static_cast<int>(pts_.size()) - 3;
  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris_) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    out.push_back(t.v);
  }
  return out;
}

}  // namespace mwt::detail
