#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "mwt/geometry.hpp"

namespace mwt::detail {

/// Incremental Bowyer-Watson Delaunay triangulation with flip-based
/// constraint segment recovery. Points are fixed up front; the hull of the
/// input set bounds the final triangulation.
class Delaunay {
 public:
  explicit Delaunay(const std::vector<Vec2>& points);

  /// Insert all points in a deterministic shuffled order.
  void triangulate(std::uint64_t shuffle_seed = 0x6d657368u);

  /// Force segment (a, b) to appear as an edge; both endpoints must be input
  /// points. Recovered segments are protected from later flips.
  void recover_segment(int a, int b);

  bool has_edge(int a, int b) const;

  /// Triangles among real (non-super) vertices, CCW.
  std::vector<std::array<int, 3>> extract() const;

 private:
  struct Tri {
    std::array<int, 3> v{};   // CCW
    std::array<int, 3> nb{};  // nb[i] faces edge opposite v[i]; -1 = none
    bool alive = false;
  };

  int locate(Vec2 p, int hint) const;
  void insert(int point_index);
  bool incircle(const Tri& t, Vec2 p) const;
  void flip(int t1, int edge_in_t1);
  int find_tri_with_edge(int a, int b) const;
  int edge_index(const Tri& t, int a, int b) const;
  void set_neighbor(int t, int old_nb, int new_nb);

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> vertex_tri_;  // one live triangle touching each vertex
  std::set<std::pair<int, int>> constrained_;
  int last_tri_ = 0;
  double scale_ = 1.0;
};

}  // namespace mwt::detail
