#pragma once

// Combinatorial closed oriented triangulated surfaces.
//
// Half-edge h = 3 * f + c runs from corner c to corner (c + 1) % 3 of face f. Faces are
// counterclockwise in the developing plane, so the left face of h is face(h). Loops and
// multi-edges are allowed; explicit corner gluing resolves them.

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace circlepat {

using Face = std::array<int, 3>;
using HalfedgePair = std::pair<int, int>;

class Triangulation {
public:
  int n_vertices() const { return n_vertices_; }
  int n_faces() const { return static_cast<int>(faces_.size()); }
  int n_edges() const { return static_cast<int>(edge_halfedge_.size()); }
  int n_halfedges() const { return 3 * n_faces(); }
  int genus() const { return genus_; }
  int euler_characteristic() const { return n_vertices() - n_edges() + n_faces(); }

  const std::vector<Face>& faces() const { return faces_; }

  static int face(int h) { return h / 3; }
  static int next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
  static int prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
  int tail(int h) const { return faces_[h / 3][h % 3]; }
  int head(int h) const { return faces_[h / 3][(h % 3 + 1) % 3]; }
  int twin(int h) const { return twin_[h]; }
  int edge(int h) const { return edge_of_[h]; }
  // Lower-id half-edge of edge e; its twin is the other side.
  int edge_halfedge(int e) const { return edge_halfedge_[e]; }
  bool is_loop(int e) const { return tail(edge_halfedge(e)) == head(edge_halfedge(e)); }
  bool has_loops() const;

  // Outgoing half-edges around a common tail vertex.
  int cw_next(int h) const { return next(twin_[h]); }
  int ccw_next(int h) const { return twin_[prev(h)]; }

  // Lowest-id outgoing half-edge of v.
  int canonical_halfedge(int v) const { return canonical_[v]; }
  int degree(int v) const { return degree_[v]; }

  // Explicit gluing as (h, twin(h)) pairs with h < twin(h), ordered by edge id.
  std::vector<HalfedgePair> corner_gluing() const;

private:
  friend Triangulation build(const std::vector<Face>&, int, const std::optional<std::vector<HalfedgePair>>&);

  int n_vertices_ = 0;
  int genus_ = 0;
  std::vector<Face> faces_;
  std::vector<int> twin_;
  std::vector<int> edge_of_;
  std::vector<int> edge_halfedge_;
  std::vector<int> canonical_;
  std::vector<int> degree_;
};

// Validates and builds. Without a gluing, half-edges are matched by vertex pairs, which must be
// unambiguous. Throws Error(NonManifold | OrientationMismatch | NotClosed | InvalidInput).
Triangulation build(const std::vector<Face>& faces, int n_vertices,
                    const std::optional<std::vector<HalfedgePair>>& gluing = std::nullopt);

// Outgoing half-edges at a vertex in clockwise order, starting at the canonical half-edge.
// Loops contribute two corners.
struct VertexLink {
  int vertex = -1;
  std::vector<int> corners;
  int degree() const { return static_cast<int>(corners.size()); }
};

VertexLink vertex_link(const Triangulation& tri, int v);

// Breadth-first spanning tree of the dual graph. Each non-tree edge is a generator: with
// half-edges (h, t), h < t, the deck transformation delta carries face(t) to the copy adjacent to
// face(h) across h.
struct Generator {
  int edge = -1;
  int halfedge = -1; // h, on the `from` side
  int from_face = -1;
  int to_face = -1;
};

struct FundamentalDomain {
  int root = 0;
  std::vector<int> order;           // faces in breadth-first order
  std::vector<int> parent_halfedge; // half-edge in the parent face crossed to reach f; -1 at root
  std::vector<int> depth;
  std::vector<bool> tree_edge;      // per edge
  std::vector<int> generator_of_edge; // -1 for tree edges
  std::vector<Generator> generators;

  int n_generators() const { return static_cast<int>(generators.size()); }
};

FundamentalDomain fundamental_domain(const Triangulation& tri, int root = 0);
// Spanning tree that crosses the edges marked in `cut` only where the remaining dual graph is
// disconnected.
FundamentalDomain fundamental_domain(const Triangulation& tri, int root, const std::vector<bool>& cut);

} // namespace circlepat
