#include "circlepat/surface.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "circlepat/error.hpp"

namespace circlepat {

namespace {

std::string he_name(const Triangulation& t, int h) {
  return "half-edge " + std::to_string(h) + " (" + std::to_string(t.tail(h)) + "->" + std::to_string(t.head(h)) + ")";
}

} // namespace

bool Triangulation::has_loops() const {
  for (int e = 0; e < n_edges(); ++e) {
    if (is_loop(e)) {
      return true;
    }
  }
  return false;
}

std::vector<HalfedgePair> Triangulation::corner_gluing() const {
  std::vector<HalfedgePair> out;
  out.reserve(edge_halfedge_.size());
  for (int h : edge_halfedge_) {
    out.emplace_back(h, twin_[h]);
  }
  return out;
}

Triangulation build(const std::vector<Face>& faces, int n_vertices,
                    const std::optional<std::vector<HalfedgePair>>& gluing) {
  if (faces.empty()) {
    throw Error(ErrorKind::InvalidInput, "face list is empty");
  }
  if (n_vertices <= 0) {
    throw Error(ErrorKind::InvalidInput, "n_vertices must be positive");
  }
  for (const Face& f : faces) {
    for (int v : f) {
      if (v < 0 || v >= n_vertices) {
        throw Error(ErrorKind::InvalidInput, "vertex index " + std::to_string(v) + " out of range");
      }
    }
  }

  Triangulation t;
  t.n_vertices_ = n_vertices;
  t.faces_ = faces;
  const int nh = t.n_halfedges();
  t.twin_.assign(nh, -1);

  auto pair_up = [&](int h, int g) {
    if (t.tail(h) != t.head(g) || t.head(h) != t.tail(g)) {
      throw Error(ErrorKind::OrientationMismatch, he_name(t, h) + " glued to " + he_name(t, g) +
                                                      " is not traversed in the opposite direction");
    }
    t.twin_[h] = g;
    t.twin_[g] = h;
  };

  if (gluing) {
    for (const auto& [h, g] : *gluing) {
      if (h < 0 || g < 0 || h >= nh || g >= nh || h == g) {
        throw Error(ErrorKind::InvalidInput, "corner gluing refers to invalid half-edges");
      }
      if (t.twin_[h] != -1 || t.twin_[g] != -1) {
        throw Error(ErrorKind::NonManifold, "half-edge glued more than once");
      }
      pair_up(h, g);
    }
    for (int h = 0; h < nh; ++h) {
      if (t.twin_[h] == -1) {
        throw Error(ErrorKind::NotClosed, he_name(t, h) + " is not glued");
      }
    }
  } else {
    std::map<std::pair<int, int>, std::vector<int>> by_pair;
    for (int h = 0; h < nh; ++h) {
      by_pair[{t.tail(h), t.head(h)}].push_back(h);
    }
    for (int h = 0; h < nh; ++h) {
      if (t.twin_[h] != -1) {
        continue;
      }
      const int a = t.tail(h);
      const int b = t.head(h);
      const auto& fwd = by_pair[{a, b}];
      const auto it = by_pair.find({b, a});
      const std::size_t rev = (it == by_pair.end()) ? 0 : it->second.size();
      if (a == b) {
        if (fwd.size() != 2) {
          throw Error(ErrorKind::NonManifold, "loop at vertex " + std::to_string(a) +
                                                  " is ambiguous without corner_gluing");
        }
        pair_up(fwd[0], fwd[1]);
        continue;
      }
      if (fwd.size() == 2 && rev == 0) {
        throw Error(ErrorKind::OrientationMismatch, "edge " + std::to_string(a) + "-" + std::to_string(b) +
                                                        " is traversed twice in the same direction");
      }
      if (fwd.size() > 1 || rev > 1) {
        throw Error(ErrorKind::NonManifold, "edge " + std::to_string(a) + "-" + std::to_string(b) +
                                                " has more than two incident face sides (use corner_gluing)");
      }
      if (rev == 0) {
        throw Error(ErrorKind::NotClosed, he_name(t, h) + " has no opposite face (boundary)");
      }
      pair_up(h, it->second.front());
    }
  }

  t.edge_of_.assign(nh, -1);
  for (int h = 0; h < nh; ++h) {
    if (h < t.twin_[h]) {
      t.edge_of_[h] = t.edge_of_[t.twin_[h]] = static_cast<int>(t.edge_halfedge_.size());
      t.edge_halfedge_.push_back(h);
    }
  }

  // Every vertex link must be a single cycle.
  t.canonical_.assign(n_vertices, -1);
  t.degree_.assign(n_vertices, 0);
  for (int h = 0; h < nh; ++h) {
    const int v = t.tail(h);
    ++t.degree_[v];
    if (t.canonical_[v] == -1) {
      t.canonical_[v] = h;
    }
  }
  for (int v = 0; v < n_vertices; ++v) {
    if (t.canonical_[v] == -1) {
      throw Error(ErrorKind::NonManifold, "vertex " + std::to_string(v) + " is not used by any face");
    }
    int count = 0;
    int h = t.canonical_[v];
    do {
      ++count;
      h = t.cw_next(h);
    } while (h != t.canonical_[v] && count <= nh);
    if (count != t.degree_[v]) {
      throw Error(ErrorKind::NonManifold, "link of vertex " + std::to_string(v) + " is not a single cycle");
    }
  }

  // Connectedness through the dual graph.
  std::vector<bool> seen(t.n_faces(), false);
  std::deque<int> queue{0};
  seen[0] = true;
  int reached = 1;
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    for (int c = 0; c < 3; ++c) {
      const int g = Triangulation::face(t.twin_[3 * f + c]);
      if (!seen[g]) {
        seen[g] = true;
        ++reached;
        queue.push_back(g);
      }
    }
  }
  if (reached != t.n_faces()) {
    throw Error(ErrorKind::NonManifold, "surface is disconnected");
  }

  const int chi = t.euler_characteristic();
  if (chi > 2 || chi % 2 != 0) {
    throw Error(ErrorKind::NonManifold, "Euler characteristic " + std::to_string(chi) + " is not that of a closed oriented surface");
  }
  t.genus_ = (2 - chi) / 2;
  return t;
}

VertexLink vertex_link(const Triangulation& tri, int v) {
  if (v < 0 || v >= tri.n_vertices()) {
    throw Error(ErrorKind::InvalidInput, "vertex index out of range");
  }
  VertexLink link;
  link.vertex = v;
  link.corners.reserve(tri.degree(v));
  int h = tri.canonical_halfedge(v);
  do {
    link.corners.push_back(h);
    h = tri.cw_next(h);
  } while (h != tri.canonical_halfedge(v));
  return link;
}

FundamentalDomain fundamental_domain(const Triangulation& tri, int root) {
  return fundamental_domain(tri, root, std::vector<bool>(tri.n_edges(), false));
}

FundamentalDomain fundamental_domain(const Triangulation& tri, int root, const std::vector<bool>& cut) {
  if (root < 0 || root >= tri.n_faces()) {
    throw Error(ErrorKind::InvalidInput, "root face out of range");
  }
  if (static_cast<int>(cut.size()) != tri.n_edges()) {
    throw Error(ErrorKind::InvalidInput, "cut mask needs one entry per edge");
  }
  FundamentalDomain d;
  d.root = root;
  d.parent_halfedge.assign(tri.n_faces(), -1);
  d.depth.assign(tri.n_faces(), -1);
  d.tree_edge.assign(tri.n_edges(), false);
  d.generator_of_edge.assign(tri.n_edges(), -1);

  // Breadth-first over uncut edges; cut edges are crossed only from the frontier of what has been
  // reached once the uncut search stalls.
  std::deque<int> queue{root};
  std::vector<int> reached{root};
  d.depth[root] = 0;
  auto search = [&](bool allow_cut) {
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop_front();
      for (int c = 0; c < 3; ++c) {
        const int h = 3 * f + c;
        if (cut[tri.edge(h)] && !allow_cut) {
          continue;
        }
        const int g = Triangulation::face(tri.twin(h));
        if (d.depth[g] == -1) {
          d.depth[g] = d.depth[f] + 1;
          d.parent_halfedge[g] = h;
          d.tree_edge[tri.edge(h)] = true;
          queue.push_back(g);
          reached.push_back(g);
          if (allow_cut) {
            return;
          }
        }
      }
    }
  };
  while (true) {
    search(false);
    if (static_cast<int>(reached.size()) == tri.n_faces()) {
      break;
    }
    queue.assign(reached.begin(), reached.end());
    search(true);
  }
  d.order = reached;

  for (int e = 0; e < tri.n_edges(); ++e) {
    if (d.tree_edge[e]) {
      continue;
    }
    Generator gen;
    gen.edge = e;
    gen.halfedge = tri.edge_halfedge(e);
    gen.from_face = Triangulation::face(gen.halfedge);
    gen.to_face = Triangulation::face(tri.twin(gen.halfedge));
    d.generator_of_edge[e] = d.n_generators();
    d.generators.push_back(gen);
  }
  return d;
}

} // namespace circlepat
