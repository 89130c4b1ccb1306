#include <cmath>
#include <map>
#include <numbers>

#include "circlepat/crossratio.hpp"
#include "circlepat/error.hpp"

namespace circlepat {

Pattern example_hex_torus() {
  // Faces (0, 1, w) and (1, 1 + w, w) of the equilateral lattice, all corners one vertex.
  // Lattice translations glue 0->1 to (1+w)->w, 1->w to w->1, w->0 to 1->(1+w).
  const std::vector<Face> faces{{0, 0, 0}, {0, 0, 0}};
  const std::vector<HalfedgePair> gluing{{0, 4}, {1, 5}, {2, 3}};
  auto tri = std::make_shared<const Triangulation>(build(faces, 1, gluing));
  const double third = std::numbers::pi / 3.0;
  CrossRatioSystem X(tri, std::vector<double>(3, 0.0), std::vector<double>(3, third));
  return {tri, std::move(X), {}, std::nullopt};
}

std::vector<Cplx> bolza_octagon_vertices() {
  // Regular octagon with interior angle pi/4: cosh(circumradius) = cot^2(pi/8) = 3 + 2 sqrt 2,
  // Euclidean radius tanh(circumradius/2) = 2^{-1/4}.
  const double radius = std::pow(2.0, -0.25);
  std::vector<Cplx> z(8);
  for (int k = 0; k < 8; ++k) {
    z[k] = std::polar(radius, k * std::numbers::pi / 4.0);
  }
  return z;
}

Mat2 bolza_side_pairing(int s) {
  // Translation along the axis through the midpoints of side s and its opposite side, by twice
  // the inradius d; cosh d = cot(pi/8) = 1 + sqrt 2.
  const double ch = 1.0 + std::sqrt(2.0);
  const double sh = std::sqrt(ch * ch - 1.0);
  const double phi = (s + 0.5) * std::numbers::pi / 4.0;
  Mat2 translate;
  translate << ch, sh, sh, ch;
  Mat2 rot;
  rot << std::polar(1.0, phi / 2.0), 0.0, 0.0, std::polar(1.0, -phi / 2.0);
  return rot * translate * rot.adjoint();
}

Pattern example_bolza() {
  // Faces (0, k, k+1), k = 1..6, over octagon corners; every corner is the single vertex 0.
  std::vector<Face> faces(6, Face{0, 0, 0});
  std::vector<std::array<int, 3>> corner(6);
  for (int k = 1; k <= 6; ++k) {
    corner[k - 1] = {0, k, k + 1};
  }
  auto side_of = [](int a, int b) {
    // Octagon side joining consecutive corners a -> b, or -1 for a diagonal.
    if ((a + 1) % 8 == b) {
      return a;
    }
    return -1;
  };

  std::map<std::pair<int, int>, int> diagonal;
  std::vector<int> side_halfedge(8, -1);
  std::vector<HalfedgePair> gluing;
  for (int f = 0; f < 6; ++f) {
    for (int c = 0; c < 3; ++c) {
      const int h = 3 * f + c;
      const int a = corner[f][c];
      const int b = corner[f][(c + 1) % 3];
      const int s = side_of(a, b);
      if (s >= 0) {
        side_halfedge[s] = h;
        continue;
      }
      const auto key = std::minmax(a, b);
      auto it = diagonal.find(key);
      if (it == diagonal.end()) {
        diagonal.emplace(key, h);
      } else {
        gluing.emplace_back(it->second, h);
      }
    }
  }
  for (int s = 0; s < 4; ++s) {
    gluing.emplace_back(side_halfedge[s], side_halfedge[s + 4]);
  }
  auto tri = std::make_shared<const Triangulation>(build(faces, 1, gluing));

  const std::vector<Cplx> z = bolza_octagon_vertices();
  auto position = [&](int h) { return z[corner[Triangulation::face(h)][h % 3]]; };

  Eigen::VectorXcd values(tri->n_edges());
  for (int e = 0; e < tri->n_edges(); ++e) {
    const int h = tri->edge_halfedge(e);
    const int t = tri->twin(h);
    const int f = Triangulation::face(h);
    const int s = side_of(corner[f][h % 3], corner[f][(h % 3 + 1) % 3]);
    // Apex of the opposite face, moved into the chart of face(h) for side edges.
    Cplx apex = position(Triangulation::prev(t));
    if (s >= 0) {
      apex = act(bolza_side_pairing(s), apex);
    }
    values(e) = cross_ratio(position(h), position(Triangulation::next(h)), position(Triangulation::prev(h)), apex);
  }
  // All corners lie on one circle, so diagonals carry angle 0 and sides pi/4 exactly.
  std::vector<double> u(tri->n_edges());
  std::vector<double> theta(tri->n_edges());
  std::vector<bool> cut(tri->n_edges(), false);
  for (int e = 0; e < tri->n_edges(); ++e) {
    const int h = tri->edge_halfedge(e);
    const int f = Triangulation::face(h);
    cut[e] = side_of(corner[f][h % 3], corner[f][(h % 3 + 1) % 3]) >= 0;
    u[e] = std::log(std::abs(values(e)));
    theta[e] = cut[e] ? std::numbers::pi / 4.0 : 0.0;
  }
  CrossRatioSystem X(tri, std::move(u), std::move(theta));
  const std::array<ProjPoint, 3> seed{proj(z[0]), proj(z[1]), proj(z[2])};
  return {tri, std::move(X), std::move(cut), seed};
}

Pattern example_octahedron() {
  // North 0, south 1, equator 2, 3, 4, 5; outward normals counterclockwise.
  const std::vector<Face> faces{{0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 2},
                                {1, 3, 2}, {1, 4, 3}, {1, 5, 4}, {1, 2, 5}};
  auto tri = std::make_shared<const Triangulation>(build(faces, 6));
  const int ne = tri->n_edges();
  CrossRatioSystem X(tri, std::vector<double>(ne, 0.0), std::vector<double>(ne, std::numbers::pi / 2.0));
  return {tri, std::move(X), {}, std::nullopt};
}

} // namespace circlepat
