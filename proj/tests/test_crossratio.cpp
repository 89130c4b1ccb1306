#include <cstring>
#include <numbers>

#include "doctest.h"

#include "circlepat/crossratio.hpp"
#include "circlepat/error.hpp"
#include "support.hpp"

using namespace circlepat;
using namespace test_support;

namespace {

CrossRatioSystem constant_system(const Pattern& p, Cplx value) {
  return CrossRatioSystem::from_values(p.tri, Eigen::VectorXcd::Constant(p.tri->n_edges(), value));
}

} // namespace

TEST_CASE("cross ratio of the equilateral quadruple") {
  const double s = std::sqrt(3.0) / 2.0;
  const Cplx x = cross_ratio(Cplx(0, 0), Cplx(1, 0), Cplx(0.5, s), Cplx(0.5, -s));
  CHECK(std::abs(x - std::polar(1.0, std::numbers::pi / 3.0)) < 1e-15);
}

TEST_CASE("cross ratio of four concyclic points is one") {
  const Cplx x = cross_ratio(Cplx(0, 0), Cplx(1, 0), Cplx(0.5, 0.5), Cplx(0.5, -0.5));
  CHECK(std::abs(x - 1.0) < 1e-15);
}

TEST_CASE("cross ratio matches the defining formula") {
  for (int n = 0; n < 200; ++n) {
    const Cplx zi = random_cplx(), zj = random_cplx(), zk = random_cplx(), zl = random_cplx();
    const Cplx expect = -((zk - zi) * (zl - zj)) / ((zi - zl) * (zj - zk));
    CHECK(std::abs(cross_ratio(zi, zj, zk, zl) - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("cross ratio is Moebius invariant") {
  for (int n = 0; n < 500; ++n) {
    const std::array<Cplx, 4> z{random_cplx(), random_cplx(), random_cplx(), random_cplx()};
    const Mat2 g = random_sl2(0.5);
    const Cplx before = cross_ratio(z[0], z[1], z[2], z[3]);
    const Cplx after = cross_ratio(act(g, proj(z[0])), act(g, proj(z[1])), act(g, proj(z[2])), act(g, proj(z[3])));
    CHECK(std::abs(before - after) < 1e-12 * std::max(1.0, std::abs(before)));
  }
}

TEST_CASE("cross ratio accepts the point at infinity") {
  const Cplx zj(0.3, 0.1), zk(-0.2, 0.7), zl(1.1, -0.4);
  // Limit of the formula as z_i grows without bound.
  const Cplx expect = (zl - zj) / (zj - zk);
  CHECK(std::abs(cross_ratio(proj_infinity(), proj(zj), proj(zk), proj(zl)) - expect) < 1e-14);
  const Cplx far = cross_ratio(Cplx(1e7, 3e6), zj, zk, zl);
  CHECK(std::abs(far - expect) < 1e-6);
}

TEST_CASE("degenerate quadruple is rejected") {
  try {
    cross_ratio(Cplx(0, 0), Cplx(1, 0), Cplx(0, 0), Cplx(0, 0));
    FAIL("expected DegenerateQuadruple");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateQuadruple);
  }
}

TEST_CASE("fourth point inverts the cross ratio") {
  for (int n = 0; n < 200; ++n) {
    const Cplx zi = random_cplx(), zj = random_cplx(), zk = random_cplx();
    const Cplx x = random_cplx(2.0);
    const ProjPoint zl = fourth_point(x, proj(zi), proj(zj), proj(zk));
    CHECK(std::abs(cross_ratio(proj(zi), proj(zj), proj(zk), zl) - x) < 1e-9 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("product residual examples") {
  const auto hex = example_hex_torus();
  CHECK(std::abs(product_residual(hex.X, 0)) < 1e-14);
  CHECK(std::abs(product_residual(constant_system(hex, 1.0), 0)) == 0.0);
  const auto oct = example_octahedron();
  const CrossRatioSystem two = constant_system(oct, 2.0);
  for (int v = 0; v < 6; ++v) {
    CHECK(std::abs(product_residual(two, v) - 15.0) < 1e-12);
  }
}

TEST_CASE("sum residual examples") {
  const auto hex = example_hex_torus();
  CHECK(std::abs(sum_residual(hex.X, 0)) < 1e-14);
  CHECK(std::abs(sum_residual(constant_system(hex, 1.0), 0) - 6.0) < 1e-14);
  const auto oct = example_octahedron();
  CHECK(std::abs(sum_residual(constant_system(oct, 1.0), 2) - 4.0) < 1e-14);
  const auto bolza = example_bolza();
  CHECK(std::abs(sum_residual(constant_system(bolza, 1.0), 0) - 18.0) < 1e-13);
}

TEST_CASE("sum residual under a change of starting corner") {
  // With the link product equal to 1, starting at corner s divides the sum by P_s.
  const auto hex = example_hex_torus();
  for (int n = 0; n < 200; ++n) {
    Eigen::VectorXcd v(3);
    v(0) = std::polar(std::exp(uniform(-0.5, 0.5)), uniform(0.1, 3.0));
    v(1) = std::polar(std::exp(uniform(-0.5, 0.5)), uniform(0.1, 3.0));
    v(2) = 1.0 / (v(0) * v(1));
    const CrossRatioSystem X = CrossRatioSystem::from_values(hex.tri, v);
    REQUIRE(std::abs(product_residual(X, 0)) < 1e-12);
    const auto P = link_partial_products(X, 0);
    const Cplx s0 = sum_residual(X, 0, 0);
    for (int s = 1; s < 6; ++s) {
      CHECK(std::abs(sum_residual(X, 0, s) * P[s - 1] - s0) < 1e-12);
    }
  }
  for (int s = 0; s < 6; ++s) {
    CHECK(std::abs(sum_residual(hex.X, 0, s)) < 1e-14);
  }
}

TEST_CASE("partial products follow the clockwise link") {
  const auto bolza = example_bolza();
  const auto P = link_partial_products(bolza.X, 0);
  const VertexLink link = vertex_link(*bolza.tri, 0);
  REQUIRE(P.size() == 18);
  Cplx acc(1.0, 0.0);
  for (int k = 0; k < 18; ++k) {
    acc *= bolza.X.value(bolza.tri->edge(link.corners[k]));
    CHECK(std::abs(P[k] - acc) < 1e-12);
  }
  CHECK(std::abs(P.back() - 1.0) < 1e-10);
}

TEST_CASE("hexagonal torus example") {
  const auto hex = example_hex_torus();
  CHECK(max_residual(hex.X) < 1e-14);
  for (int e = 0; e < 3; ++e) {
    CHECK(std::abs(std::abs(hex.X.value(e)) - 1.0) < 1e-15);
    CHECK(hex.X.theta()[e] == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("Bolza example") {
  const auto bolza = example_bolza();
  CHECK(max_residual(bolza.X) < 1e-10);
  double sum = 0.0;
  for (int h : vertex_link(*bolza.tri, 0).corners) {
    sum += bolza.X.theta()[bolza.tri->edge(h)];
  }
  CHECK(std::abs(sum - 2.0 * std::numbers::pi) < 1e-10);
  // All octagon corners lie on one circle, so every diagonal has coinciding circumcircles.
  for (int e = 0; e < 9; ++e) {
    const double th = bolza.X.theta()[e];
    if (bolza.cut[e]) {
      CHECK(th > 0.0);
      CHECK(th < std::numbers::pi);
    } else {
      CHECK(th == 0.0);
    }
  }
}

TEST_CASE("Bolza cross ratios agree with the octagon layout") {
  // Each diagonal 0-(k+1) separates faces (0,k,k+1) and (0,k+1,k+2).
  const auto bolza = example_bolza();
  const auto z = bolza_octagon_vertices();
  const DevelopedPattern P = develop(bolza.X, fundamental_domain(*bolza.tri, 0, bolza.cut),
                                     DevelopOptions{bolza.seed, true, 1e-6});
  int checked = 0;
  for (int e = 0; e < 9; ++e) {
    if (bolza.cut[e]) {
      continue;
    }
    const int h = bolza.tri->edge_halfedge(e);
    const Cplx zi = P.affine_position(h);
    const Cplx zj = P.affine_position(Triangulation::next(h));
    const Cplx zk = P.affine_position(Triangulation::prev(h));
    const Cplx zl = P.affine_position(Triangulation::prev(bolza.tri->twin(h)));
    for (Cplx w : {zi, zj, zk, zl}) {
      bool on_octagon = false;
      for (Cplx c : z) {
        on_octagon = on_octagon || std::abs(c - w) < 1e-12;
      }
      CHECK(on_octagon);
    }
    CHECK(std::abs(cross_ratio(zi, zj, zk, zl) - bolza.X.value(e)) < 1e-12);
    ++checked;
  }
  CHECK(checked == 5);
}

TEST_CASE("Delaunay check on the examples") {
  const auto hex = example_hex_torus();
  const DelaunayReport rh = is_delaunay(*hex.tri, hex.X.theta());
  CHECK(rh.ok());
  CHECK(rh.contractible_cycles == 0);
  CHECK(rh.max_cycle_len == 12);

  const auto bolza = example_bolza();
  CHECK(is_delaunay(*bolza.tri, bolza.X.theta()).ok());
  const auto oct = example_octahedron();
  const DelaunayReport ro = is_delaunay(*oct.tri, oct.X.theta());
  CHECK(ro.ok());
  CHECK(ro.contractible_cycles > 0);
}

TEST_CASE("Delaunay check failures") {
  const auto hex = example_hex_torus();
  const DelaunayReport zero = is_delaunay(*hex.tri, {0.0, 0.0, 0.0});
  CHECK_FALSE(zero.ok());
  CHECK_FALSE(zero.vertex_sums_ok);
  REQUIRE(zero.vertex_violations.size() == 1);
  CHECK(zero.vertex_violations[0].angle_sum == 0.0);

  const DelaunayReport range = is_delaunay(*hex.tri, {std::numbers::pi, 0.0, 0.0});
  CHECK_FALSE(range.range_ok);
  CHECK(range.range_violations == std::vector<int>{0});

  CHECK(range.cycles_ok);
}

TEST_CASE("Delaunay check finds a short dual cycle around a face") {
  // Face (N, E1, E2) carries 0.7 pi on its edges; the dual cycle around it encloses three vertices
  // and sums to 6 pi - 2 * 2.1 pi = 1.8 pi while every vertex sum stays 2 pi.
  const auto oct = example_octahedron();
  const Triangulation& t = *oct.tri;
  auto edge_between = [&](int u, int v) {
    for (int h = 0; h < t.n_halfedges(); ++h) {
      if (t.tail(h) == u && t.head(h) == v) {
        return t.edge(h);
      }
    }
    FAIL("not adjacent");
    return -1;
  };
  auto antipode = [&](int v) {
    for (int w = 0; w < 6; ++w) {
      bool adjacent = w == v;
      for (int h = 0; h < t.n_halfedges(); ++h) {
        adjacent = adjacent || (t.tail(h) == v && t.head(h) == w);
      }
      if (!adjacent) {
        return w;
      }
    }
    return -1;
  };
  const int n = t.faces()[0][0], e1 = t.faces()[0][1], e2 = t.faces()[0][2];
  const int s = antipode(n), e3 = antipode(e1), e4 = antipode(e2);
  const double pi = std::numbers::pi;
  std::vector<double> theta(12, -1.0);
  auto set = [&](int u, int v, double a) { theta[edge_between(u, v)] = a * pi; };
  set(n, e1, 0.7);
  set(n, e2, 0.7);
  set(e1, e2, 0.7);
  set(n, e3, 0.3);
  set(n, e4, 0.3);
  set(e1, e4, 0.3);
  set(e1, s, 0.3);
  set(e2, e3, 0.3);
  set(e2, s, 0.3);
  set(e3, s, 0.7);
  set(e4, s, 0.7);
  set(e3, e4, 0.7);
  for (double a : theta) {
    REQUIRE(a >= 0.0);
  }
  const DelaunayReport r = is_delaunay(t, theta);
  CHECK(r.range_ok);
  CHECK(r.vertex_sums_ok);
  CHECK_FALSE(r.cycles_ok);
  REQUIRE_FALSE(r.cycle_violations.empty());
  bool found = false;
  for (const auto& c : r.cycle_violations) {
    found = found || (c.edges.size() == 6 && std::abs(c.angle_sum - 1.8 * pi) < 1e-12);
  }
  CHECK(found);
  CHECK(is_delaunay(t, theta, 5).cycles_ok);
}

TEST_CASE("dual cycle classification on the octahedron") {
  // The four faces around a vertex form a contractible cycle enclosing exactly that vertex.
  const auto oct = example_octahedron();
  const Triangulation& t = *oct.tri;
  const VertexLink link = vertex_link(t, 0);
  std::vector<int> faces;
  std::vector<int> crossed;
  for (int h : link.corners) {
    faces.push_back(Triangulation::face(h));
    crossed.push_back(Triangulation::prev(h));
  }
  const DualCycleTopology topo = classify_dual_cycle(t, faces, crossed);
  CHECK(topo.contractible);
  CHECK(topo.separating);
  CHECK(topo.enclosed_vertices == 1);
}

TEST_CASE("solver leaves an exact pattern untouched") {
  const auto hex = example_hex_torus();
  const SolveResult r = solve_pattern(hex.tri, hex.X.theta(), hex.X.log_mag());
  CHECK(r.iterations == 0);
  CHECK(r.residual < 1e-14);
}

TEST_CASE("solver recovers from magnitude noise") {
  for (const Pattern& p : {example_hex_torus(), example_bolza(), example_octahedron()}) {
    std::vector<double> u = p.X.log_mag();
    for (double& v : u) {
      v += std::log1p(1e-2 * uniform());
    }
    const std::vector<double> theta = p.X.theta();
    const SolveResult r = solve_pattern(p.tri, theta, u);
    CHECK(r.residual < 1e-12);
    const CrossRatioSystem X(p.tri, r.log_mag, theta);
    CHECK(max_residual(X) < 1e-12);
    CHECK(std::memcmp(X.theta().data(), theta.data(), theta.size() * sizeof(double)) == 0);
    CHECK(r.residual_history.size() == static_cast<std::size_t>(r.iterations + 1));
  }
}

TEST_CASE("solver rejects angles violating the vertex condition") {
  const auto hex = example_hex_torus();
  try {
    solve_pattern(hex.tri, {0.5, 0.5, 0.5}, {0.0, 0.0, 0.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::NoConvergence));
  }
}

TEST_CASE("solver reports non-convergence") {
  const auto bolza = example_bolza();
  std::vector<double> u = bolza.X.log_mag();
  for (double& v : u) {
    v += 0.3 * uniform();
  }
  SolveOptions o;
  o.max_iter = 1;
  o.tol = 1e-15;
  try {
    solve_pattern(bolza.tri, bolza.X.theta(), u, o);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("cross-ratio system storage") {
  const auto hex = example_hex_torus();
  const Eigen::VectorXcd v = hex.X.values();
  const CrossRatioSystem again = CrossRatioSystem::from_values(hex.tri, v);
  for (int e = 0; e < 3; ++e) {
    CHECK(std::abs(again.value(e) - v(e)) < 1e-15);
  }
  const Eigen::VectorXcd x = random_vector(3);
  const CrossRatioSystem d = hex.X.deformed(x, 0.1);
  for (int e = 0; e < 3; ++e) {
    CHECK(std::abs(d.value(e) - v(e) * std::exp(0.1 * x(e))) < 1e-14);
  }
  try {
    CrossRatioSystem(hex.tri, {0.0}, {0.0});
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
}
