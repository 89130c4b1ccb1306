#pragma once

// The Penner form, the cellular cup-product form and Goldman's form on tangent vectors, and the
// comparator for omega_G = omega = omega_P / 2.

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "circlepat/holonomy.hpp"
#include "circlepat/tangent.hpp"

namespace circlepat {

// -2 sum over faces ijk of a_ij (b_jk - b_ki) + a_jk (b_ki - b_ij) + a_ki (b_ij - b_jk).
Cplx penner_tilde(const Triangulation& tri, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
// penner_tilde of minimum-norm lifts. Throws NotInW.
Cplx omega_P(const Triangulation& tri, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

// Triangle with oriented boundary edges e1, e2, e3.
Mat2 cup_product_triangle(const std::array<Mat2, 3>& a, const std::array<Mat2, 3>& b);
// Polygon given by its boundary values in order (each list sums to zero), fanned from the start
// vertex of edge `fan_start`.
Mat2 cup_product_polygon(const std::vector<Mat2>& a, const std::vector<Mat2>& b, int fan_start = 0);

// Dual cells of all vertices laid out in the universal cover as a tree of stars: a vertex
// spanning tree rooted at `root`, each child star attached across its tree edge.
struct VertexDomain {
  int root = 0;
  std::vector<std::vector<StarCorner>> stars; // counterclockwise
  std::vector<int> corner_index;              // per half-edge, position in the star of its tail
  std::vector<bool> tree_edge;                // per edge
};

VertexDomain vertex_domain(const DevelopedPattern& P, int root = 0);

// Boundary values of the dual cell of v, rotated to start at the lowest half-edge id.
std::vector<Mat2> dual_cell_values(const VertexDomain& D, int v, const EdgeOneForm& alpha);
Mat2 cup_product_cell(const VertexDomain& D, int v, const EdgeOneForm& a, const EdgeOneForm& b, int fan_start = 0);

Cplx omega_cup(const DevelopedPattern& P, const EdgeOneForm& a, const EdgeOneForm& b);
Cplx omega_cup(const DevelopedPattern& P, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

// Sum over the paired boundary edges of the vertex domain of tr(tau_delta . alpha_b(edge)).
Cplx omega_G(const DevelopedPattern& P, const VertexDomain& D, const Cocycle& tau, const EdgeOneForm& b);
Cplx omega_G(const DevelopedPattern& P, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int root = 0);

// (tr(N(zi, zj) N(zk, zl)), 1/2 - (zi - zk)(zj - zl) / ((zi - zj)(zk - zl))), where N is the
// edge generator. Throws DegeneratePair.
std::pair<Cplx, Cplx> trace_pair_identity(Cplx zi, Cplx zj, Cplx zk, Cplx zl);

struct TheoremOptions {
  double tol = 1e-9;
  double kernel_tol = 1e-9;
  double rank_tol = 1e-9;
  bool throw_on_violation = false;
};

struct TheoremReport {
  KernelBasis complex_kernel;
  KernelBasis real_kernel;
  Eigen::MatrixXcd goldman;     // omega_G on the complex basis
  Eigen::MatrixXcd cup;         // omega
  Eigen::MatrixXcd half_penner; // omega_P / 2
  double max_discrepancy = 0.0;
  Eigen::MatrixXcd goldman_real; // omega_G on the real basis
  Eigen::MatrixXcd half_penner_real;
  double max_real_discrepancy = 0.0;
  double max_imag_real = 0.0;
  int real_gram_rank = 0;
  std::vector<double> real_gram_singular_values;
  double tol = 0.0;
  bool passed = false;
};

// Throws TheoremViolation when requested and a pair exceeds tol.
TheoremReport check_theorem(const DevelopedPattern& P, const TheoremOptions& options = {});

} // namespace circlepat
