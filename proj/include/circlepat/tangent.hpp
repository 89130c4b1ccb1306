#pragma once

// Linearized cross-ratio equations, tangent spaces, the lift map h and vertex-move fields.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "circlepat/crossratio.hpp"
#include "circlepat/holonomy.hpp"

namespace circlepat {

struct LinearizedResidual {
  Cplx sum;        // sum over the link of x
  Cplx partial;    // x_1 X_1 + (x_1 + x_2) X_1 X_2 + ...
};

std::vector<LinearizedResidual> linearized_residuals(const CrossRatioSystem& X, const Eigen::VectorXcd& x);
double max_linearized_residual(const CrossRatioSystem& X, const Eigen::VectorXcd& x);

// Rows (sum, partial) per vertex acting on C^E.
Eigen::MatrixXcd constraint_matrix_complex(const CrossRatioSystem& X);
// Rows (sum, Re partial, Im partial) per vertex acting on R^E.
Eigen::MatrixXd constraint_matrix_real(const CrossRatioSystem& X);

struct KernelBasis {
  Eigen::MatrixXcd basis;             // orthonormal columns
  std::vector<double> singular_values; // full spectrum, descending
  double tol = 1e-9;                   // relative to the largest singular value
  bool real = false;
  bool ill_conditioned = false;        // gap around the threshold under 10x
  int dim() const { return static_cast<int>(basis.cols()); }
};

// Require max_residual(X) <= 1e-10 (InvalidInput otherwise).
KernelBasis kernel_complex(const CrossRatioSystem& X, double tol = 1e-9);
KernelBasis kernel_real(const CrossRatioSystem& X, double tol = 1e-9);

// h(a)_e = a_ki - a_il + a_lj - a_jk over the two faces at e, as an integer E x E matrix.
Eigen::MatrixXd h_matrix(const Triangulation& tri);
Eigen::VectorXcd apply_h(const Triangulation& tri, const Eigen::VectorXcd& a);
// Sum-over-link part of the linearized equations, max over vertices.
double max_sum_residual(const Triangulation& tri, const Eigen::VectorXcd& x);
// Minimum-norm a with h(a) = x. Throws NotInW.
Eigen::VectorXcd lift(const Triangulation& tri, const Eigen::VectorXcd& x);

// Infinitesimal motion of vertex i alone, read off the developed star. Throws DegenerateLink.
Eigen::VectorXcd vertex_move_field(const DevelopedPattern& P, int i);
// Its lift a^(i): spoke i j_m carries -(P_1 + ... + P_{m-1}). Loop-free triangulations only.
Eigen::VectorXcd vertex_move_lift(const CrossRatioSystem& X, int i);

struct RigidityReport {
  bool degenerate = false;        // some vertex of degree < 3; no claim is made
  std::string reason;
  int n_fields = 0;               // 2 |V|
  int rank = 0;
  std::vector<double> singular_values;
  bool rigid = false;             // the real and imaginary parts are independent
  int implied_real_dim = -1;      // |E| - 3|V| when rigid
  int measured_real_dim = -1;
};

RigidityReport rigidity_check(const DevelopedPattern& P, double tol = 1e-9);

} // namespace circlepat
