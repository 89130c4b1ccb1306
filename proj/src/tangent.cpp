#include "circlepat/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "circlepat/error.hpp"

namespace circlepat {

namespace {

// Coefficient of x_e in the partial-sum equation: tail sums of the partial products.
std::vector<Cplx> tail_sums(const std::vector<Cplx>& partial) {
  std::vector<Cplx> out(partial.size());
  Cplx acc(0.0, 0.0);
  for (int m = static_cast<int>(partial.size()) - 1; m >= 0; --m) {
    acc += partial[m];
    out[m] = acc;
  }
  return out;
}

void require_pattern(const CrossRatioSystem& X) {
  const double res = max_residual(X);
  if (res > 1e-10) {
    throw Error(ErrorKind::InvalidInput, "cross ratios do not satisfy the vertex equations (residual " +
                                             format_value(res) + ")");
  }
}

KernelBasis null_space(const Eigen::MatrixXcd& A, double tol, bool real) {
  KernelBasis out;
  out.tol = tol;
  out.real = real;
  const int n = static_cast<int>(A.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double threshold = tol * smax;
  int rank = 0;
  while (rank < s.size() && s(rank) > threshold && smax > 0.0) {
    ++rank;
  }
  // Smallest kept and largest dropped singular value must be separated by 10x from the threshold.
  if (rank > 0 && s(rank - 1) < 10.0 * threshold) {
    out.ill_conditioned = true;
  }
  if (rank < s.size() && s(rank) > 0.1 * threshold) {
    out.ill_conditioned = true;
  }
  out.basis = svd.matrixV().rightCols(n - rank);
  return out;
}

} // namespace

std::vector<LinearizedResidual> linearized_residuals(const CrossRatioSystem& X, const Eigen::VectorXcd& x) {
  const Triangulation& tri = X.triangulation();
  if (x.size() != tri.n_edges()) {
    throw Error(ErrorKind::InvalidInput, "tangent vector has wrong length");
  }
  std::vector<LinearizedResidual> out(tri.n_vertices());
  for (int i = 0; i < tri.n_vertices(); ++i) {
    const VertexLink link = vertex_link(tri, i);
    const auto partial = link_partial_products(X, i);
    Cplx running(0.0, 0.0);
    for (int m = 0; m < link.degree(); ++m) {
      const Cplx xe = x(tri.edge(link.corners[m]));
      out[i].sum += xe;
      running += xe;
      out[i].partial += running * partial[m];
    }
  }
  return out;
}

double max_linearized_residual(const CrossRatioSystem& X, const Eigen::VectorXcd& x) {
  double worst = 0.0;
  for (const auto& r : linearized_residuals(X, x)) {
    worst = std::max({worst, std::abs(r.sum), std::abs(r.partial)});
  }
  return worst;
}

Eigen::MatrixXcd constraint_matrix_complex(const CrossRatioSystem& X) {
  const Triangulation& tri = X.triangulation();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * tri.n_vertices(), tri.n_edges());
  for (int i = 0; i < tri.n_vertices(); ++i) {
    const VertexLink link = vertex_link(tri, i);
    const auto tails = tail_sums(link_partial_products(X, i));
    for (int m = 0; m < link.degree(); ++m) {
      const int e = tri.edge(link.corners[m]);
      A(2 * i, e) += 1.0;
      A(2 * i + 1, e) += tails[m];
    }
  }
  return A;
}

Eigen::MatrixXd constraint_matrix_real(const CrossRatioSystem& X) {
  const Eigen::MatrixXcd C = constraint_matrix_complex(X);
  const int n = X.triangulation().n_vertices();
  Eigen::MatrixXd A(3 * n, C.cols());
  for (int i = 0; i < n; ++i) {
    A.row(3 * i) = C.row(2 * i).real();
    A.row(3 * i + 1) = C.row(2 * i + 1).real();
    A.row(3 * i + 2) = C.row(2 * i + 1).imag();
  }
  return A;
}

KernelBasis kernel_complex(const CrossRatioSystem& X, double tol) {
  require_pattern(X);
  return null_space(constraint_matrix_complex(X), tol, false);
}

KernelBasis kernel_real(const CrossRatioSystem& X, double tol) {
  require_pattern(X);
  const Eigen::MatrixXcd A = constraint_matrix_real(X).cast<Cplx>();
  KernelBasis out = null_space(A, tol, true);
  // The SVD of a real matrix yields real singular vectors up to a unit phase per column.
  for (int c = 0; c < out.dim(); ++c) {
    Eigen::Index k = 0;
    out.basis.col(c).cwiseAbs().maxCoeff(&k);
    const Cplx phase = out.basis(k, c) / std::abs(out.basis(k, c));
    out.basis.col(c) /= phase;
    out.basis.col(c) = out.basis.col(c).real().cast<Cplx>();
    out.basis.col(c).normalize();
  }
  return out;
}

Eigen::MatrixXd h_matrix(const Triangulation& tri) {
  const int ne = tri.n_edges();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(ne, ne);
  for (int e = 0; e < ne; ++e) {
    const int h = tri.edge_halfedge(e);
    const int t = tri.twin(h);
    H(e, tri.edge(Triangulation::prev(h))) += 1.0;
    H(e, tri.edge(Triangulation::next(t))) -= 1.0;
    H(e, tri.edge(Triangulation::prev(t))) += 1.0;
    H(e, tri.edge(Triangulation::next(h))) -= 1.0;
  }
  return H;
}

Eigen::VectorXcd apply_h(const Triangulation& tri, const Eigen::VectorXcd& a) {
  if (a.size() != tri.n_edges()) {
    throw Error(ErrorKind::InvalidInput, "edge function has wrong length");
  }
  Eigen::VectorXcd x(tri.n_edges());
  for (int e = 0; e < tri.n_edges(); ++e) {
    const int h = tri.edge_halfedge(e);
    const int t = tri.twin(h);
    x(e) = a(tri.edge(Triangulation::prev(h))) - a(tri.edge(Triangulation::next(t))) +
           a(tri.edge(Triangulation::prev(t))) - a(tri.edge(Triangulation::next(h)));
  }
  return x;
}

double max_sum_residual(const Triangulation& tri, const Eigen::VectorXcd& x) {
  std::vector<Cplx> sums(tri.n_vertices(), Cplx(0.0, 0.0));
  for (int h = 0; h < tri.n_halfedges(); ++h) {
    sums[tri.tail(h)] += x(tri.edge(h));
  }
  double worst = 0.0;
  for (const Cplx& s : sums) {
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

Eigen::VectorXcd lift(const Triangulation& tri, const Eigen::VectorXcd& x) {
  if (x.size() != tri.n_edges()) {
    throw Error(ErrorKind::InvalidInput, "tangent vector has wrong length");
  }
  const double res = max_sum_residual(tri, x);
  if (res > 1e-10 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::NotInW, "link sums of x do not vanish (residual " + format_value(res) + ")");
  }
  const Eigen::MatrixXcd H = h_matrix(tri).cast<Cplx>();
  return H.completeOrthogonalDecomposition().solve(x);
}

Eigen::VectorXcd vertex_move_field(const DevelopedPattern& P, int i) {
  const Triangulation& tri = P.triangulation();
  if (i < 0 || i >= tri.n_vertices()) {
    throw Error(ErrorKind::InvalidInput, "vertex index out of range");
  }
  const auto star = P.star(i, true);
  const int r = static_cast<int>(star.size());
  std::vector<Cplx> zj(r);
  Cplx zi(0.0, 0.0);
  for (int m = 0; m < r; ++m) {
    const Mat2& G = star[m].copy.transform;
    const int h = star[m].halfedge;
    zi = act(G, P.affine_position(h));
    zj[m] = act(G, P.affine_position(Triangulation::next(h)));
  }
  double scale = std::abs(zi);
  for (const Cplx& z : zj) {
    scale = std::max(scale, std::abs(z));
  }
  const double eps = 1e-12 * std::max(1.0, scale);
  for (int m = 0; m < r; ++m) {
    if (std::abs(zj[m] - zi) < eps) {
      throw Error(ErrorKind::DegenerateLink, "neighbor of vertex " + std::to_string(i) + " coincides with it");
    }
  }
  if (std::abs(zj[0] - zj[r - 1]) < eps) {
    throw Error(ErrorKind::DegenerateLink, "first and last link vertices of " + std::to_string(i) + " coincide");
  }
  const Cplx c = (zj[r - 1] - zi) * (zj[0] - zi) / (zj[0] - zj[r - 1]);

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(tri.n_edges());
  for (int m = 0; m < r; ++m) {
    const int mp = (m + 1) % r;
    const int mm = (m + r - 1) % r;
    x(tri.edge(star[m].halfedge)) += c * (1.0 / (zj[mm] - zi) - 1.0 / (zj[mp] - zi));
    x(tri.edge(Triangulation::next(star[mp].halfedge))) += c * (1.0 / (zj[mp] - zi) - 1.0 / (zj[m] - zi));
  }
  return x;
}

Eigen::VectorXcd vertex_move_lift(const CrossRatioSystem& X, int i) {
  const Triangulation& tri = X.triangulation();
  if (tri.has_loops()) {
    throw Error(ErrorKind::InvalidInput, "the vertex-move lift needs a loop-free triangulation");
  }
  const VertexLink link = vertex_link(tri, i);
  const auto partial = link_partial_products(X, i);
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(tri.n_edges());
  Cplx acc(0.0, 0.0);
  for (int m = 0; m < link.degree(); ++m) {
    a(tri.edge(link.corners[m])) = -acc;
    acc += partial[m];
  }
  return a;
}

RigidityReport rigidity_check(const DevelopedPattern& P, double tol) {
  const Triangulation& tri = P.triangulation();
  const int n = tri.n_vertices();
  RigidityReport out;
  out.n_fields = 2 * n;
  for (int v = 0; v < n; ++v) {
    if (tri.degree(v) < 3) {
      out.degenerate = true;
      out.reason = "vertex " + std::to_string(v) + " has degree " + std::to_string(tri.degree(v));
      return out;
    }
  }
  Eigen::MatrixXd B(tri.n_edges(), 2 * n);
  for (int v = 0; v < n; ++v) {
    const Eigen::VectorXcd x = vertex_move_field(P, v);
    B.col(2 * v) = x.real();
    B.col(2 * v + 1) = x.imag();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const Eigen::VectorXd s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() > 0 ? s(0) : 0.0;
  // Fields are O(1) in the developed chart, so the threshold never drops below tol.
  const double floor = tol * std::max(1.0, smax);
  out.rank = 0;
  while (out.rank < s.size() && s(out.rank) > floor) {
    ++out.rank;
  }
  out.rigid = out.rank == 2 * n;
  if (out.rigid) {
    out.implied_real_dim = tri.n_edges() - 3 * n;
  }
  try {
    out.measured_real_dim = kernel_real(P.cross_ratios(), tol).dim();
  } catch (const Error&) {
    out.measured_real_dim = -1;
  }
  return out;
}

} // namespace circlepat
