#include "circlepat/forms.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "circlepat/error.hpp"

namespace circlepat {

Cplx penner_tilde(const Triangulation& tri, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != tri.n_edges() || b.size() != tri.n_edges()) {
    throw Error(ErrorKind::InvalidInput, "edge function has wrong length");
  }
  Cplx sum(0.0, 0.0);
  for (int f = 0; f < tri.n_faces(); ++f) {
    const int ij = tri.edge(3 * f);
    const int jk = tri.edge(3 * f + 1);
    const int ki = tri.edge(3 * f + 2);
    sum += a(ij) * (b(jk) - b(ki)) + a(jk) * (b(ki) - b(ij)) + a(ki) * (b(ij) - b(jk));
  }
  return -2.0 * sum;
}

Cplx omega_P(const Triangulation& tri, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  return penner_tilde(tri, lift(tri, x), lift(tri, y));
}

Mat2 cup_product_triangle(const std::array<Mat2, 3>& a, const std::array<Mat2, 3>& b) {
  return (a[0] * b[1] + a[1] * b[2] + a[2] * b[0] - a[0] * b[2] - a[1] * b[0] - a[2] * b[1]) / 6.0;
}

Mat2 cup_product_polygon(const std::vector<Mat2>& a, const std::vector<Mat2>& b, int fan_start) {
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != n) {
    throw Error(ErrorKind::InvalidInput, "polygon boundary values differ in length");
  }
  Mat2 total = Mat2::Zero();
  if (n < 3) {
    return total;
  }
  fan_start = ((fan_start % n) + n) % n;
  // Diagonal d_m runs from the fan vertex to the start of edge fan_start + m.
  Mat2 da = a[fan_start];
  Mat2 db = b[fan_start];
  for (int m = 1; m + 1 < n; ++m) {
    const int k = (fan_start + m) % n;
    const Mat2 na = da + a[k];
    const Mat2 nb = db + b[k];
    total += cup_product_triangle({da, a[k], Mat2(-na)}, {db, b[k], Mat2(-nb)});
    da = na;
    db = nb;
  }
  return total;
}

VertexDomain vertex_domain(const DevelopedPattern& P, int root) {
  const Triangulation& tri = P.triangulation();
  if (root < 0 || root >= tri.n_vertices()) {
    throw Error(ErrorKind::InvalidInput, "root vertex out of range");
  }
  VertexDomain D;
  D.root = root;
  D.stars.assign(tri.n_vertices(), {});
  D.corner_index.assign(tri.n_halfedges(), -1);
  D.tree_edge.assign(tri.n_edges(), false);

  std::vector<int> anchor(tri.n_vertices(), -1);
  std::vector<FaceCopy> anchor_copy(tri.n_vertices());
  anchor[root] = tri.canonical_halfedge(root);
  anchor_copy[root] = FaceCopy{Triangulation::face(anchor[root]), Mat2::Identity(), {}};
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    D.stars[u] = P.star(u, false, anchor[u], &anchor_copy[u]);
    for (int m = 0; m < static_cast<int>(D.stars[u].size()); ++m) {
      const StarCorner& c = D.stars[u][m];
      D.corner_index[c.halfedge] = m;
      const int w = tri.head(c.halfedge);
      if (anchor[w] == -1) {
        anchor[w] = tri.twin(c.halfedge);
        anchor_copy[w] = P.cross(c.copy, c.halfedge);
        D.tree_edge[tri.edge(c.halfedge)] = true;
        queue.push_back(w);
      }
    }
  }
  return D;
}

std::vector<Mat2> dual_cell_values(const VertexDomain& D, int v, const EdgeOneForm& alpha) {
  const auto& star = D.stars[v];
  const int r = static_cast<int>(star.size());
  int first = 0;
  for (int m = 1; m < r; ++m) {
    if (star[m].halfedge < star[first].halfedge) {
      first = m;
    }
  }
  std::vector<Mat2> out;
  out.reserve(r);
  for (int k = 0; k < r; ++k) {
    const StarCorner& c = star[(first + k) % r];
    out.push_back(adjoint(c.copy.transform, alpha[c.halfedge]));
  }
  return out;
}

Mat2 cup_product_cell(const VertexDomain& D, int v, const EdgeOneForm& a, const EdgeOneForm& b, int fan_start) {
  return cup_product_polygon(dual_cell_values(D, v, a), dual_cell_values(D, v, b), fan_start);
}

Cplx omega_cup(const DevelopedPattern& P, const EdgeOneForm& a, const EdgeOneForm& b) {
  const VertexDomain D = vertex_domain(P);
  Cplx sum(0.0, 0.0);
  for (int v = 0; v < P.triangulation().n_vertices(); ++v) {
    sum += cup_product_cell(D, v, a, b).trace();
  }
  return sum;
}

Cplx omega_cup(const DevelopedPattern& P, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  return omega_cup(P, alpha_form(x, P), alpha_form(y, P));
}

Cplx omega_G(const DevelopedPattern& P, const VertexDomain& D, const Cocycle& tau, const EdgeOneForm& b) {
  const Triangulation& tri = P.triangulation();
  Cplx sum(0.0, 0.0);
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (D.tree_edge[e]) {
      continue;
    }
    const int h = tri.edge_halfedge(e);
    const int t = tri.twin(h);
    const StarCorner& ch = D.stars[tri.tail(h)][D.corner_index[h]];
    const StarCorner& ct = D.stars[tri.tail(t)][D.corner_index[t]];
    // delta carries the copy of face(t) next to the h-side occurrence onto the t-side copy.
    const Word w = concat(ct.copy.word, inverse_word(concat(ch.copy.word, P.crossing_word(h))));
    sum += (tau.evaluate(w) * adjoint(ct.copy.transform, b[t])).trace();
  }
  return sum;
}

Cplx omega_G(const DevelopedPattern& P, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int root) {
  const VertexDomain D = vertex_domain(P, root);
  return omega_G(P, D, hol(x, P), alpha_form(y, P));
}

std::pair<Cplx, Cplx> trace_pair_identity(Cplx zi, Cplx zj, Cplx zk, Cplx zl) {
  if (zi == zj || zk == zl) {
    throw Error(ErrorKind::DegeneratePair, "edge generator needs distinct endpoints");
  }
  const Cplx lhs = (edge_generator(zi, zj) * edge_generator(zk, zl)).trace();
  const Cplx rhs = 0.5 - ((zi - zk) * (zj - zl)) / ((zi - zj) * (zk - zl));
  return {lhs, rhs};
}

namespace {

struct FieldData {
  Eigen::VectorXcd lift;
  EdgeOneForm alpha;
  Cocycle tau;
};

std::vector<FieldData> field_data(const DevelopedPattern& P, const Eigen::MatrixXcd& basis) {
  std::vector<FieldData> out;
  for (int k = 0; k < basis.cols(); ++k) {
    const Eigen::VectorXcd x = basis.col(k);
    EdgeOneForm a = alpha_form(x, P);
    Cocycle t = hol(a, P);
    out.push_back({lift(P.triangulation(), x), std::move(a), std::move(t)});
  }
  return out;
}

} // namespace

TheoremReport check_theorem(const DevelopedPattern& P, const TheoremOptions& options) {
  const Triangulation& tri = P.triangulation();
  TheoremReport R;
  R.tol = options.tol;
  R.complex_kernel = kernel_complex(P.cross_ratios(), options.kernel_tol);
  R.real_kernel = kernel_real(P.cross_ratios(), options.kernel_tol);
  const VertexDomain D = vertex_domain(P);

  const auto cx = field_data(P, R.complex_kernel.basis);
  const int n = static_cast<int>(cx.size());
  R.goldman.resize(n, n);
  R.cup.resize(n, n);
  R.half_penner.resize(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      R.goldman(p, q) = omega_G(P, D, cx[p].tau, cx[q].alpha);
      Cplx cup(0.0, 0.0);
      for (int v = 0; v < tri.n_vertices(); ++v) {
        cup += cup_product_cell(D, v, cx[p].alpha, cx[q].alpha).trace();
      }
      R.cup(p, q) = cup;
      R.half_penner(p, q) = 0.5 * penner_tilde(tri, cx[p].lift, cx[q].lift);
    }
  }
  if (n > 0) {
    R.max_discrepancy = std::max({(R.goldman - R.cup).cwiseAbs().maxCoeff(),
                                  (R.cup - R.half_penner).cwiseAbs().maxCoeff(),
                                  (R.goldman - R.half_penner).cwiseAbs().maxCoeff()});
  }

  const auto rx = field_data(P, R.real_kernel.basis);
  const int nr = static_cast<int>(rx.size());
  R.goldman_real.resize(nr, nr);
  R.half_penner_real.resize(nr, nr);
  for (int p = 0; p < nr; ++p) {
    for (int q = 0; q < nr; ++q) {
      R.goldman_real(p, q) = omega_G(P, D, rx[p].tau, rx[q].alpha);
      R.half_penner_real(p, q) = 0.5 * penner_tilde(tri, rx[p].lift, rx[q].lift);
    }
  }
  if (nr > 0) {
    R.max_imag_real = R.goldman_real.imag().cwiseAbs().maxCoeff();
    R.max_real_discrepancy = (R.goldman_real - R.half_penner_real).cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R.goldman_real.real());
    const Eigen::VectorXd s = svd.singularValues();
    R.real_gram_singular_values.assign(s.data(), s.data() + s.size());
    const double floor = options.rank_tol * std::max(1.0, s(0));
    R.real_gram_rank = static_cast<int>((s.array() > floor).count());
  }

  R.passed = R.max_discrepancy <= options.tol && R.max_real_discrepancy <= options.tol &&
             R.max_imag_real <= options.tol;
  if (!R.passed && options.throw_on_violation) {
    throw Error(ErrorKind::TheoremViolation,
                "forms disagree: max discrepancy " + format_value(std::max(R.max_discrepancy, R.max_real_discrepancy)) +
                    ", max imaginary part on real pairs " + format_value(R.max_imag_real));
  }
  return R;
}

} // namespace circlepat
