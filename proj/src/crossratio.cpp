#include "circlepat/crossratio.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <numbers>
#include <set>
#include <string>

#include "circlepat/error.hpp"

namespace circlepat {

CrossRatioSystem::CrossRatioSystem(TriangulationPtr tri, std::vector<double> log_mag, std::vector<double> theta)
    : tri_(std::move(tri)), log_mag_(std::move(log_mag)), theta_(std::move(theta)) {
  if (!tri_) {
    throw Error(ErrorKind::InvalidInput, "cross ratio system without triangulation");
  }
  if (static_cast<int>(log_mag_.size()) != tri_->n_edges() || static_cast<int>(theta_.size()) != tri_->n_edges()) {
    throw Error(ErrorKind::InvalidInput, "per-edge arrays must have one entry per edge (" +
                                             std::to_string(tri_->n_edges()) + ")");
  }
  for (int e = 0; e < n_edges(); ++e) {
    if (!std::isfinite(log_mag_[e]) || !std::isfinite(theta_[e])) {
      throw Error(ErrorKind::InvalidInput, "non-finite cross ratio on edge " + std::to_string(e));
    }
  }
}

CrossRatioSystem CrossRatioSystem::from_values(TriangulationPtr tri, const Eigen::VectorXcd& values) {
  std::vector<double> u(values.size());
  std::vector<double> th(values.size());
  for (Eigen::Index e = 0; e < values.size(); ++e) {
    if (std::abs(values(e)) == 0.0 || !std::isfinite(std::abs(values(e)))) {
      throw Error(ErrorKind::InvalidInput, "cross ratio must be finite and nonzero");
    }
    u[e] = std::log(std::abs(values(e)));
    double a = std::arg(values(e));
    if (a < 0.0) {
      a += 2.0 * std::numbers::pi;
    }
    // Round-off can push an exact zero angle to just below 2 pi.
    if (2.0 * std::numbers::pi - a < 1e-14 || a == 0.0) {
      a = 0.0;
    }
    th[e] = a;
  }
  return CrossRatioSystem(std::move(tri), std::move(u), std::move(th));
}

Cplx CrossRatioSystem::value(int e) const { return std::polar(std::exp(log_mag_[e]), theta_[e]); }

Eigen::VectorXcd CrossRatioSystem::values() const {
  Eigen::VectorXcd out(n_edges());
  for (int e = 0; e < n_edges(); ++e) {
    out(e) = value(e);
  }
  return out;
}

CrossRatioSystem CrossRatioSystem::deformed(const Eigen::VectorXcd& x, double t) const {
  if (x.size() != n_edges()) {
    throw Error(ErrorKind::InvalidInput, "tangent vector size mismatch");
  }
  std::vector<double> u = log_mag_;
  std::vector<double> th = theta_;
  for (int e = 0; e < n_edges(); ++e) {
    u[e] += t * x(e).real();
    th[e] += t * x(e).imag();
  }
  return CrossRatioSystem(tri_, std::move(u), std::move(th));
}

std::vector<Cplx> link_partial_products(const CrossRatioSystem& X, int i) {
  const Triangulation& tri = X.triangulation();
  const VertexLink link = vertex_link(tri, i);
  std::vector<Cplx> partial;
  partial.reserve(link.degree());
  Cplx p(1.0, 0.0);
  for (int h : link.corners) {
    p *= X.value(tri.edge(h));
    partial.push_back(p);
  }
  return partial;
}

Cplx product_residual(const CrossRatioSystem& X, int i) {
  const auto partial = link_partial_products(X, i);
  return partial.back() - 1.0;
}

Cplx sum_residual(const CrossRatioSystem& X, int i, int start) {
  const Triangulation& tri = X.triangulation();
  const VertexLink link = vertex_link(tri, i);
  const int r = link.degree();
  start = ((start % r) + r) % r;
  Cplx p(1.0, 0.0);
  Cplx s(0.0, 0.0);
  for (int m = 0; m < r; ++m) {
    p *= X.value(tri.edge(link.corners[(start + m) % r]));
    s += p;
  }
  return s;
}

double max_residual(const CrossRatioSystem& X) {
  double worst = 0.0;
  for (int i = 0; i < X.triangulation().n_vertices(); ++i) {
    worst = std::max({worst, std::abs(product_residual(X, i)), std::abs(sum_residual(X, i))});
  }
  return worst;
}

DualCycleTopology classify_dual_cycle(const Triangulation& tri, const std::vector<int>& faces,
                                      const std::vector<int>& crossed_halfedges) {
  const int len = static_cast<int>(faces.size());
  std::vector<bool> crossed(tri.n_edges(), false);
  std::vector<bool> on_cycle(tri.n_faces(), false);
  for (int h : crossed_halfedges) {
    crossed[tri.edge(h)] = true;
  }
  for (int f : faces) {
    on_cycle[f] = true;
  }

  // Each cycle face cuts off one corner; it lies right of the path when the exit half-edge
  // follows the entry half-edge counterclockwise.
  std::vector<int> left;
  std::vector<int> right;
  for (int m = 0; m < len; ++m) {
    const int entry = tri.twin(crossed_halfedges[(m + len - 1) % len]);
    const int exit = crossed_halfedges[m];
    const int third = 3 * Triangulation::face(exit) + (3 - entry % 3 - exit % 3);
    if (Triangulation::next(entry) == exit) {
      right.push_back(tri.head(entry));
      left.push_back(tri.tail(third));
      left.push_back(tri.head(third));
    } else {
      left.push_back(tri.tail(entry));
      right.push_back(tri.tail(third));
      right.push_back(tri.head(third));
    }
  }

  std::vector<int> parent(tri.n_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!crossed[e]) {
      const int h = tri.edge_halfedge(e);
      parent[find(tri.tail(h))] = find(tri.head(h));
    }
  }

  DualCycleTopology out;
  const int left_root = find(left.front());
  const int right_root = find(right.front());
  for (int v : left) {
    if (find(v) != left_root) {
      return out;
    }
  }
  for (int v : right) {
    if (find(v) != right_root) {
      return out;
    }
  }
  if (left_root == right_root) {
    return out;
  }
  out.separating = true;

  auto side_chi = [&](int root, int& n_vertices) {
    int nv = 0;
    int ne = 0;
    int nf = 0;
    for (int v = 0; v < tri.n_vertices(); ++v) {
      nv += (find(v) == root);
    }
    for (int e = 0; e < tri.n_edges(); ++e) {
      ne += (!crossed[e] && find(tri.tail(tri.edge_halfedge(e))) == root);
    }
    for (int f = 0; f < tri.n_faces(); ++f) {
      nf += (!on_cycle[f] && find(tri.faces()[f][0]) == root);
    }
    n_vertices = nv;
    return nv - ne + nf;
  };
  int nl = 0;
  int nr = 0;
  const bool left_disk = side_chi(left_root, nl) == 1;
  const bool right_disk = side_chi(right_root, nr) == 1;
  out.contractible = left_disk || right_disk;
  if (left_disk && right_disk) {
    out.enclosed_vertices = std::min(nl, nr);
  } else if (left_disk) {
    out.enclosed_vertices = nl;
  } else if (right_disk) {
    out.enclosed_vertices = nr;
  }
  return out;
}

DelaunayReport is_delaunay(const Triangulation& tri, const std::vector<double>& theta, int max_cycle_len) {
  if (static_cast<int>(theta.size()) != tri.n_edges()) {
    throw Error(ErrorKind::InvalidInput, "theta must have one entry per edge");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  DelaunayReport report;
  report.max_cycle_len = max_cycle_len;

  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!(theta[e] >= 0.0 && theta[e] < std::numbers::pi)) {
      report.range_ok = false;
      report.range_violations.push_back(e);
    }
  }
  for (int v = 0; v < tri.n_vertices(); ++v) {
    double sum = 0.0;
    for (int h : vertex_link(tri, v).corners) {
      sum += theta[tri.edge(h)];
    }
    if (std::abs(sum - two_pi) > 1e-12) {
      report.vertex_sums_ok = false;
      report.vertex_violations.push_back({v, sum});
    }
  }

  // Simple dual cycles, each counted once by its edge set; faces after the start face must have
  // larger ids.
  std::set<std::vector<int>> seen;
  std::vector<int> path_faces;
  std::vector<int> path_halfedges;
  std::vector<bool> face_used(tri.n_faces(), false);
  std::vector<bool> edge_used(tri.n_edges(), false);

  auto record = [&](const std::vector<int>& faces, const std::vector<int>& halfedges) {
    std::vector<int> key;
    for (int h : halfedges) {
      key.push_back(tri.edge(h));
    }
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) {
      return;
    }
    ++report.cycles_enumerated;
    const DualCycleTopology topo = classify_dual_cycle(tri, faces, halfedges);
    if (!topo.contractible) {
      return;
    }
    ++report.contractible_cycles;
    if (topo.enclosed_vertices == 1) {
      return;
    }
    double sum = 0.0;
    for (int h : halfedges) {
      sum += theta[tri.edge(h)];
    }
    if (sum <= two_pi + 1e-12) {
      report.cycles_ok = false;
      CycleViolation violation;
      violation.edges.assign(key.begin(), key.end());
      violation.angle_sum = sum;
      report.cycle_violations.push_back(std::move(violation));
    }
  };

  std::function<void(int, int)> extend = [&](int start, int f) {
    for (int c = 0; c < 3; ++c) {
      const int h = 3 * f + c;
      const int e = tri.edge(h);
      if (edge_used[e]) {
        continue;
      }
      const int g = Triangulation::face(tri.twin(h));
      if (g == start) {
        path_halfedges.push_back(h);
        record(path_faces, path_halfedges);
        path_halfedges.pop_back();
        continue;
      }
      if (g < start || face_used[g] || static_cast<int>(path_faces.size()) >= max_cycle_len) {
        continue;
      }
      face_used[g] = true;
      edge_used[e] = true;
      path_faces.push_back(g);
      path_halfedges.push_back(h);
      extend(start, g);
      path_faces.pop_back();
      path_halfedges.pop_back();
      edge_used[e] = false;
      face_used[g] = false;
    }
  };

  if (max_cycle_len > 0) {
    for (int s = 0; s < tri.n_faces(); ++s) {
      face_used[s] = true;
      path_faces.assign(1, s);
      extend(s, s);
      face_used[s] = false;
    }
  }
  return report;
}

namespace {

// Residual layout per vertex: [sum_link u, Re S, Im S].
Eigen::VectorXd solver_residual(const Triangulation& tri, const std::vector<double>& u,
                                const std::vector<double>& theta) {
  const int n = tri.n_vertices();
  Eigen::VectorXd r(3 * n);
  for (int v = 0; v < n; ++v) {
    double lin = 0.0;
    Cplx p(1.0, 0.0);
    Cplx s(0.0, 0.0);
    for (int h : vertex_link(tri, v).corners) {
      const int e = tri.edge(h);
      lin += u[e];
      p *= std::polar(std::exp(u[e]), theta[e]);
      s += p;
    }
    r(3 * v) = lin;
    r(3 * v + 1) = s.real();
    r(3 * v + 2) = s.imag();
  }
  return r;
}

Eigen::MatrixXd solver_jacobian(const Triangulation& tri, const std::vector<double>& u,
                                const std::vector<double>& theta) {
  const int n = tri.n_vertices();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * n, tri.n_edges());
  for (int v = 0; v < n; ++v) {
    const VertexLink link = vertex_link(tri, v);
    const int r = link.degree();
    std::vector<Cplx> partial(r);
    Cplx p(1.0, 0.0);
    for (int m = 0; m < r; ++m) {
      const int e = tri.edge(link.corners[m]);
      p *= std::polar(std::exp(u[e]), theta[e]);
      partial[m] = p;
    }
    // d P_s / d u_e = P_s * (occurrences of e among the first s corners).
    Cplx tail_sum(0.0, 0.0);
    for (int m = r - 1; m >= 0; --m) {
      tail_sum += partial[m];
      const int e = tri.edge(link.corners[m]);
      J(3 * v, e) += 1.0;
      J(3 * v + 1, e) += tail_sum.real();
      J(3 * v + 2, e) += tail_sum.imag();
    }
  }
  return J;
}

} // namespace

SolveResult solve_pattern(const TriangulationPtr& tri, const std::vector<double>& theta,
                          const std::vector<double>& u0, const SolveOptions& options) {
  if (static_cast<int>(theta.size()) != tri->n_edges() || static_cast<int>(u0.size()) != tri->n_edges()) {
    throw Error(ErrorKind::InvalidInput, "theta and initial magnitudes need one entry per edge");
  }
  for (double v : u0) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::InvalidInput, "initial magnitudes must be finite");
    }
  }
  for (int v = 0; v < tri->n_vertices(); ++v) {
    double sum = 0.0;
    for (int h : vertex_link(*tri, v).corners) {
      sum += theta[tri->edge(h)];
    }
    if (std::abs(sum - 2.0 * std::numbers::pi) > 1e-12) {
      throw Error(ErrorKind::InvalidInput, "link angle sum at vertex " + std::to_string(v) +
                                               " is not 2 pi; the product equation cannot hold");
    }
  }

  auto residual_of = [&](const std::vector<double>& u) {
    return CrossRatioSystem(tri, u, theta);
  };

  SolveResult result;
  std::vector<double> u = u0;
  double res = max_residual(residual_of(u));
  result.residual_history.push_back(res);
  Eigen::VectorXd r = solver_residual(*tri, u, theta);
  while (res > options.tol) {
    if (result.iterations >= options.max_iter) {
      throw Error(ErrorKind::NoConvergence, "no convergence after " + std::to_string(options.max_iter) +
                                                " iterations (residual " + format_value(res) + ")");
    }
    const Eigen::MatrixXd J = solver_jacobian(*tri, u, theta);
    const Eigen::VectorXd step = -J.completeOrthogonalDecomposition().solve(r);

    double scale = 1.0;
    std::vector<double> trial(u.size());
    Eigen::VectorXd trial_r;
    while (true) {
      for (std::size_t e = 0; e < u.size(); ++e) {
        trial[e] = u[e] + scale * step(static_cast<Eigen::Index>(e));
      }
      trial_r = solver_residual(*tri, trial, theta);
      if (trial_r.norm() < r.norm() || scale < 1e-10) {
        break;
      }
      scale *= 0.5;
    }
    u = trial;
    r = trial_r;
    ++result.iterations;
    for (double v : u) {
      if (!std::isfinite(v) || std::abs(v) > options.max_log_mag) {
        throw Error(ErrorKind::DivergedToInfinity, "log magnitude exceeded " + std::to_string(options.max_log_mag));
      }
    }
    res = max_residual(residual_of(u));
    result.residual_history.push_back(res);
  }
  result.log_mag = std::move(u);
  result.residual = res;
  return result;
}

} // namespace circlepat
