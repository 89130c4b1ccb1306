#include "circlepat/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "circlepat/error.hpp"

namespace circlepat {

namespace {

double chordal(const ProjPoint& p, const ProjPoint& q) {
  return std::abs(bracket(p, q)) / (p.norm() * q.norm());
}

ProjPoint checked_fourth(Cplx x, const ProjPoint& zi, const ProjPoint& zj, const ProjPoint& zk, int edge) {
  const ProjPoint p = fourth_point(x, zi, zj, zk);
  if (!std::isfinite(p.norm()) || p.norm() == 0.0) {
    throw Error(ErrorKind::DegenerateLayout, "layout breaks down across edge " + std::to_string(edge));
  }
  return normalized(p);
}

// A Moebius map sending a point far from all corners to infinity, so every corner becomes finite.
Mat2 renormalizing_map(const std::vector<std::array<ProjPoint, 3>>& corners) {
  constexpr int samples = 512;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best_gap = -1.0;
  Cplx best{0.0, 0.0};
  for (int s = 0; s < samples; ++s) {
    // Fibonacci points on the sphere, stereographically projected.
    const double zc = 1.0 - (2.0 * s + 1.0) / samples;
    const double r = std::sqrt(1.0 - zc * zc);
    const double phi = golden * s;
    const Cplx q = std::polar(r / (1.0 - zc), phi);
    double gap = 1e300;
    for (const auto& face : corners) {
      for (const ProjPoint& p : face) {
        gap = std::min(gap, chordal(p, proj(q)));
      }
    }
    if (gap > best_gap) {
      best_gap = gap;
      best = q;
    }
  }
  Mat2 n;
  n << 0.0, 1.0, 1.0, -best;
  return normalize_sl2(n);
}

bool needs_renormalization(const std::vector<std::array<ProjPoint, 3>>& corners) {
  for (const auto& face : corners) {
    for (const ProjPoint& p : face) {
      if (is_infinite(p, 1e-8)) {
        return true;
      }
    }
  }
  return false;
}

Mat2 letter_rho(const std::vector<Mat2>& rho, int letter) {
  const Mat2& g = rho[std::abs(letter) - 1];
  return letter > 0 ? g : sl2_inverse(g);
}

} // namespace

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) {
    l = -l;
  }
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  for (int l : b) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Mat2 DevelopedPattern::holonomy(const Word& w) const {
  Mat2 g = Mat2::Identity();
  for (int l : w) {
    g = g * letter_rho(rho_, l);
  }
  return g;
}

Mat2 DevelopedPattern::crossing(int h) const {
  const Triangulation& tri = triangulation();
  const int e = tri.edge(h);
  const int r = domain_.generator_of_edge[e];
  if (r < 0) {
    return Mat2::Identity();
  }
  return h == domain_.generators[r].halfedge ? rho_[r] : sl2_inverse(rho_[r]);
}

Word DevelopedPattern::crossing_word(int h) const {
  const int r = domain_.generator_of_edge[triangulation().edge(h)];
  if (r < 0) {
    return {};
  }
  return {h == domain_.generators[r].halfedge ? r + 1 : -(r + 1)};
}

FaceCopy DevelopedPattern::cross(const FaceCopy& from, int h) const {
  FaceCopy out;
  out.face = Triangulation::face(triangulation().twin(h));
  out.transform = from.transform * crossing(h);
  out.word = concat(from.word, crossing_word(h));
  return out;
}

std::vector<StarCorner> DevelopedPattern::star(int v, bool clockwise, int anchor, const FaceCopy* anchor_copy) const {
  const Triangulation& tri = triangulation();
  if (anchor < 0) {
    anchor = tri.canonical_halfedge(v);
  }
  if (tri.tail(anchor) != v) {
    throw Error(ErrorKind::InvalidInput, "star anchor does not start at the vertex");
  }
  StarCorner c;
  c.halfedge = anchor;
  c.copy = anchor_copy ? *anchor_copy : FaceCopy{Triangulation::face(anchor), Mat2::Identity(), {}};
  std::vector<StarCorner> out;
  out.reserve(tri.degree(v));
  do {
    out.push_back(c);
    if (clockwise) {
      c.copy = cross(c.copy, c.halfedge);
      c.halfedge = tri.cw_next(c.halfedge);
    } else {
      const int p = Triangulation::prev(c.halfedge);
      c.copy = cross(c.copy, p);
      c.halfedge = tri.twin(p);
    }
  } while (c.halfedge != anchor);
  return out;
}

DevelopedPattern develop(const CrossRatioSystem& X, const DevelopOptions& options) {
  return develop(X, fundamental_domain(X.triangulation()), options);
}

DevelopedPattern develop(const CrossRatioSystem& X, const FundamentalDomain& domain, const DevelopOptions& options) {
  const Triangulation& tri = X.triangulation();
  DevelopedPattern P(X, domain);
  P.corners_.assign(tri.n_faces(), {});

  std::array<ProjPoint, 3> seed{proj(0.0), proj(1.0), proj(std::polar(1.0, std::numbers::pi / 3.0))};
  if (options.seed) {
    seed = *options.seed;
  }
  for (auto& p : seed) {
    p = normalized(p);
  }
  if (chordal(seed[0], seed[1]) < 1e-12 || chordal(seed[1], seed[2]) < 1e-12 || chordal(seed[2], seed[0]) < 1e-12) {
    throw Error(ErrorKind::DegenerateLayout, "seed triangle has coincident corners");
  }
  P.corners_[domain.root] = seed;

  for (int f : domain.order) {
    if (f == domain.root) {
      continue;
    }
    const int h = domain.parent_halfedge[f];
    const int p = Triangulation::face(h);
    const int t = tri.twin(h);
    const auto& pc = P.corners_[p];
    const ProjPoint& zi = pc[h % 3];
    const ProjPoint& zj = pc[(h % 3 + 1) % 3];
    const ProjPoint& zk = pc[(h % 3 + 2) % 3];
    auto& fc = P.corners_[f];
    fc[t % 3] = zj;
    fc[(t % 3 + 1) % 3] = zi;
    fc[(t % 3 + 2) % 3] = checked_fourth(X.value(tri.edge(h)), zi, zj, zk, tri.edge(h));
  }

  P.rho_.clear();
  for (const Generator& gen : domain.generators) {
    const int h = gen.halfedge;
    const int t = tri.twin(h);
    const auto& fc = P.corners_[gen.from_face];
    const auto& gc = P.corners_[gen.to_face];
    const ProjPoint& zi = fc[h % 3];
    const ProjPoint& zj = fc[(h % 3 + 1) % 3];
    const ProjPoint& zk = fc[(h % 3 + 2) % 3];
    const std::array<ProjPoint, 3> src{gc[t % 3], gc[(t % 3 + 1) % 3], gc[(t % 3 + 2) % 3]};
    const std::array<ProjPoint, 3> dst{zj, zi, checked_fourth(X.value(gen.edge), zi, zj, zk, gen.edge)};
    P.rho_.push_back(mobius_from_three(src, dst));
  }

  if (options.renormalize && needs_renormalization(P.corners_)) {
    const Mat2 n = renormalizing_map(P.corners_);
    const Mat2 n_inv = sl2_inverse(n);
    for (auto& face : P.corners_) {
      for (ProjPoint& q : face) {
        q = normalized(act(n, q));
      }
    }
    for (Mat2& g : P.rho_) {
      g = n * g * n_inv;
    }
    P.normalization_ = n;
  }

  // Diagnostics.
  P.cross_ratio_defect_ = 0.0;
  for (int e = 0; e < tri.n_edges(); ++e) {
    const int h = tri.edge_halfedge(e);
    const int t = tri.twin(h);
    const auto& fc = P.corners_[Triangulation::face(h)];
    const ProjPoint zl = act(P.crossing(h), P.corners_[Triangulation::face(t)][(t % 3 + 2) % 3]);
    try {
      const Cplx got = cross_ratio(fc[h % 3], fc[(h % 3 + 1) % 3], fc[(h % 3 + 2) % 3], zl);
      const Cplx want = X.value(e);
      P.cross_ratio_defect_ = std::max(P.cross_ratio_defect_, std::abs(got - want) / std::max(1.0, std::abs(want)));
    } catch (const Error&) {
      P.cross_ratio_defect_ = std::numeric_limits<double>::infinity();
    }
  }
  P.pairing_defect_ = 0.0;
  for (int r = 0; r < domain.n_generators(); ++r) {
    const Generator& gen = domain.generators[r];
    const int h = gen.halfedge;
    const int t = tri.twin(h);
    const auto& fc = P.corners_[gen.from_face];
    const auto& gc = P.corners_[gen.to_face];
    P.pairing_defect_ = std::max({P.pairing_defect_, chordal(act(P.rho_[r], gc[t % 3]), fc[(h % 3 + 1) % 3]),
                                  chordal(act(P.rho_[r], gc[(t % 3 + 1) % 3]), fc[h % 3])});
  }
  P.vertex_cycle_defects_.assign(tri.n_vertices(), 0.0);
  for (int v = 0; v < tri.n_vertices(); ++v) {
    const auto corners = P.star(v, false);
    const StarCorner& last = corners.back();
    const FaceCopy closing = P.cross(last.copy, Triangulation::prev(last.halfedge));
    P.vertex_cycle_defects_[v] = psl_distance(closing.transform, Mat2::Identity());
  }
  P.relator_defect_ = *std::max_element(P.vertex_cycle_defects_.begin(), P.vertex_cycle_defects_.end());
  if (P.relator_defect_ > options.max_defect) {
    throw Error(ErrorKind::HolonomyInconsistent,
                "vertex cycle holonomy misses the identity by " + format_value(P.relator_defect_));
  }
  return P;
}

EdgeOneForm alpha_form(const Eigen::VectorXcd& x, const DevelopedPattern& P) {
  const Triangulation& tri = P.triangulation();
  if (x.size() != tri.n_edges()) {
    throw Error(ErrorKind::InvalidInput, "tangent vector has wrong length");
  }
  EdgeOneForm out;
  out.alpha.resize(tri.n_halfedges());
  for (int h = 0; h < tri.n_halfedges(); ++h) {
    const Cplx zi = P.affine_position(h);
    const Cplx zj = P.affine_position(Triangulation::next(h));
    if (std::abs(zj - zi) < 1e-14 * (1.0 + std::abs(zi))) {
      throw Error(ErrorKind::DegenerateLayout, "edge endpoints coincide in the layout");
    }
    out.alpha[h] = x(tri.edge(h)) * edge_generator(zi, zj);
  }
  return out;
}

double closedness_defect(const EdgeOneForm& alpha, const DevelopedPattern& P) {
  double worst = 0.0;
  for (int v = 0; v < P.triangulation().n_vertices(); ++v) {
    Mat2 sum = Mat2::Zero();
    for (const StarCorner& c : P.star(v, false)) {
      sum += adjoint(c.copy.transform, alpha[c.halfedge]);
    }
    worst = std::max(worst, sum.norm());
  }
  return worst;
}

double equivariance_defect(const EdgeOneForm& alpha, const DevelopedPattern& P) {
  double worst = 0.0;
  const Triangulation& tri = P.triangulation();
  for (int r = 0; r < P.n_generators(); ++r) {
    const int h = P.domain().generators[r].halfedge;
    worst = std::max(worst, (alpha[h] + adjoint(P.generator(r), alpha[tri.twin(h)])).norm());
  }
  return worst;
}

namespace {

double form_scale(const EdgeOneForm& alpha) {
  double s = 1.0;
  for (const Mat2& a : alpha.alpha) {
    s = std::max(s, a.norm());
  }
  return s;
}

} // namespace

std::vector<Mat2> primitive_m(const EdgeOneForm& alpha, const DevelopedPattern& P, double tol) {
  const double defect = closedness_defect(alpha, P);
  if (defect > tol * form_scale(alpha)) {
    throw Error(ErrorKind::FormNotClosed, "alpha is not closed (defect " + format_value(defect) + ")");
  }
  const FundamentalDomain& D = P.domain();
  std::vector<Mat2> m(P.triangulation().n_faces(), Mat2::Zero());
  for (int f : D.order) {
    if (f == D.root) {
      continue;
    }
    const int h = D.parent_halfedge[f];
    m[f] = m[Triangulation::face(h)] - alpha[h];
  }
  return m;
}

Mat2 Cocycle::holonomy(const Word& w) const {
  Mat2 g = Mat2::Identity();
  for (int l : w) {
    g = g * letter_rho(rho_, l);
  }
  return g;
}

Mat2 Cocycle::evaluate(const Word& w) const {
  Mat2 acc = Mat2::Zero();
  Mat2 g = Mat2::Identity();
  for (int l : w) {
    const int r = std::abs(l) - 1;
    const Mat2 t = l > 0 ? tau_[r] : Mat2(-adjoint(sl2_inverse(rho_[r]), tau_[r]));
    acc += adjoint(g, t);
    g = g * letter_rho(rho_, l);
  }
  return acc;
}

MWalk walk_step(const MWalk& state, int h, const EdgeOneForm& alpha, const DevelopedPattern& P) {
  if (Triangulation::face(h) != state.copy.face) {
    throw Error(ErrorKind::InvalidInput, "walk step leaves from the wrong face");
  }
  MWalk out;
  out.m = state.m - adjoint(state.copy.transform, alpha[h]);
  out.copy = P.cross(state.copy, h);
  return out;
}

namespace {

// Dual tree path from face a to face b, as crossed half-edges.
std::vector<int> tree_path(const FundamentalDomain& D, const Triangulation& tri, int a, int b) {
  std::vector<int> up;
  for (int f = a; f != D.root; f = Triangulation::face(D.parent_halfedge[f])) {
    up.push_back(tri.twin(D.parent_halfedge[f]));
  }
  std::vector<int> down;
  for (int f = b; f != D.root; f = Triangulation::face(D.parent_halfedge[f])) {
    down.push_back(D.parent_halfedge[f]);
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

} // namespace

Cocycle hol(const Eigen::VectorXcd& x, const DevelopedPattern& P, int check_faces, double face_tol) {
  return hol(alpha_form(x, P), P, check_faces, face_tol);
}

Cocycle hol(const EdgeOneForm& alpha, const DevelopedPattern& P, int check_faces, double face_tol) {
  const std::vector<Mat2> m = primitive_m(alpha, P);
  const FundamentalDomain& D = P.domain();
  const Triangulation& tri = P.triangulation();
  std::vector<Mat2> tau;
  tau.reserve(D.n_generators());
  for (int r = 0; r < D.n_generators(); ++r) {
    const Generator& gen = D.generators[r];
    const Mat2 across = m[gen.from_face] - alpha[gen.halfedge];
    tau.push_back(across - adjoint(P.generator(r), m[gen.to_face]));
  }

  const int nf = tri.n_faces();
  const double scale = form_scale(alpha);
  for (int k = 0; k < std::min(check_faces, nf); ++k) {
    const int F = static_cast<int>((static_cast<long long>(k + 1) * nf) / (check_faces + 1)) % nf;
    for (int r = 0; r < D.n_generators(); ++r) {
      const Generator& gen = D.generators[r];
      MWalk w{{gen.from_face, Mat2::Identity(), {}}, m[gen.from_face]};
      w = walk_step(w, gen.halfedge, alpha, P);
      for (int h : tree_path(D, tri, gen.to_face, F)) {
        w = walk_step(w, h, alpha, P);
      }
      const Mat2 t = w.m - adjoint(w.copy.transform, m[F]);
      if ((t - tau[r]).norm() > face_tol * scale) {
        throw Error(ErrorKind::FaceDependence, "tau of generator " + std::to_string(r) + " depends on the face");
      }
    }
  }
  return Cocycle(std::move(tau), P.generators());
}

namespace {

Eigen::Vector4cd flat(const Mat2& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

struct CoboundaryFit {
  Eigen::Vector3cd base;
  double distance = 0.0;
};

CoboundaryFit fit_coboundary(const Cocycle& tau) {
  const int n = tau.size();
  if (n == 0) {
    return {Eigen::Vector3cd::Zero(), 0.0};
  }
  Eigen::MatrixXcd A(4 * n, 3);
  Eigen::VectorXcd b(4 * n);
  for (int r = 0; r < n; ++r) {
    const Mat2& g = tau.representation()[r];
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3cd unit = Eigen::Vector3cd::Zero();
      unit(k) = 1.0;
      const Mat2 e = sl2_from_coords(unit);
      A.block<4, 1>(4 * r, k) = flat(adjoint(g, e) - e);
    }
    b.segment<4>(4 * r) = -flat(tau[r]);
  }
  CoboundaryFit out;
  out.base = A.completeOrthogonalDecomposition().solve(b);
  out.distance = (A * out.base - b).norm();
  return out;
}

} // namespace

double coboundary_distance(const Cocycle& tau) { return fit_coboundary(tau).distance; }

Mat2 best_coboundary_base(const Cocycle& tau) { return sl2_from_coords(fit_coboundary(tau).base); }

std::vector<Mat2> holonomy_derivative_fd(const CrossRatioSystem& X, const Eigen::VectorXcd& x,
                                         const FundamentalDomain& domain, const DevelopOptions& options,
                                         double step) {
  DevelopOptions opts = options;
  opts.renormalize = false;
  opts.max_defect = std::numeric_limits<double>::infinity();
  const DevelopedPattern p0 = develop(X, domain, opts);
  const DevelopedPattern pp = develop(X.deformed(x, step), domain, opts);
  const DevelopedPattern pm = develop(X.deformed(x, -step), domain, opts);
  std::vector<Mat2> out;
  for (int r = 0; r < domain.n_generators(); ++r) {
    const Mat2& g0 = p0.generator(r);
    const Mat2 gp = align_sign(pp.generator(r), g0);
    const Mat2 gm = align_sign(pm.generator(r), g0);
    out.push_back((gp - gm) / (2.0 * step) * sl2_inverse(g0));
  }
  return out;
}

} // namespace circlepat
