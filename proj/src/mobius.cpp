#include "circlepat/mobius.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "circlepat/error.hpp"

namespace circlepat {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidInput: return "InvalidInput";
  case ErrorKind::NonManifold: return "NonManifold";
  case ErrorKind::OrientationMismatch: return "OrientationMismatch";
  case ErrorKind::NotClosed: return "NotClosed";
  case ErrorKind::DegenerateQuadruple: return "DegenerateQuadruple";
  case ErrorKind::NoConvergence: return "NoConvergence";
  case ErrorKind::DivergedToInfinity: return "DivergedToInfinity";
  case ErrorKind::NotInW: return "NotInW";
  case ErrorKind::DegenerateLink: return "DegenerateLink";
  case ErrorKind::DegenerateLayout: return "DegenerateLayout";
  case ErrorKind::HolonomyInconsistent: return "HolonomyInconsistent";
  case ErrorKind::InfinitePoint: return "InfinitePoint";
  case ErrorKind::FormNotClosed: return "FormNotClosed";
  case ErrorKind::FaceDependence: return "FaceDependence";
  case ErrorKind::DegeneratePair: return "DegeneratePair";
  case ErrorKind::TheoremViolation: return "TheoremViolation";
  case ErrorKind::Io: return "Io";
  case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

ProjPoint proj(Cplx z) { return ProjPoint(z, Cplx(1.0, 0.0)); }

ProjPoint proj_infinity() { return ProjPoint(Cplx(1.0, 0.0), Cplx(0.0, 0.0)); }

bool is_infinite(const ProjPoint& p, double rel_eps) { return std::abs(p(1)) <= rel_eps * std::abs(p(0)); }

Cplx affine(const ProjPoint& p) {
  if (is_infinite(p)) {
    throw Error(ErrorKind::InfinitePoint, "point at infinity has no affine coordinate");
  }
  return p(0) / p(1);
}

ProjPoint normalized(const ProjPoint& p) {
  // Finite points keep a unit second coordinate so affine values are exact.
  if (std::abs(p(1)) > 1e-300 && std::abs(p(0)) < 1e150 * std::abs(p(1))) {
    return ProjPoint(p(0) / p(1), Cplx(1.0, 0.0));
  }
  return p / p.norm();
}

Cplx cross_ratio(const ProjPoint& zi, const ProjPoint& zj, const ProjPoint& zk, const ProjPoint& zl) {
  const Cplx num = bracket(zk, zi) * bracket(zl, zj);
  const Cplx den = bracket(zi, zl) * bracket(zj, zk);
  const double scale = zi.norm() * zj.norm() * zk.norm() * zl.norm();
  if (std::abs(den) <= 1e-15 * scale) {
    if (std::abs(num) <= 1e-15 * scale) {
      throw Error(ErrorKind::DegenerateQuadruple, "cross ratio is 0/0");
    }
    return Cplx(std::numeric_limits<double>::infinity(), 0.0);
  }
  return -num / den;
}

Cplx cross_ratio(Cplx zi, Cplx zj, Cplx zk, Cplx zl) { return cross_ratio(proj(zi), proj(zj), proj(zk), proj(zl)); }

ProjPoint fourth_point(Cplx x, const ProjPoint& zi, const ProjPoint& zj, const ProjPoint& zk) {
  // Linear in z_l: x [j,k] [i,l] + [k,i] [l,j] = 0.
  const ProjPoint p = x * bracket(zj, zk) * zi - bracket(zk, zi) * zj;
  if (p.norm() <= 1e-14 * zi.norm() * zj.norm() * zk.norm() * (1.0 + std::abs(x))) {
    throw Error(ErrorKind::DegenerateLayout, "cannot place fourth point: degenerate triangle");
  }
  return normalized(p);
}

ProjPoint act(const Mat2& g, const ProjPoint& p) { return normalized(g * p); }

Cplx act(const Mat2& g, Cplx z) { return affine(act(g, proj(z))); }

Mat2 normalize_sl2(const Mat2& m) {
  const Cplx det = m.determinant();
  if (std::abs(det) <= 1e-300) {
    throw Error(ErrorKind::DegenerateLayout, "singular Moebius matrix");
  }
  return m / std::sqrt(det);
}

Mat2 sl2_inverse(const Mat2& g) {
  Mat2 inv;
  inv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  return inv / g.determinant();
}

namespace {

// Matrix sending 0 -> a, infinity -> b, 1 -> c.
Mat2 from_standard(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
  // Columns mu*b and lambda*a with mu*b + lambda*a = c.
  Mat2 basis;
  basis.col(0) = b;
  basis.col(1) = a;
  if (std::abs(basis.determinant()) <= 1e-14 * a.norm() * b.norm()) {
    throw Error(ErrorKind::DegenerateLayout, "coincident points in three-point map");
  }
  const Eigen::Vector2cd coef = basis.partialPivLu().solve(c);
  if (std::abs(coef(0)) <= 1e-300 || std::abs(coef(1)) <= 1e-300) {
    throw Error(ErrorKind::DegenerateLayout, "coincident points in three-point map");
  }
  Mat2 m;
  m.col(0) = coef(0) * b;
  m.col(1) = coef(1) * a;
  return m;
}

} // namespace

Mat2 mobius_from_three(const std::array<ProjPoint, 3>& src, const std::array<ProjPoint, 3>& dst) {
  const Mat2 s = from_standard(src[0], src[1], src[2]);
  const Mat2 d = from_standard(dst[0], dst[1], dst[2]);
  return normalize_sl2(d * s.inverse());
}

double psl_distance(const Mat2& g, const Mat2& h) { return std::min((g - h).norm(), (g + h).norm()); }

Mat2 align_sign(const Mat2& g, const Mat2& ref) {
  return ((g * sl2_inverse(ref)).trace().real() < 0.0) ? Mat2(-g) : g;
}

Mat2 edge_generator(Cplx zi, Cplx zj) {
  const Cplx d = zj - zi;
  if (std::abs(d) == 0.0) {
    throw Error(ErrorKind::DegeneratePair, "edge endpoints coincide");
  }
  Mat2 m;
  m << 0.5 * (zi + zj), -zi * zj, Cplx(1.0, 0.0), -0.5 * (zi + zj);
  return m / d;
}

Eigen::Vector3cd sl2_coords(const Mat2& m) { return Eigen::Vector3cd(0.5 * (m(0, 0) - m(1, 1)), m(0, 1), m(1, 0)); }

Mat2 sl2_from_coords(const Eigen::Vector3cd& v) {
  Mat2 m;
  m << v(0), v(1), v(2), -v(0);
  return m;
}

} // namespace circlepat
