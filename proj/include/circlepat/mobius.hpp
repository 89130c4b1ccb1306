#pragma once

// Points of the Riemann sphere in homogeneous coordinates and SL(2,C) helpers.

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace circlepat {

using Cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

// Homogeneous point (z0 : z1) representing z0 / z1; (1 : 0) is infinity.
using ProjPoint = Eigen::Vector2cd;

ProjPoint proj(Cplx z);
ProjPoint proj_infinity();
bool is_infinite(const ProjPoint& p, double rel_eps = 1e-14);
// Affine coordinate; throws InfinitePoint when p is (numerically) at infinity.
Cplx affine(const ProjPoint& p);
ProjPoint normalized(const ProjPoint& p);

// det(p, q) = p0 q1 - p1 q0, which equals z_p - z_q for unit second coordinates.
inline Cplx bracket(const ProjPoint& p, const ProjPoint& q) { return p(0) * q(1) - p(1) * q(0); }

// X = -((z_k - z_i)(z_l - z_j)) / ((z_i - z_l)(z_j - z_k)).
// Throws DegenerateQuadruple when numerator and denominator both vanish.
Cplx cross_ratio(const ProjPoint& zi, const ProjPoint& zj, const ProjPoint& zk, const ProjPoint& zl);
Cplx cross_ratio(Cplx zi, Cplx zj, Cplx zk, Cplx zl);

// The point z_l with cross_ratio(zi, zj, zk, z_l) == x.
ProjPoint fourth_point(Cplx x, const ProjPoint& zi, const ProjPoint& zj, const ProjPoint& zk);

ProjPoint act(const Mat2& g, const ProjPoint& p);
Cplx act(const Mat2& g, Cplx z);

// Scales to unit determinant. Throws DegenerateLayout for singular input.
Mat2 normalize_sl2(const Mat2& m);
Mat2 sl2_inverse(const Mat2& g);

// Unique Moebius map (unit determinant) sending src[a] to dst[a], a = 0, 1, 2.
Mat2 mobius_from_three(const std::array<ProjPoint, 3>& src, const std::array<ProjPoint, 3>& dst);

inline Mat2 adjoint(const Mat2& g, const Mat2& a) { return g * a * sl2_inverse(g); }

// Distance between g and h in PSL(2,C): min(||g - h||, ||g + h||) in the Frobenius norm.
double psl_distance(const Mat2& g, const Mat2& h);
// Sign flip so that g lies on the same sheet as ref (Re tr(g ref^-1) >= 0).
Mat2 align_sign(const Mat2& g, const Mat2& ref);

// Traceless matrix whose eigenvectors are (z_i,1) and (z_j,1) with eigenvalues -1/2 and 1/2:
// (1/(z_j - z_i)) [[(z_i+z_j)/2, -z_i z_j], [1, -(z_i+z_j)/2]].
Mat2 edge_generator(Cplx zi, Cplx zj);

// Coordinates of a traceless matrix [[a, b], [c, -a]] as (a, b, c).
Eigen::Vector3cd sl2_coords(const Mat2& m);
Mat2 sl2_from_coords(const Eigen::Vector3cd& v);

} // namespace circlepat
