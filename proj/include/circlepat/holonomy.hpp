#pragma once

// Developing maps, SL(2,C) holonomy, the edge one-form alpha, its primitive m and the cocycle
// tau = hol(x).
//
// A face of the universal cover is addressed as a copy G . f of a fundamental-domain face f,
// where G is the holonomy matrix of a deck transformation. Deck transformations are also kept
// as words in the generators: letter +(r+1) is delta_r, -(r+1) its inverse.

#include <array>
#include <optional>
#include <vector>

#include "circlepat/crossratio.hpp"
#include "circlepat/mobius.hpp"
#include "circlepat/surface.hpp"

namespace circlepat {

using Word = std::vector<int>;

Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);

struct FaceCopy {
  int face = -1;
  Mat2 transform = Mat2::Identity();
  Word word;
};

// A corner of a vertex star in the universal cover: outgoing half-edge h whose face copy is
// `copy` (copy.face == face(h)).
struct StarCorner {
  int halfedge = -1;
  FaceCopy copy;
};

struct DevelopOptions {
  std::optional<std::array<ProjPoint, 3>> seed; // root-face corners; default (0, 1, e^{i pi/3})
  // Move the layout away from infinity by a Moebius map when some point is (nearly) infinite.
  bool renormalize = true;
  // HolonomyInconsistent is raised when a vertex cycle misses +-Id by more than this.
  double max_defect = 1e-6;
};

class DevelopedPattern {
public:
  const CrossRatioSystem& cross_ratios() const { return X_; }
  const Triangulation& triangulation() const { return X_.triangulation(); }
  const FundamentalDomain& domain() const { return domain_; }
  int n_generators() const { return domain_.n_generators(); }

  // Corner positions of face f in the domain chart, indexed by corner.
  const std::array<ProjPoint, 3>& corners(int f) const { return corners_[f]; }
  // Tail position of h in the chart of face(h).
  const ProjPoint& position(int h) const { return corners_[h / 3][h % 3]; }
  Cplx affine_position(int h) const { return affine(position(h)); }

  const std::vector<Mat2>& generators() const { return rho_; }
  const Mat2& generator(int r) const { return rho_[r]; }
  Mat2 holonomy(const Word& w) const;

  // Deck transformation picked up when crossing from face(h) across h into face(twin(h)).
  Mat2 crossing(int h) const;
  Word crossing_word(int h) const;
  FaceCopy cross(const FaceCopy& from, int h) const;

  // Star of v around the anchor corner, counterclockwise or clockwise, starting at the anchor.
  std::vector<StarCorner> star(int v, bool clockwise, int anchor = -1, const FaceCopy* anchor_copy = nullptr) const;

  // Diagnostics computed by develop().
  double cross_ratio_defect() const { return cross_ratio_defect_; }
  double pairing_defect() const { return pairing_defect_; }
  const std::vector<double>& vertex_cycle_defects() const { return vertex_cycle_defects_; }
  double relator_defect() const { return relator_defect_; }
  const Mat2& normalization() const { return normalization_; }

private:
  friend DevelopedPattern develop(const CrossRatioSystem&, const FundamentalDomain&, const DevelopOptions&);
  DevelopedPattern(CrossRatioSystem X, FundamentalDomain domain) : X_(std::move(X)), domain_(std::move(domain)) {}

  CrossRatioSystem X_;
  FundamentalDomain domain_;
  std::vector<std::array<ProjPoint, 3>> corners_;
  std::vector<Mat2> rho_;
  double cross_ratio_defect_ = 0.0;
  double pairing_defect_ = 0.0;
  std::vector<double> vertex_cycle_defects_;
  double relator_defect_ = 0.0;
  Mat2 normalization_ = Mat2::Identity();
};

// Lays the root face on the seed and propagates across the dual spanning tree; each non-tree edge
// yields its generator's holonomy. Throws DegenerateLayout, HolonomyInconsistent.
DevelopedPattern develop(const CrossRatioSystem& X, const FundamentalDomain& domain, const DevelopOptions& options = {});
DevelopedPattern develop(const CrossRatioSystem& X, const DevelopOptions& options = {});

// alpha(h) = x_e / (z_j - z_i) [[(z_i+z_j)/2, -z_i z_j], [1, -(z_i+z_j)/2]], per half-edge in the
// chart of face(h).
struct EdgeOneForm {
  std::vector<Mat2> alpha;
  const Mat2& operator[](int h) const { return alpha[h]; }
};

EdgeOneForm alpha_form(const Eigen::VectorXcd& x, const DevelopedPattern& P);
// max_v || sum over the star of v of alpha ||
double closedness_defect(const EdgeOneForm& alpha, const DevelopedPattern& P);
// max_r || alpha(h_r) + Ad rho_r alpha(twin h_r) ||
double equivariance_defect(const EdgeOneForm& alpha, const DevelopedPattern& P);

// Primitive on dual vertices: m(root) = 0 and m(left) - m(right) = alpha across every tree edge.
// Throws FormNotClosed.
std::vector<Mat2> primitive_m(const EdgeOneForm& alpha, const DevelopedPattern& P, double tol = 1e-8);

class Cocycle {
public:
  Cocycle(std::vector<Mat2> tau, std::vector<Mat2> rho) : tau_(std::move(tau)), rho_(std::move(rho)) {}
  int size() const { return static_cast<int>(tau_.size()); }
  const Mat2& operator[](int r) const { return tau_[r]; }
  const std::vector<Mat2>& values() const { return tau_; }
  const std::vector<Mat2>& representation() const { return rho_; }
  // Extension to words by tau_{ab} = tau_a + Ad rho_a (tau_b).
  Mat2 evaluate(const Word& w) const;
  Mat2 holonomy(const Word& w) const;

private:
  std::vector<Mat2> tau_;
  std::vector<Mat2> rho_;
};

// Running primitive along a dual path in the universal cover.
struct MWalk {
  FaceCopy copy;
  Mat2 m = Mat2::Zero();
};

MWalk walk_step(const MWalk& state, int h, const EdgeOneForm& alpha, const DevelopedPattern& P);

// tau_r = m(delta_r . g) - Ad rho_r m(g), evaluated at the root. With check_faces > 0, the value is
// recomputed from that many other faces by walking; FaceDependence is thrown beyond face_tol.
Cocycle hol(const Eigen::VectorXcd& x, const DevelopedPattern& P, int check_faces = 3, double face_tol = 1e-9);
Cocycle hol(const EdgeOneForm& alpha, const DevelopedPattern& P, int check_faces = 3, double face_tol = 1e-9);

// sqrt(min_{tau0} sum_r || tau_r - tau0 + Ad rho_r tau0 ||_F^2); zero exactly on coboundaries.
double coboundary_distance(const Cocycle& tau);
Mat2 best_coboundary_base(const Cocycle& tau);

// Central difference of rho_r(t) rho_r(0)^{-1} along X(t) = exp(log X + t x), seed held fixed.
std::vector<Mat2> holonomy_derivative_fd(const CrossRatioSystem& X, const Eigen::VectorXcd& x,
                                         const FundamentalDomain& domain, const DevelopOptions& options,
                                         double step = 1e-5);

} // namespace circlepat
