#pragma once

// Cross-ratio systems on a triangulation, stored as log-magnitude u and angle theta per edge.

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circlepat/mobius.hpp"
#include "circlepat/surface.hpp"

namespace circlepat {

using TriangulationPtr = std::shared_ptr<const Triangulation>;

class CrossRatioSystem {
public:
  CrossRatioSystem(TriangulationPtr tri, std::vector<double> log_mag, std::vector<double> theta);
  // From complex values; theta = arg X in [0, 2 pi).
  static CrossRatioSystem from_values(TriangulationPtr tri, const Eigen::VectorXcd& values);

  const Triangulation& triangulation() const { return *tri_; }
  const TriangulationPtr& triangulation_ptr() const { return tri_; }
  const std::vector<double>& log_mag() const { return log_mag_; }
  const std::vector<double>& theta() const { return theta_; }

  int n_edges() const { return static_cast<int>(theta_.size()); }
  Cplx value(int e) const;
  Eigen::VectorXcd values() const;

  // exp(log X + t * x), the finite deformation along a logarithmic tangent vector.
  CrossRatioSystem deformed(const Eigen::VectorXcd& x, double t) const;

private:
  TriangulationPtr tri_;
  std::vector<double> log_mag_;
  std::vector<double> theta_;
};

// Pi_link X - 1 over the clockwise link of i (loops counted twice).
Cplx product_residual(const CrossRatioSystem& X, int i);
// X_1 + X_1 X_2 + ... + X_1 ... X_r, link read clockwise from corner `start` (an offset into the
// canonical link order).
Cplx sum_residual(const CrossRatioSystem& X, int i, int start = 0);
// Max over vertices of |product_residual| and |sum_residual|.
double max_residual(const CrossRatioSystem& X);

// Partial products P_s = X_1 ... X_s, s = 1..r, along the canonical clockwise link.
std::vector<Cplx> link_partial_products(const CrossRatioSystem& X, int i);

struct VertexAngleViolation {
  int vertex = -1;
  double angle_sum = 0.0;
};

struct CycleViolation {
  std::vector<int> edges; // crossed edges in order
  double angle_sum = 0.0;
};

struct DelaunayReport {
  bool range_ok = true;          // every theta in [0, pi)
  bool vertex_sums_ok = true;    // condition (i)
  bool cycles_ok = true;         // condition (ii), up to max_cycle_len
  int max_cycle_len = 0;
  int cycles_enumerated = 0;
  int contractible_cycles = 0;
  std::vector<VertexAngleViolation> vertex_violations;
  std::vector<CycleViolation> cycle_violations;
  std::vector<int> range_violations;

  bool ok() const { return range_ok && vertex_sums_ok && cycles_ok; }
};

// Link angle sums equal 2 pi (tolerance 1e-12); every simple contractible dual cycle of length at
// most max_cycle_len that does not enclose exactly one vertex has angle sum > 2 pi.
DelaunayReport is_delaunay(const Triangulation& tri, const std::vector<double>& theta, int max_cycle_len = 12);

// A simple closed dual cycle given by its crossed edges, consecutive edges sharing a face.
struct DualCycleTopology {
  bool separating = false;
  bool contractible = false;
  int enclosed_vertices = -1; // vertices on a disk side, when contractible
};

DualCycleTopology classify_dual_cycle(const Triangulation& tri, const std::vector<int>& faces,
                                      const std::vector<int>& crossed_halfedges);

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 100;
  double max_log_mag = 50.0;
};

struct SolveResult {
  std::vector<double> log_mag;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

// Gauss-Newton with minimum-norm steps on u, residuals {sum_link u, Re S_i, Im S_i} per vertex.
// Throws InvalidInput (link angle sums), NoConvergence, DivergedToInfinity.
SolveResult solve_pattern(const TriangulationPtr& tri, const std::vector<double>& theta,
                          const std::vector<double>& u0, const SolveOptions& options = {});

struct Pattern {
  TriangulationPtr tri;
  CrossRatioSystem X;
  std::vector<bool> cut;                         // edges the natural fundamental domain is cut along
  std::optional<std::array<ProjPoint, 3>> seed;  // natural positions of face 0, when known
};

// One-vertex torus with X = e^{i pi/3} on all three edges.
Pattern example_hex_torus();
// Regular octagon with angles pi/4 in the unit disk, opposite sides paired, fan-triangulated from
// corner 0.
Pattern example_bolza();
// Regular octahedron on the sphere, X = i on every edge.
Pattern example_octahedron();

// Vertices of the Bolza octagon in the unit disk, counterclockwise from angle 0.
std::vector<Cplx> bolza_octagon_vertices();
// Disk isometry carrying the side opposite to side s onto side s (side s joins corners s, s+1).
Mat2 bolza_side_pairing(int s);

} // namespace circlepat
