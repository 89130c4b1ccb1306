#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "circlepat/crossratio.hpp"
#include "circlepat/forms.hpp"
#include "circlepat/holonomy.hpp"
#include "circlepat/tangent.hpp"

namespace test_support {

using circlepat::Cplx;
using circlepat::Mat2;

inline constexpr double kPi = 3.14159265358979323846;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20261019);
  return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Cplx random_cplx(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

inline Eigen::VectorXcd random_vector(int n) {
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) {
    v(k) = random_cplx();
  }
  return v;
}

inline Eigen::VectorXd random_real_vector(int n) {
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) {
    v(k) = uniform();
  }
  return v;
}

// A random element of SL(2,C) not too far from the identity.
inline Mat2 random_sl2(double spread = 1.0) {
  for (;;) {
    Mat2 m;
    m << Cplx(1.0, 0.0) + random_cplx(spread), random_cplx(spread), random_cplx(spread),
        Cplx(1.0, 0.0) + random_cplx(spread);
    const Cplx d = m.determinant();
    if (std::abs(d) > 0.2) {
      return m / std::sqrt(d);
    }
  }
}

inline Mat2 random_traceless(double r = 1.0) {
  const Cplx a = random_cplx(r);
  Mat2 m;
  m << a, random_cplx(r), random_cplx(r), -a;
  return m;
}

inline Eigen::VectorXcd random_combination(const Eigen::MatrixXcd& basis) {
  return basis * random_vector(static_cast<int>(basis.cols()));
}

inline Eigen::VectorXcd random_real_combination(const Eigen::MatrixXcd& basis) {
  return basis * random_real_vector(static_cast<int>(basis.cols())).cast<Cplx>();
}

// Null space of a dense matrix by SVD, computed here so that tests do not share the library's
// kernel code.
template <typename M>
Eigen::MatrixXcd null_space(const M& a, double rel = 1e-9) {
  Eigen::MatrixXcd ac = a.template cast<Cplx>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ac, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rel * std::max(1.0, smax)) {
      ++rank;
    }
  }
  return svd.matrixV().rightCols(ac.cols() - rank);
}

inline Cplx cup_sum(const circlepat::VertexDomain& D, const circlepat::EdgeOneForm& a,
                    const circlepat::EdgeOneForm& b, int n_vertices) {
  Cplx s(0.0, 0.0);
  for (int v = 0; v < n_vertices; ++v) {
    s += circlepat::cup_product_cell(D, v, a, b).trace();
  }
  return s;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace test_support
