#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "twistor/errors.hpp"

namespace twistor {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Default tolerances. Every one of them is overridable through
// the functions that consume it.
struct Tolerances {
  double rank = 1e-9;         // real-point test, relative second singular value
  double det = 1e-10;         // smoothness, relative |det|
  double definite = 1e-9;     // pencil margin, relative to |A|
  double root = 1e-9;         // |Im(conj(a) b)| / (|a|^2 + |b|^2) boundary test
  double fd_step = 1e-5;      // finite-difference step
  double ill_condition = 1e10;
};

using Rng = std::mt19937_64;

inline RealVector standard_normal_vector(Rng& rng, Eigen::Index size) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = normal(rng);
  return v;
}

inline RealMatrix standard_normal_matrix(Rng& rng, Eigen::Index rows,
                                         Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix m(rows, cols);
  // Column-major fill keeps the draw order explicit.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// Ratio of smallest to largest singular value; 0 for the zero matrix.
template <typename Derived>
double inverse_condition(const Eigen::MatrixBase<Derived>& m) {
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

// Modified Gram-Schmidt on an ordered pair. The result spans the same
// oriented plane as (a, b): the change of frame is upper triangular with
// positive diagonal.
inline std::pair<RealVector, RealVector> gram_schmidt_pair(
    const RealVector& a, const RealVector& b, double rel_tol = 1e-12) {
  const double na = a.norm();
  if (!(na > 0.0)) throw RankDeficientBasis("gram_schmidt_pair: zero vector");
  RealVector u = a / na;
  RealVector v = b - u.dot(b) * u;
  const double nv = v.norm();
  if (!(nv > rel_tol * std::max(1.0, b.norm())))
    throw RankDeficientBasis("gram_schmidt_pair: dependent vectors");
  v /= nv;
  // Second pass for orthogonality at machine precision.
  v -= u.dot(v) * u;
  v.normalize();
  return {u, v};
}

// Orthonormalizes the columns of m in order (modified Gram-Schmidt).
inline RealMatrix gram_schmidt_columns(RealMatrix m, double rel_tol = 1e-12) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double original = m.col(j).norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < j; ++k)
        m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
    const double nrm = m.col(j).norm();
    if (!(nrm > rel_tol * original))
      throw RankDeficientBasis("gram_schmidt_columns: dependent columns");
    m.col(j) /= nrm;
  }
  return m;
}

}  // namespace twistor
