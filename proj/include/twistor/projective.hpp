#pragma once

#include <cmath>
#include <utility>

#include "twistor/common.hpp"

namespace twistor {

// A point [z] of CP^{N-1}, N = n + 2, stored by any nonzero representative.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(ComplexVector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2)
      throw DimensionMismatch("ProjectivePoint: need at least 2 coordinates");
    if (!(coords_.norm() > 0.0) || !coords_.allFinite())
      throw std::invalid_argument("ProjectivePoint: coordinates must be finite and nonzero");
  }

  const ComplexVector& coords() const { return coords_; }
  Eigen::Index dimension() const { return coords_.size(); }
  int ambient_n() const { return static_cast<int>(coords_.size()) - 2; }

  // Index of the largest-modulus entry; ties go to the lowest index.
  Eigen::Index pivot() const {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < coords_.size(); ++k)
      if (std::abs(coords_[k]) > std::abs(coords_[best])) best = k;
    return best;
  }

  // Representative with the pivot entry equal to 1.
  ComplexVector canonical() const { return coords_ / coords_[pivot()]; }

  // Both points are normalized at this point's pivot, so near-ties in
  // modulus cannot select different charts for the two sides.
  bool approx_equal(const ProjectivePoint& other, double tol = 1e-10) const {
    if (other.dimension() != dimension()) return false;
    const Eigen::Index k = pivot();
    const Complex w = other.coords_[k];
    if (std::abs(w) <= tol * other.coords_.norm()) return false;
    return (coords_ / coords_[k] - other.coords_ / w).norm() <=
           tol * std::sqrt(static_cast<double>(dimension()));
  }

 private:
  ComplexVector coords_;
};

// Ordered orthonormal frame (u, v) of an oriented 2-plane in R^{n+2}.
// Construction from any spanning pair keeps the orientation of the pair.
class OrientedPlane {
 public:
  OrientedPlane(const RealVector& a, const RealVector& b) {
    if (a.size() != b.size() || a.size() < 2)
      throw DimensionMismatch("OrientedPlane: frame vectors differ in size");
    std::tie(u_, v_) = gram_schmidt_pair(a, b);
  }

  const RealVector& u() const { return u_; }
  const RealVector& v() const { return v_; }
  Eigen::Index dimension() const { return u_.size(); }
  int ambient_n() const { return static_cast<int>(u_.size()) - 2; }

  RealMatrix frame() const {
    RealMatrix f(u_.size(), 2);
    f << u_, v_;
    return f;
  }
  RealMatrix projector() const { return u_ * u_.transpose() + v_ * v_.transpose(); }

  OrientedPlane reversed() const { return OrientedPlane(v_, u_); }

  // Determinant of the 2x2 change of frame; +1 for equal oriented planes.
  double orientation_against(const OrientedPlane& other) const {
    return u_.dot(other.u_) * v_.dot(other.v_) - u_.dot(other.v_) * v_.dot(other.u_);
  }

  bool same_as(const OrientedPlane& other, double tol = 1e-10) const {
    if (other.dimension() != dimension()) return false;
    return (projector() - other.projector()).norm() <= tol &&
           orientation_against(other) > 0.0;
  }

 private:
  RealVector u_;
  RealVector v_;
};

// True iff Re z and Im z are linearly dependent (relative rank test).
inline bool is_real_point(const ProjectivePoint& p, double eps_rank = Tolerances{}.rank) {
  RealMatrix m(p.dimension(), 2);
  m.col(0) = p.coords().real();
  m.col(1) = p.coords().imag();
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const auto& s = svd.singularValues();
  return s[1] <= eps_rank * s[0];
}

// The twistor projection [z] -> oriented span(Re z, Im z).
inline OrientedPlane rho0(const ProjectivePoint& p, double eps_rank = Tolerances{}.rank) {
  if (is_real_point(p, eps_rank))
    throw RealPointError("rho0: point lies on RP^{n+1}");
  return OrientedPlane(p.coords().real(), p.coords().imag());
}

// [g_1 + i g_2] for an invertible real matrix g.
inline ProjectivePoint lambda_group(const RealMatrix& g) {
  if (g.rows() != g.cols() || g.rows() < 3)
    throw DimensionMismatch("lambda_group: expected a square matrix of size >= 3");
  if (!(inverse_condition(g) > 1e-13))
    throw SingularMatrixError("lambda_group: matrix is singular");
  ComplexVector z = g.col(0).cast<Complex>() + kI * g.col(1).cast<Complex>();
  return ProjectivePoint(std::move(z));
}

// [u + tau v] in the plane's stored frame.
inline ProjectivePoint point_in_fiber(const OrientedPlane& plane, Complex tau) {
  ComplexVector z = plane.u().cast<Complex>() + tau * plane.v().cast<Complex>();
  return ProjectivePoint(std::move(z));
}

// The unique tau with p = [u + tau v]; Im tau > 0 on the fibre over plane.
inline Complex fiber_coordinate(const OrientedPlane& plane, const ProjectivePoint& p,
                                double tol = 1e-9) {
  if (p.dimension() != plane.dimension())
    throw DimensionMismatch("fiber_coordinate: dimension mismatch");
  const ComplexVector& z = p.coords();
  const Complex alpha = plane.u().cast<Complex>().dot(z);
  const Complex beta = plane.v().cast<Complex>().dot(z);
  const ComplexVector rest =
      z - alpha * plane.u().cast<Complex>() - beta * plane.v().cast<Complex>();
  if (rest.norm() > tol * z.norm())
    throw FiberMismatchError("fiber_coordinate: point not in the complexified plane");
  const double orient = std::imag(std::conj(alpha) * beta);
  if (!(orient > tol * (std::norm(alpha) + std::norm(beta))))
    throw FiberMismatchError("fiber_coordinate: point lies over the opposite orientation or is real");
  return beta / alpha;
}

}  // namespace twistor
