#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <functional>
#include <vector>

#include "twistor/grassmannian.hpp"
#include "twistor/projective.hpp"
#include "twistor/quadric.hpp"

namespace twistor {

struct SectionSample {
  OrientedPlane plane;
  ProjectivePoint point;
  Complex tau;
};

// A local section of rho0. Implementations must be safe to call concurrently.
using Section = std::function<ProjectivePoint(const OrientedPlane&)>;

// Roots (alpha : beta) of c0 a^2 + 2 c1 a b + c2 b^2, via the cancellation-free
// branch of the quadratic formula. Roots at infinity (alpha = 0) appear as
// (0 : q) without special-casing.
inline std::array<std::pair<Complex, Complex>, 2> binary_roots(Complex c0, Complex c1, Complex c2) {
  Complex sq = std::sqrt(c1 * c1 - c0 * c2);
  if (std::real(std::conj(c1) * sq) < 0.0) sq = -sq;
  const Complex q = -(c1 + sq);
  const double scale = std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
  if (!(std::abs(q) > 1e-14 * scale))
    throw DegenerateQuadric("binary_roots: binary form has a repeated or indeterminate root");
  return {{{c2, q}, {q, c0}}};
}

// Im(conj(alpha) beta) / (|alpha|^2 + |beta|^2): the side of RP^1 a root is on.
inline double root_orientation(const std::pair<Complex, Complex>& root) {
  const auto& [a, b] = root;
  return std::imag(std::conj(a) * b) / (std::norm(a) + std::norm(b));
}

// The unique point of Q over plane: the root of Q restricted to the plane's
// complexification lying over the plane's own orientation.
inline SectionSample section_at(const Quadric& q, const OrientedPlane& plane,
                                const Tolerances& tol = {}) {
  if (plane.dimension() != q.dimension())
    throw DimensionMismatch("section_at: plane and quadric dimensions differ");
  const ComplexVector u = plane.u().cast<Complex>();
  const ComplexVector v = plane.v().cast<Complex>();
  const auto roots = binary_roots(evaluate(q, u), polarize(q, u, v), evaluate(q, v));
  int upper = -1;
  int upper_count = 0;
  for (int k = 0; k < 2; ++k) {
    const double m = root_orientation(roots[k]);
    if (std::abs(m) <= tol.root)
      throw HasRealPoints("section_at: restricted quadric has a real root");
    if (m > 0.0) {
      upper = k;
      ++upper_count;
    }
  }
  if (upper_count != 1)
    throw FiberMultiplicityError("section_at: expected exactly one root over the oriented plane, found " +
                                 std::to_string(upper_count));
  const auto [alpha, beta] = roots[upper];
  return {plane, ProjectivePoint(alpha * u + beta * v), beta / alpha};
}

inline Section quadric_section(const Quadric& q, const Tolerances& tol = {}) {
  return [q, tol](const OrientedPlane& plane) { return section_at(q, plane, tol).point; };
}

inline std::vector<SectionSample> section_sample(const Quadric& q, int count, std::uint64_t seed,
                                                 const Tolerances& tol = {}) {
  std::vector<SectionSample> out;
  out.reserve(count);
  for (const auto& plane : random_planes(q.ambient_n(), count, seed))
    out.push_back(section_at(q, plane, tol));
  return out;
}

// Frame field used to define frame-relative sections: the orthogonal
// projection of a fixed pair (r1, r2) onto the plane, orientation-corrected.
struct ReferencePair {
  RealVector r1;
  RealVector r2;
};

inline ReferencePair random_reference(int n, std::uint64_t seed) {
  Rng rng(seed);
  RealVector r1 = standard_normal_vector(rng, n + 2);
  RealVector r2 = standard_normal_vector(rng, n + 2);
  return {std::move(r1), std::move(r2)};
}

inline OrientedPlane reference_frame(const OrientedPlane& plane, const ReferencePair& ref) {
  const RealMatrix p = plane.projector();
  OrientedPlane frame(p * ref.r1, p * ref.r2);
  if (frame.orientation_against(plane) < 0.0) frame = OrientedPlane(frame.u(), -frame.v());
  return frame;
}

// [u + (tau + eps conj(tau)) v] in the reference frame field, tau being the
// fibre coordinate of the base section in that frame.
inline Section perturbed_section(Section base, double epsilon, ReferencePair ref) {
  return [base = std::move(base), epsilon, ref = std::move(ref)](const OrientedPlane& plane) {
    const OrientedPlane frame = reference_frame(plane, ref);
    const Complex tau = fiber_coordinate(frame, base(plane));
    return point_in_fiber(frame, tau + epsilon * std::conj(tau));
  };
}

// [u + tau v] with constant tau in the reference frame field.
inline Section constant_tau_section(Complex tau, ReferencePair ref) {
  return [tau, ref = std::move(ref)](const OrientedPlane& plane) {
    return point_in_fiber(reference_frame(plane, ref), tau);
  };
}

struct HolomorphyReport {
  OrientedPlane plane;
  double residual;        // |(I - P_T) J P_T|
  double wedge_residual;  // (n+1)-th singular value of the complexified basis
  double step;
  int tangent_rank;
};

namespace detail {

// Affine chart of CP^{N-1} dropping coordinate `drop`, realified as (Re, Im).
inline RealVector affine_realified(const ProjectivePoint& p, Eigen::Index drop) {
  const ComplexVector& z = p.coords();
  const Eigen::Index m = z.size() - 1;
  RealVector out(2 * m);
  Eigen::Index j = 0;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    if (k == drop) continue;
    const Complex w = z[k] / z[drop];
    out[j] = w.real();
    out[m + j] = w.imag();
    ++j;
  }
  return out;
}

inline RealMatrix complex_structure(Eigen::Index m) {
  RealMatrix j = RealMatrix::Zero(2 * m, 2 * m);
  j.block(m, 0, m, m) = RealMatrix::Identity(m, m);
  j.block(0, m, m, m) = -RealMatrix::Identity(m, m);
  return j;
}

}  // namespace detail

// Image tangent vectors of the section along the 2n graph-chart directions.
inline RealMatrix section_tangents(const Section& section, const OrientedPlane& plane,
                                   double step, Eigen::Index* drop_out = nullptr) {
  const Eigen::Index drop = section(plane).pivot();
  if (drop_out) *drop_out = drop;
  const RealMatrix complement = complement_basis(plane);
  const Eigen::Index n = complement.cols();
  const Eigen::Index m = plane.dimension() - 1;
  RealMatrix tangents(2 * m, 2 * n);
  for (Eigen::Index j = 0; j < 2; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      RealMatrix dir = RealMatrix::Zero(n, 2);
      dir(i, j) = 1.0;
      tangents.col(j * n + i) = richardson_derivative(
          [&](double t) {
            return detail::affine_realified(section(chart_frame(plane, complement, t * dir)), drop);
          },
          step);
    }
  return tangents;
}

// J-invariance defect of the section image at plane; zero iff the image is
// a complex submanifold there.
inline HolomorphyReport holomorphy_residual(const Section& section, const OrientedPlane& plane,
                                            double step = Tolerances{}.fd_step) {
  const RealMatrix tangents = section_tangents(section, plane, step);
  const Eigen::Index dim = tangents.cols();
  const Eigen::Index m = tangents.rows() / 2;
  Eigen::JacobiSVD<RealMatrix> svd(tangents, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > 1e-8 * s[0]) ++rank;
  if (rank < dim)
    throw RankDeficientTangent("holomorphy_residual: section is not immersive at the sample");
  const RealMatrix basis = svd.matrixU().leftCols(dim);
  const RealMatrix jb = detail::complex_structure(m) * basis;
  const RealMatrix defect = jb - basis * (basis.transpose() * jb);
  Eigen::JacobiSVD<RealMatrix> dsvd(defect);

  ComplexMatrix complexified(m, dim);
  complexified.real() = basis.topRows(m);
  complexified.imag() = basis.bottomRows(m);
  Eigen::JacobiSVD<ComplexMatrix> csvd(complexified);
  const auto& cs = csvd.singularValues();

  return {plane, dsvd.singularValues()[0], cs[cs.size() - 1], step, rank};
}

struct SweepSummary {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::vector<HolomorphyReport> reports;
};

inline SweepSummary holomorphy_sweep(const Section& section,
                                     const std::vector<OrientedPlane>& planes,
                                     double step = Tolerances{}.fd_step) {
  SweepSummary out;
  out.reports.reserve(planes.size());
  for (const auto& plane : planes) {
    out.reports.push_back(holomorphy_residual(section, plane, step));
    out.max_residual = std::max(out.max_residual, out.reports.back().residual);
    out.mean_residual += out.reports.back().residual;
  }
  if (!planes.empty()) out.mean_residual /= static_cast<double>(planes.size());
  return out;
}

inline SweepSummary holomorphy_sweep(const Quadric& q, int count, std::uint64_t seed,
                                     double step = Tolerances{}.fd_step) {
  return holomorphy_sweep(quadric_section(q), random_planes(q.ambient_n(), count, seed), step);
}

}  // namespace twistor
