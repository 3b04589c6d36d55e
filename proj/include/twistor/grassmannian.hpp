#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "twistor/projective.hpp"

namespace twistor {

inline OrientedPlane random_plane(Rng& rng, int n) {
  const Eigen::Index size = n + 2;
  for (;;) {
    RealVector a = standard_normal_vector(rng, size);
    RealVector b = standard_normal_vector(rng, size);
    try {
      return OrientedPlane(a, b);
    } catch (const RankDeficientBasis&) {
    }
  }
}

inline OrientedPlane random_plane(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_plane(rng, n);
}

inline std::vector<OrientedPlane> random_planes(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<OrientedPlane> planes;
  planes.reserve(count);
  for (int i = 0; i < count; ++i) planes.push_back(random_plane(rng, n));
  return planes;
}

// Orthonormal basis of the orthogonal complement, deterministic in the frame.
inline RealMatrix complement_basis(const OrientedPlane& plane) {
  const Eigen::Index size = plane.dimension();
  Eigen::HouseholderQR<RealMatrix> qr(plane.frame());
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(size, size);
  return q.rightCols(size - 2);
}

// Graph chart around a base plane: coordinates X (n x 2) move the frame to
// (u + C X_1, v + C X_2), then Gram-Schmidt.
inline OrientedPlane chart_frame(const OrientedPlane& base, const RealMatrix& complement,
                                 const RealMatrix& coords) {
  if (coords.rows() != complement.cols() || coords.cols() != 2)
    throw DimensionMismatch("chart_frame: coordinates must be n x 2");
  return OrientedPlane(base.u() + complement * coords.col(0),
                       base.v() + complement * coords.col(1));
}

// Inverse of chart_frame. The plane must be in the chart domain: its
// projection onto the base is invertible and orientation-preserving.
inline RealMatrix chart_coordinates(const OrientedPlane& base, const RealMatrix& complement,
                                    const OrientedPlane& plane) {
  const RealMatrix base_frame = base.frame();
  const RealMatrix frame = plane.frame();
  const Eigen::Matrix2d overlap = base_frame.transpose() * frame;
  if (!(overlap.determinant() > 1e-12))
    throw StepTooLarge("chart_coordinates: plane outside the chart domain");
  // Columns of frame * overlap^{-1} have the form (u + C x1, v + C x2).
  const RealMatrix graph = frame * overlap.inverse();
  return complement.transpose() * graph;
}

struct PlaneChart {
  OrientedPlane base;
  RealMatrix complement;
  RealMatrix directions;  // n x 2
  double scale;
};

inline PlaneChart make_chart(const OrientedPlane& base, const RealMatrix& directions,
                             double scale = 0.5) {
  RealMatrix complement = complement_basis(base);
  if (directions.rows() != complement.cols() || directions.cols() != 2)
    throw DimensionMismatch("make_chart: directions must be n x 2");
  if (!(scale > 0.0)) throw std::invalid_argument("make_chart: scale must be positive");
  return {base, std::move(complement), directions, scale};
}

inline OrientedPlane chart_point(const PlaneChart& chart, double t) {
  if (!(std::abs(t) < chart.scale)) throw StepTooLarge("chart_point: |t| >= chart scale");
  return chart_frame(chart.base, chart.complement, t * chart.directions);
}

// Central difference with one Richardson pass: (4 D(h/2) - D(h)) / 3.
template <typename F>
auto richardson_derivative(const F& f, double step) {
  auto central = [&](double h) { return ((f(h) - f(-h)) / (2.0 * h)).eval(); };
  return ((4.0 * central(0.5 * step) - central(step)) / 3.0).eval();
}

// Tangent map at curve(0) as an n x 2 matrix, i.e. the element of
// Hom(plane, plane^perp) in the frame of curve(0) and its complement basis.
inline RealMatrix numerical_tangent(const std::function<OrientedPlane(double)>& curve,
                                    double step = Tolerances{}.fd_step) {
  const OrientedPlane base = curve(0.0);
  const RealMatrix complement = complement_basis(base);
  return richardson_derivative(
      [&](double t) { return chart_coordinates(base, complement, curve(t)); }, step);
}

// Jacobian of X -> projector(chart_frame(X)) at X = 0; rank 2n.
inline RealMatrix chart_jacobian(const OrientedPlane& base, double step = Tolerances{}.fd_step) {
  const RealMatrix complement = complement_basis(base);
  const Eigen::Index n = complement.cols();
  const Eigen::Index size = base.dimension();
  RealMatrix jac(size * size, 2 * n);
  for (Eigen::Index j = 0; j < 2; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      RealMatrix dir = RealMatrix::Zero(n, 2);
      dir(i, j) = 1.0;
      const RealMatrix d = richardson_derivative(
          [&](double t) { return chart_frame(base, complement, t * dir).projector(); }, step);
      jac.col(j * n + i) = Eigen::Map<const RealVector>(d.data(), d.size());
    }
  return jac;
}

inline int numerical_rank(const RealMatrix& m, double rel_tol = 1e-6) {
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s[0] > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > rel_tol * s[0]) ++rank;
  return rank;
}

// Surface of planes containing a fixed line (the line is stored up to sign).
struct BetaSurface {
  RealVector line;

  bool contains(const OrientedPlane& plane, double tol = 1e-12) const {
    return (line - plane.projector() * line).norm() <= tol;
  }
};

// w holds (w(u), w(v)); the line is ker(w) in the plane.
inline BetaSurface beta_surface_through(const OrientedPlane& plane, const Eigen::Vector2d& w) {
  if (!(w.norm() > 0.0)) throw ZeroCovector("beta_surface_through: zero covector");
  const RealVector line = w[1] * plane.u() - w[0] * plane.v();
  return {line.normalized()};
}

// Oriented planes span(line, m) for random unit m orthogonal to the line,
// alternating both orientations.
inline std::vector<OrientedPlane> beta_surface_sample(const BetaSurface& surface, int count,
                                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<OrientedPlane> out;
  out.reserve(count);
  const RealVector& l = surface.line;
  while (static_cast<int>(out.size()) < count) {
    RealVector m = standard_normal_vector(rng, l.size());
    m -= l.dot(m) * l;
    if (!(m.norm() > 1e-8)) continue;
    m.normalize();
    if (out.size() % 2 == 0)
      out.emplace_back(l, m);
    else
      out.emplace_back(m, l);
  }
  return out;
}

// Curve through member inside the beta surface: the member's frame is
// rotated in the span of m and d, where m is the unit vector of the member
// orthogonal to the line. The line stays fixed and curve(0) = member.
inline std::function<OrientedPlane(double)> beta_curve(const BetaSurface& surface,
                                                       const OrientedPlane& member,
                                                       const RealVector& d) {
  const RealVector l = surface.line;
  RealVector m = member.u() - l.dot(member.u()) * l;
  if (m.norm() < 0.5) m = member.v() - l.dot(member.v()) * l;
  m.normalize();
  const RealVector dir = (d - member.projector() * d).normalized();
  const RealVector u = member.u();
  const RealVector v = member.v();
  return [m, dir, u, v](double t) {
    const RealVector step = (std::cos(t) - 1.0) * m + std::sin(t) * dir;
    return OrientedPlane(u + u.dot(m) * step, v + v.dot(m) * step);
  };
}

// Frame coordinates (line.u, line.v) of the line in the member.
inline Eigen::Vector2d line_in_frame(const BetaSurface& surface, const OrientedPlane& member) {
  return {surface.line.dot(member.u()), surface.line.dot(member.v())};
}

// |A l| / |A| for a tangent map A at member; zero for beta-plane tangents.
inline double beta_kernel_residual(const RealMatrix& tangent, const Eigen::Vector2d& line) {
  const double scale = tangent.norm();
  if (!(scale > 0.0)) return 0.0;
  return (tangent * line).norm() / scale;
}

// Planes inside a fixed 3-space (orthonormal basis in the columns).
struct AlphaSurface {
  RealMatrix basis;  // (n + 2) x 3

  bool contains(const OrientedPlane& plane, double tol = 1e-12) const {
    const RealMatrix proj = basis * basis.transpose();
    return (plane.u() - proj * plane.u()).norm() <= tol &&
           (plane.v() - proj * plane.v()).norm() <= tol;
  }

  std::vector<OrientedPlane> sample(int count, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<OrientedPlane> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
      try {
        out.emplace_back(basis * standard_normal_vector(rng, 3),
                         basis * standard_normal_vector(rng, 3));
      } catch (const RankDeficientBasis&) {
      }
    }
    return out;
  }
};

inline AlphaSurface alpha_surface_through(const OrientedPlane& plane, const RealVector& w3) {
  if (w3.size() != plane.dimension())
    throw DimensionMismatch("alpha_surface_through: vector size");
  const RealVector normal = w3 - plane.projector() * w3;
  if (!(normal.norm() > 1e-10 * std::max(1.0, w3.norm())))
    throw VectorInPlane("alpha_surface_through: vector lies in the plane");
  RealMatrix basis(plane.dimension(), 3);
  basis << plane.u(), plane.v(), normal.normalized();
  return {basis};
}

// Curve through member inside the 3-space: rotate the member about an axis
// of the 3-space (angle t, axis given in 3-space coordinates).
inline std::function<OrientedPlane(double)> alpha_curve(const AlphaSurface& surface,
                                                        const OrientedPlane& member,
                                                        const Eigen::Vector3d& axis) {
  const RealMatrix e = surface.basis;
  const Eigen::Vector3d a = e.transpose() * member.u();
  const Eigen::Vector3d b = e.transpose() * member.v();
  const Eigen::Vector3d k = axis.normalized();
  return [e, a, b, k](double t) {
    const Eigen::AngleAxisd rot(t, k);
    return OrientedPlane(e * (rot * a), e * (rot * b));
  };
}

}  // namespace twistor
