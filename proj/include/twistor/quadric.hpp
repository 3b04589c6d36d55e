#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "twistor/common.hpp"

namespace twistor {

// Complex quadric {z : z^T A z = 0} in CP^{N-1}, A symmetric, up to scale.
class Quadric {
 public:
  explicit Quadric(const ComplexMatrix& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 2)
      throw DimensionMismatch("Quadric: expected a square matrix of size >= 2");
    if (!matrix.allFinite()) throw std::invalid_argument("Quadric: non-finite entries");
    matrix_ = 0.5 * (matrix + matrix.transpose());
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  int ambient_n() const { return static_cast<int>(matrix_.rows()) - 2; }
  RealMatrix real_part() const { return matrix_.real(); }
  RealMatrix imag_part() const { return matrix_.imag(); }

  double spectral_norm() const {
    Eigen::JacobiSVD<ComplexMatrix> svd(matrix_);
    return svd.singularValues()[0];
  }

  // Equality as points of the projective space of symmetric forms.
  bool equivalent(const Quadric& other, double tol = 1e-9) const {
    if (other.dimension() != dimension()) return false;
    const double na = matrix_.squaredNorm();
    if (!(na > 0.0)) return other.matrix_.squaredNorm() == 0.0;
    const Complex c = (matrix_.conjugate().cwiseProduct(other.matrix_)).sum() / na;
    return (other.matrix_ - c * matrix_).norm() <= tol * other.matrix_.norm();
  }

 private:
  ComplexMatrix matrix_;
};

// Real-congruence normal form B^T A B = scale * diag(exp(i phases)).
struct PencilNormalForm {
  RealMatrix basis;
  Complex scale;
  std::vector<double> phases;
};

inline Complex polarize(const Quadric& q, const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != q.dimension() || v.size() != q.dimension())
    throw DimensionMismatch("polarize: vector length does not match quadric");
  return (u.transpose() * q.matrix() * v)(0, 0);
}

inline Complex evaluate(const Quadric& q, const ComplexVector& z) { return polarize(q, z, z); }

// Scale-invariant test: prod(sigma_i / sigma_max) = |det A| / |A|^N.
inline bool is_smooth(const Quadric& q, double eps_det = Tolerances{}.det) {
  Eigen::JacobiSVD<ComplexMatrix> svd(q.matrix());
  const auto& s = svd.singularValues();
  if (!(s[0] > 0.0)) return false;
  double rel = 1.0;
  for (Eigen::Index k = 1; k < s.size(); ++k) rel *= s[k] / s[0];
  return rel > eps_det;
}

inline void require_smooth(const Quadric& q, const char* where,
                           double eps_det = Tolerances{}.det) {
  if (!is_smooth(q, eps_det))
    throw DegenerateQuadric(std::string(where) + ": quadric is singular");
}

// Best member cos(t) S + sin(t) T of the real pencil spanned by A = S + iT.
struct PencilScan {
  double angle = 0.0;
  double margin = 0.0;  // lambda_min of the best member divided by |A|
};

namespace detail {

inline RealMatrix pencil_member(const RealMatrix& s, const RealMatrix& t, double angle) {
  return std::cos(angle) * s + std::sin(angle) * t;
}

inline double min_eigenvalue(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace detail

// Maximizes lambda_min over the pencil: 720-point grid, then golden-section
// refinement inside the bracketing grid cells.
inline PencilScan scan_pencil(const Quadric& q) {
  const RealMatrix s = q.real_part();
  const RealMatrix t = q.imag_part();
  const double norm = q.spectral_norm();
  if (!(norm > 0.0)) return {};
  constexpr int kGrid = 720;
  const double step = 2.0 * std::numbers::pi / kGrid;
  auto f = [&](double angle) {
    return detail::min_eigenvalue(detail::pencil_member(s, t, angle));
  };
  int best = 0;
  double best_value = f(0.0);
  for (int k = 1; k < kGrid; ++k) {
    const double value = f(k * step);
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  double angle = 0.5 * (lo + hi);
  double value = f(angle);
  if (best_value > value) {
    angle = best * step;
    value = best_value;
  }
  angle = std::fmod(angle + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  return {angle, value / norm};
}

// No real points iff some pencil member is positive definite (N >= 3).
inline bool has_real_points(const Quadric& q, const Tolerances& tol = {}) {
  if (q.dimension() < 3)
    throw AmbientTooSmall("has_real_points: pencil criterion needs dimension >= 3");
  require_smooth(q, "has_real_points", tol.det);
  return !(scan_pencil(q).margin > tol.definite);
}

// Simultaneous congruence diagonalization through a definite pencil member.
inline PencilNormalForm normal_form(const Quadric& q, const Tolerances& tol = {}) {
  require_smooth(q, "normal_form", tol.det);
  const PencilScan scan = scan_pencil(q);
  if (!(scan.margin > tol.definite))
    throw HasRealPoints("normal_form: no definite pencil member");
  const Complex rotation = std::polar(1.0, -scan.angle);
  const ComplexMatrix rotated = rotation * q.matrix();
  const RealMatrix definite = 0.5 * (rotated.real() + rotated.real().transpose());
  const RealMatrix companion = 0.5 * (rotated.imag() + rotated.imag().transpose());

  Eigen::LLT<RealMatrix> llt(definite);
  if (llt.info() != Eigen::Success)
    throw HasRealPoints("normal_form: Cholesky of the definite member failed");
  const RealMatrix l_inv = llt.matrixL().solve(
      RealMatrix::Identity(q.dimension(), q.dimension()));
  RealMatrix reduced = l_inv * companion * l_inv.transpose();
  reduced = 0.5 * (reduced + reduced.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(reduced);
  // B0^T P B0 = I and B0^T C B0 = diag(d), hence
  // B0^T A B0 = e^{i angle} diag(1 + i d_k).
  RealMatrix b0 = l_inv.transpose() * es.eigenvectors();
  const RealVector& d = es.eigenvalues();
  const Eigen::Index n = q.dimension();

  std::vector<double> theta(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    theta[k] = std::atan(d[k]);
    b0.col(k) /= std::pow(1.0 + d[k] * d[k], 0.25);
  }
  const double theta_min = *std::min_element(theta.begin(), theta.end());

  std::vector<double> phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double p = std::fmod(theta[k] - theta_min, std::numbers::pi);
    if (p < 0.0) p += std::numbers::pi;
    if (std::numbers::pi - p < 1e-10) p = 0.0;
    phases[k] = p;
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return phases[a] < phases[b]; });

  PencilNormalForm out;
  out.basis.resize(n, n);
  out.phases.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.basis.col(k) = b0.col(order[k]);
    out.phases[k] = phases[order[k]];
  }
  // Unit spectral norm for B makes |scale| carry the size of A.
  Eigen::JacobiSVD<RealMatrix> svd(out.basis);
  const double bn = svd.singularValues()[0];
  out.basis /= bn;
  out.scale = std::polar(1.0 / (bn * bn), scan.angle + theta_min);
  return out;
}

// |B^T A B - s diag(e^{i p_k})| / |A| (Frobenius norms).
inline double normal_form_residual(const Quadric& q, const PencilNormalForm& nf) {
  const Eigen::Index n = q.dimension();
  ComplexVector diag(n);
  for (Eigen::Index k = 0; k < n; ++k) diag[k] = nf.scale * std::polar(1.0, nf.phases[k]);
  const ComplexMatrix b = nf.basis.cast<Complex>();
  const ComplexMatrix lhs = b.transpose() * q.matrix() * b;
  return (lhs - ComplexMatrix(diag.asDiagonal())).norm() / q.matrix().norm();
}

// Matrix of tangent hyperplanes: A^{-1}.
inline Quadric dual(const Quadric& q, const Tolerances& tol = {}) {
  require_smooth(q, "dual", tol.det);
  return Quadric(q.matrix().inverse());
}

// B^T A B on the span of the columns of B.
inline Quadric restrict_to(const Quadric& q, const RealMatrix& basis) {
  if (basis.rows() != q.dimension())
    throw DimensionMismatch("restrict: basis rows do not match quadric");
  if (basis.cols() < 2) throw RankDeficientBasis("restrict: need at least 2 columns");
  if (!(inverse_condition(basis) > 1e-12))
    throw RankDeficientBasis("restrict: columns are linearly dependent");
  const ComplexMatrix b = basis.cast<Complex>();
  return Quadric(b.transpose() * q.matrix() * b);
}

// A random real-point-free quadric with its generation record.
struct PlantedQuadric {
  Quadric quadric;
  std::vector<double> phases;
  RealMatrix congruence;
};

inline constexpr double kPhaseGap = 0.2;
inline constexpr double kMaxCongruenceCondition = 20.0;

inline RealMatrix random_well_conditioned(Rng& rng, Eigen::Index size) {
  for (;;) {
    RealMatrix g = standard_normal_matrix(rng, size, size);
    if (inverse_condition(g) >= 1.0 / kMaxCongruenceCondition) return g;
  }
}

// Phases p_1 = 0, p_k uniform in [0, pi - gap), congruence G^T D G.
inline PlantedQuadric random_real_point_free_record(int n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("random_real_point_free: n must be >= 0");
  const Eigen::Index size = n + 2;
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, std::numbers::pi - kPhaseGap);
  std::vector<double> phases(size, 0.0);
  for (Eigen::Index k = 1; k < size; ++k) phases[k] = uniform(rng);
  std::sort(phases.begin(), phases.end());
  ComplexVector diag(size);
  for (Eigen::Index k = 0; k < size; ++k) diag[k] = std::polar(1.0, phases[k]);
  RealMatrix g = random_well_conditioned(rng, size);
  const ComplexMatrix gc = g.cast<Complex>();
  Quadric q(gc.transpose() * diag.asDiagonal() * gc);
  return {std::move(q), std::move(phases), std::move(g)};
}

inline Quadric random_real_point_free(int n, std::uint64_t seed) {
  return random_real_point_free_record(n, seed).quadric;
}

// Random complex symmetric form forced to vanish at a random real unit
// vector. Returns the quadric together with the planted zero.
inline std::pair<Quadric, RealVector> random_with_real_point(int n, std::uint64_t seed) {
  const Eigen::Index size = n + 2;
  Rng rng(seed);
  ComplexMatrix a = standard_normal_matrix(rng, size, size).cast<Complex>() +
                    kI * standard_normal_matrix(rng, size, size).cast<Complex>();
  a = 0.5 * (a + a.transpose()).eval();
  RealVector x = standard_normal_vector(rng, size).normalized();
  const ComplexVector xc = x.cast<Complex>();
  const Complex value = (xc.transpose() * a * xc)(0, 0);
  a -= value * (xc * xc.transpose());
  return {Quadric(a), x};
}

}  // namespace twistor
