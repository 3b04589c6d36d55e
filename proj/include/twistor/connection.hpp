#pragma once

#include <cmath>
#include <vector>

#include "twistor/grassmannian.hpp"
#include "twistor/twistor_map.hpp"

namespace twistor {

// Element of sl(n+2), the Lie algebra of the flat model's symmetry group.
class TracelessMatrix {
 public:
  explicit TracelessMatrix(RealMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 3)
      throw DimensionMismatch("TracelessMatrix: expected a square matrix of size >= 3");
    if (std::abs(entries_.trace()) > 1e-14 * std::max(entries_.norm(), 1e-300))
      throw std::invalid_argument("TracelessMatrix: trace is not zero");
  }

  // Removes the trace part; the projection PGL -> sl of a gl element.
  static TracelessMatrix project(const RealMatrix& m) {
    RealMatrix x = m;
    x.diagonal().array() -= m.trace() / static_cast<double>(m.rows());
    return TracelessMatrix(std::move(x));
  }

  const RealMatrix& entries() const { return entries_; }
  int n() const { return static_cast<int>(entries_.rows()) - 2; }

 private:
  RealMatrix entries_;
};

struct MCBlocks {
  Eigen::Matrix2d alpha;
  RealMatrix beta;   // 2 x n
  RealMatrix eta;    // n x 2
  RealMatrix gamma;  // n x n
};

inline MCBlocks mc_blocks(const TracelessMatrix& x, int n) {
  if (x.n() != n) throw DimensionMismatch("mc_blocks: matrix size is not n + 2");
  const RealMatrix& m = x.entries();
  return {m.topLeftCorner(2, 2), m.topRightCorner(2, n), m.bottomLeftCorner(n, 2),
          m.bottomRightCorner(n, n)};
}

inline RealMatrix assemble(const MCBlocks& b) {
  const Eigen::Index n = b.gamma.rows();
  RealMatrix m(n + 2, n + 2);
  m << b.alpha, b.beta, b.eta, b.gamma;
  return m;
}

// Values of the flat model's canonical and connection forms on one vector.
struct AdaptedFormValues {
  double omega;
  Complex xi;
  RealMatrix phi;      // n x n
  ComplexVector zeta;  // n
};

// omega = alpha^2_1, 2 xi = (alpha^1_2 + alpha^2_1) + i (alpha^2_2 - alpha^1_1),
// phi = gamma - alpha^2_2 I, zeta = i (eta_1 + i eta_2).
struct FlatForms {
  AdaptedFormValues operator()(const RealMatrix& x) const {
    const Eigen::Index n = x.rows() - 2;
    const auto a = x.topLeftCorner(2, 2);
    const auto eta = x.bottomLeftCorner(n, 2);
    AdaptedFormValues f;
    f.omega = a(1, 0);
    f.xi = 0.5 * Complex(a(0, 1) + a(1, 0), a(1, 1) - a(0, 0));
    f.phi = x.bottomRightCorner(n, n) - a(1, 1) * RealMatrix::Identity(n, n);
    f.zeta = kI * (eta.col(0).cast<Complex>() + kI * eta.col(1).cast<Complex>());
    return f;
  }
};

inline AdaptedFormValues flat_forms(const TracelessMatrix& x) { return FlatForms{}(x.entries()); }

inline RealMatrix bracket(const RealMatrix& x, const RealMatrix& y) { return x * y - y * x; }

// Exterior derivative of a left-invariant 1-form: d mu(X, Y) = -mu([X, Y]).
template <typename Form>
auto d_left_invariant(const Form& form, const RealMatrix& x, const RealMatrix& y) {
  auto value = form(bracket(x, y));
  return decltype(value)(-value);
}

// Wedge of two 1-forms (mu ^ nu)(X, Y) = mu(X) nu(Y) - mu(Y) nu(X), with an
// arbitrary bilinear product for matrix- and vector-valued forms.
template <typename Mu, typename Nu, typename Product>
auto wedge(const Mu& mu, const Nu& nu, const RealMatrix& x, const RealMatrix& y,
           const Product& product) {
  auto lhs = product(mu(x), nu(y));
  auto rhs = product(mu(y), nu(x));
  return decltype(lhs)(lhs - rhs);
}

enum class Subalgebra {
  kFull,              // all of sl(n+2)
  kChartStabilizer,   // beta block zero: affine maps of the graph chart
};

inline TracelessMatrix random_traceless(Rng& rng, int n, Subalgebra which = Subalgebra::kFull) {
  RealMatrix m = standard_normal_matrix(rng, n + 2, n + 2);
  if (which == Subalgebra::kChartStabilizer) m.topRightCorner(2, n).setZero();
  return TracelessMatrix::project(m);
}

// Torsion 2-form tau(X, Y) read off from the structure equation
// d zeta = -(i (omega - xi) I + phi) ^ zeta - i xi I ^ conj(zeta) + tau.
template <typename Forms = FlatForms>
ComplexVector torsion(const RealMatrix& x, const RealMatrix& y, const Forms& forms = {}) {
  const AdaptedFormValues fx = forms(x);
  const AdaptedFormValues fy = forms(y);
  const Eigen::Index n = fx.zeta.size();
  auto connection = [n](const AdaptedFormValues& f) {
    return ComplexMatrix(kI * (f.omega - f.xi) * ComplexMatrix::Identity(n, n) +
                         f.phi.cast<Complex>());
  };
  const ComplexVector dzeta = -forms(bracket(x, y)).zeta;
  return dzeta + (connection(fx) * fy.zeta - connection(fy) * fx.zeta) +
         kI * (fx.xi * fy.zeta.conjugate() - fy.xi * fx.zeta.conjugate());
}

template <typename Forms = FlatForms>
ComplexVector verify_structure_equation(const TracelessMatrix& x, const TracelessMatrix& y,
                                        const Forms& forms = {}) {
  return torsion(x.entries(), y.entries(), forms);
}

struct CurvatureValues {
  double omega;      // Omega(X, Y)
  Complex xi;        // Xi(X, Y)
  RealMatrix phi;    // Phi(X, Y)

  double max_abs() const {
    return std::max({std::abs(omega), std::abs(xi), phi.cwiseAbs().maxCoeff()});
  }
};

template <typename Forms = FlatForms>
CurvatureValues curvature(const RealMatrix& x, const RealMatrix& y, const Forms& forms = {}) {
  const AdaptedFormValues fx = forms(x);
  const AdaptedFormValues fy = forms(y);
  const AdaptedFormValues fb = forms(bracket(x, y));
  const Eigen::Index n = fx.zeta.size();
  CurvatureValues c;
  // Omega = d omega + omega ^ i (xi - conj xi), with i (xi - conj xi) = -2 Im xi.
  c.omega = -fb.omega + (fx.omega * (-2.0 * fy.xi.imag()) - fy.omega * (-2.0 * fx.xi.imag()));
  // Xi = d xi + xi ^ i (conj xi - 2 omega).
  c.xi = -fb.xi + (fx.xi * kI * (std::conj(fy.xi) - 2.0 * fy.omega) -
                   fy.xi * kI * (std::conj(fx.xi) - 2.0 * fx.omega));
  // Phi = d phi + phi ^ phi - omega ^ (xi + conj xi) I.
  c.phi = -fb.phi + (fx.phi * fy.phi - fy.phi * fx.phi) -
          (fx.omega * 2.0 * fy.xi.real() - fy.omega * 2.0 * fx.xi.real()) *
              RealMatrix::Identity(n, n);
  return c;
}

// Curvature of the flat connection; vanishes on the chart-stabilizer
// subalgebra, where the forms are the flat affine connection itself.
template <typename Forms = FlatForms>
CurvatureValues verify_curvature_zero(const TracelessMatrix& x, const TracelessMatrix& y,
                                      const Forms& forms = {}) {
  return curvature(x.entries(), y.entries(), forms);
}

// d tau - (i (Omega - Xi) I + Phi) ^ zeta - i Xi I ^ conj(zeta) on (X, Y, Z).
template <typename Forms = FlatForms>
ComplexVector verify_bianchi(const TracelessMatrix& xt, const TracelessMatrix& yt,
                             const TracelessMatrix& zt, const Forms& forms = {}) {
  const RealMatrix& x = xt.entries();
  const RealMatrix& y = yt.entries();
  const RealMatrix& z = zt.entries();
  // d of a left-invariant 2-form.
  const ComplexVector dtau = -torsion(bracket(x, y), z, forms) +
                             torsion(bracket(x, z), y, forms) -
                             torsion(bracket(y, z), x, forms);
  auto term = [&](const RealMatrix& a, const RealMatrix& b, const RealMatrix& c) {
    const CurvatureValues k = curvature(a, b, forms);
    const ComplexVector zeta = forms(c).zeta;
    const Eigen::Index n = zeta.size();
    const ComplexMatrix m =
        kI * Complex(k.omega) * ComplexMatrix::Identity(n, n) -
        kI * k.xi * ComplexMatrix::Identity(n, n) + k.phi.cast<Complex>();
    return ComplexVector(m * zeta + kI * k.xi * zeta.conjugate());
  };
  // (C ^ mu)(X, Y, Z) = C(X, Y) mu(Z) + C(Y, Z) mu(X) + C(Z, X) mu(Y).
  return dtau - (term(x, y, z) + term(y, z, x) + term(z, x, y));
}

// Gauge parameters a_k attached to the block b of a unipotent element.
// This is a_k = -i (b_1k - i b_2k); see the README for the sign convention.
inline ComplexVector gauge_parameters(const RealMatrix& b) {
  ComplexVector a(b.cols());
  for (Eigen::Index k = 0; k < b.cols(); ++k) a[k] = -kI * Complex(b(0, k), -b(1, k));
  return a;
}

// Forms shifted as in the transformation law under the unipotent subgroup,
// with constant complex parameters a_k.
template <typename Forms = FlatForms>
struct ShiftedForms {
  ComplexVector a;
  Forms base{};

  AdaptedFormValues operator()(const RealMatrix& x) const {
    AdaptedFormValues f = base(x);
    const Eigen::Index n = f.zeta.size();
    const ComplexVector zeta = f.zeta;
    double re_sum = 0.0;
    Complex xi_shift = 0.0;
    double omega_shift = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      omega_shift += a[k].real() * zeta[k].imag();
      xi_shift += std::conj(a[k]) * zeta[k];
      re_sum += a[k].real() * zeta[k].real();
    }
    f.omega += omega_shift;
    f.xi += xi_shift / (2.0 * kI);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index l = 0; l < n; ++l)
        f.phi(i, l) += (a[l] * zeta[i]).real() + (i == l ? re_sum : 0.0);
    return f;
  }
};

struct GaugeResiduals {
  double omega;
  double xi;
  double phi;
  double zeta;

  double max_abs() const { return std::max({omega, xi, phi, zeta}); }
};

// Right translation by h = [[I, b], [0, I]] pulls left-invariant forms back
// through X -> h^{-1} X h; compares with the shifted forms.
template <typename Forms = FlatForms>
GaugeResiduals gauge_action_check(const RealMatrix& b, const TracelessMatrix& xt,
                                  const Forms& forms = {}) {
  const int n = xt.n();
  if (b.rows() != 2 || b.cols() != n) throw DimensionMismatch("gauge_action_check: b must be 2 x n");
  RealMatrix h = RealMatrix::Identity(n + 2, n + 2);
  h.topRightCorner(2, n) = b;
  RealMatrix h_inv = RealMatrix::Identity(n + 2, n + 2);
  h_inv.topRightCorner(2, n) = -b;
  const AdaptedFormValues pulled = forms(h_inv * xt.entries() * h);
  const AdaptedFormValues expected =
      ShiftedForms<Forms>{gauge_parameters(b), forms}(xt.entries());
  const AdaptedFormValues original = forms(xt.entries());
  return {std::abs(pulled.omega - expected.omega), std::abs(pulled.xi - expected.xi),
          (pulled.phi - expected.phi).cwiseAbs().maxCoeff(),
          (pulled.zeta - original.zeta).cwiseAbs().maxCoeff()};
}

// Structure-equation residual of the connection shifted by constant a_k;
// zero because the shift does not change the torsion.
template <typename Forms = FlatForms>
ComplexVector verify_adtors_same_torsion(const ComplexVector& a, const TracelessMatrix& x,
                                         const TracelessMatrix& y, const Forms& forms = {}) {
  return torsion(x.entries(), y.entries(), ShiftedForms<Forms>{a, forms});
}

// Least-squares solution of xi_j = x_k zeta^k_j + y_k conj(zeta^k_j).
struct XiExpansion {
  ComplexVector holomorphic;       // x_k
  ComplexVector antiholomorphic;   // y_k
  double condition;
};

inline XiExpansion solve_xi_expansion(const ComplexVector& xi, const ComplexMatrix& zeta,
                                      double max_condition = Tolerances{}.ill_condition) {
  const Eigen::Index n = zeta.cols();
  ComplexMatrix m(zeta.rows(), 2 * n);
  m << zeta, zeta.conjugate();
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double condition = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : INFINITY;
  if (!(condition < max_condition))
    throw IllConditionedExpansion("solve_xi_expansion: zeta values are numerically dependent");
  const ComplexVector sol = svd.solve(xi);
  return {sol.head(n), sol.tail(n), condition};
}

struct TorsionReport {
  OrientedPlane plane;
  std::vector<double> zeta_bar_magnitudes;  // |y_k|
  double max_zeta_bar;
  double condition;
};

// Adapted lift of a section over the graph chart at plane: the first two
// columns are (Re z, Im z) with z = u + tau v, the rest project the base
// complement onto the moving complement.
inline RealMatrix adapted_lift(const Section& section, const OrientedPlane& base,
                               const RealMatrix& complement, const RealMatrix& coords) {
  const OrientedPlane plane = chart_frame(base, complement, coords);
  const Complex tau = fiber_coordinate(plane, section(plane));
  const Eigen::Index size = base.dimension();
  RealMatrix g(size, size);
  g.col(0) = plane.u() + tau.real() * plane.v();
  g.col(1) = tau.imag() * plane.v();
  const RealMatrix moved = (RealMatrix::Identity(size, size) - plane.projector()) * complement;
  g.rightCols(size - 2) = gram_schmidt_columns(moved);
  return g;
}

// Expands xi in zeta, conj(zeta) along the lift's velocities; the
// conj(zeta) coefficients vanish iff the section image is holomorphic.
inline TorsionReport reduction_torsion_test(const Section& section, const OrientedPlane& plane,
                                            double step = Tolerances{}.fd_step) {
  const RealMatrix complement = complement_basis(plane);
  const Eigen::Index n = complement.cols();
  const RealMatrix zero = RealMatrix::Zero(n, 2);
  const Eigen::PartialPivLU<RealMatrix> g0(adapted_lift(section, plane, complement, zero));
  ComplexVector xi(2 * n);
  ComplexMatrix zeta(2 * n, n);
  for (Eigen::Index j = 0; j < 2; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      RealMatrix dir = RealMatrix::Zero(n, 2);
      dir(i, j) = 1.0;
      const RealMatrix velocity = richardson_derivative(
          [&](double t) { return adapted_lift(section, plane, complement, t * dir); }, step);
      const AdaptedFormValues f =
          flat_forms(TracelessMatrix::project(g0.solve(velocity)));
      xi[j * n + i] = f.xi;
      zeta.row(j * n + i) = f.zeta.transpose();
    }
  const XiExpansion e = solve_xi_expansion(xi, zeta);
  TorsionReport out{plane, {}, 0.0, e.condition};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.zeta_bar_magnitudes.push_back(std::abs(e.antiholomorphic[k]));
    out.max_zeta_bar = std::max(out.max_zeta_bar, out.zeta_bar_magnitudes.back());
  }
  return out;
}

inline TorsionReport reduction_torsion_test(const Quadric& q, const OrientedPlane& plane,
                                            double step = Tolerances{}.fd_step) {
  return reduction_torsion_test(quadric_section(q), plane, step);
}

}  // namespace twistor
