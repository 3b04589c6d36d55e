#pragma once

#include <string>
#include <vector>

#include "twistor/connection.hpp"

namespace twistor {

struct IdentityResult {
  std::string identity;
  int n;
  int trials;
  double max_residual;  // relative to the natural homogeneity scale of the inputs
};

inline const std::vector<std::string>& flat_identity_names() {
  static const std::vector<std::string> names = {"structure_equation", "curvature_zero", "bianchi",
                                                 "gauge_action", "adtors_same_torsion"};
  return names;
}

// Runs one identity of the flat model on `trials` random inputs.
template <typename Forms = FlatForms>
IdentityResult run_flat_identity(const std::string& identity, int n, int trials, std::uint64_t seed,
                                 const Forms& forms = {}) {
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    double residual = 0.0;
    double scale = 1.0;
    if (identity == "structure_equation") {
      const auto x = random_traceless(rng, n);
      const auto y = random_traceless(rng, n);
      residual = verify_structure_equation(x, y, forms).cwiseAbs().maxCoeff();
      scale = x.entries().norm() * y.entries().norm();
    } else if (identity == "curvature_zero") {
      const auto x = random_traceless(rng, n, Subalgebra::kChartStabilizer);
      const auto y = random_traceless(rng, n, Subalgebra::kChartStabilizer);
      residual = verify_curvature_zero(x, y, forms).max_abs();
      scale = x.entries().norm() * y.entries().norm();
    } else if (identity == "bianchi") {
      const auto x = random_traceless(rng, n);
      const auto y = random_traceless(rng, n);
      const auto z = random_traceless(rng, n);
      residual = verify_bianchi(x, y, z, forms).cwiseAbs().maxCoeff();
      scale = x.entries().norm() * y.entries().norm() * z.entries().norm();
    } else if (identity == "gauge_action") {
      const RealMatrix b = standard_normal_matrix(rng, 2, n);
      const auto x = random_traceless(rng, n);
      residual = gauge_action_check(b, x, forms).max_abs();
      scale = (1.0 + b.norm()) * (1.0 + b.norm()) * x.entries().norm();
    } else if (identity == "adtors_same_torsion") {
      const ComplexVector a = standard_normal_vector(rng, n).cast<Complex>() +
                              kI * standard_normal_vector(rng, n).cast<Complex>();
      const auto x = random_traceless(rng, n);
      const auto y = random_traceless(rng, n);
      residual = verify_adtors_same_torsion(a, x, y, forms).cwiseAbs().maxCoeff();
      scale = (1.0 + a.norm()) * x.entries().norm() * y.entries().norm();
    } else {
      throw std::invalid_argument("run_flat_identity: unknown identity " + identity);
    }
    worst = std::max(worst, residual / std::max(scale, 1.0));
  }
  return {identity, n, trials, worst};
}

template <typename Forms = FlatForms>
std::vector<IdentityResult> verify_flat_identities(const std::vector<int>& ns, int trials,
                                                   std::uint64_t seed, const Forms& forms = {}) {
  std::vector<IdentityResult> out;
  std::uint64_t stream = 0;
  for (int n : ns)
    for (const auto& name : flat_identity_names())
      out.push_back(run_flat_identity(name, n, trials, seed + 7919 * (++stream), forms));
  return out;
}

// Mutation used to check that the harness detects a wrong xi formula:
// the imaginary part of xi enters with the wrong sign.
struct CorruptedXiForms {
  AdaptedFormValues operator()(const RealMatrix& x) const {
    AdaptedFormValues f = FlatForms{}(x);
    f.xi = std::conj(f.xi);
    return f;
  }
};

}  // namespace twistor
