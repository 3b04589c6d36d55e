#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "twistor/twistor.hpp"

using namespace twistor;

namespace {

constexpr double kPi = std::numbers::pi;

Quadric diag_phases(const std::vector<double>& phases) {
  ComplexVector d(phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) d[k] = std::polar(1.0, phases[k]);
  return Quadric(d.asDiagonal().toDenseMatrix());
}

Quadric real_diag(std::initializer_list<double> values) {
  RealVector d(values.size());
  Eigen::Index k = 0;
  for (double v : values) d[k++] = v;
  return Quadric(ComplexMatrix(d.cast<Complex>().asDiagonal()));
}

Complex random_scale(Rng& rng) {
  std::normal_distribution<double> normal;
  return {normal(rng), normal(rng)};
}

RealMatrix random_invertible(Rng& rng, int size) {
  for (;;) {
    RealMatrix g = standard_normal_matrix(rng, size, size);
    if (1.0 / inverse_condition(g) < 50.0) return g;
  }
}

// Orthonormal basis of a uniformly random k-dimensional subspace.
RealMatrix random_subspace(Rng& rng, int size, int k) {
  Eigen::HouseholderQR<RealMatrix> qr(standard_normal_matrix(rng, size, k));
  return qr.householderQ() * RealMatrix::Identity(size, k);
}

}  // namespace

TEST(Quadric, SymmetrizedOnConstruction) {
  ComplexMatrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  const Quadric q(a);
  EXPECT_EQ(q.matrix(), q.matrix().transpose());
  EXPECT_EQ(q.matrix()(0, 1), Complex(1.0));
}

TEST(Quadric, ScaleEquivalence) {
  Rng rng(1);
  const Quadric q = random_real_point_free(2, 4);
  EXPECT_TRUE(q.equivalent(Quadric(random_scale(rng) * q.matrix())));
  EXPECT_FALSE(q.equivalent(random_real_point_free(2, 5)));
}

TEST(Evaluate, Examples) {
  const Quadric id(ComplexMatrix::Identity(3, 3));
  ComplexVector z(3);
  z << 1.0, kI, 0.0;
  EXPECT_LT(std::abs(evaluate(id, z)), 1e-15);
  RealVector x(3);
  x << 1.0, -2.0, 0.5;
  EXPECT_NEAR(evaluate(id, x.cast<Complex>()).real(), x.squaredNorm(), 1e-14);
  const Quadric q = diag_phases({0.0, kPi / 2});
  EXPECT_LT(std::abs(evaluate(q, ComplexVector::Ones(2)) - Complex(1.0, 1.0)), 1e-15);
  EXPECT_THROW(evaluate(id, ComplexVector::Ones(4)), DimensionMismatch);
}

TEST(Polarize, ExamplesAndSymmetry) {
  const Quadric id(ComplexMatrix::Identity(3, 3));
  const ComplexVector e1 = ComplexVector::Unit(3, 0), e2 = ComplexVector::Unit(3, 1);
  EXPECT_EQ(polarize(id, e1, e2), Complex(0.0));
  EXPECT_EQ(polarize(id, e1, e1), Complex(1.0));
  Rng rng(2);
  const Quadric q = random_real_point_free(3, 2);
  for (int t = 0; t < 20; ++t) {
    const ComplexVector u = standard_normal_vector(rng, 5).cast<Complex>() +
                            kI * standard_normal_vector(rng, 5).cast<Complex>();
    const ComplexVector v = standard_normal_vector(rng, 5).cast<Complex>();
    EXPECT_LT(std::abs(polarize(q, u, v) - polarize(q, v, u)), 1e-12);
    EXPECT_LT(std::abs(polarize(q, u, u) - evaluate(q, u)), 1e-12);
  }
}

TEST(IsSmooth, Examples) {
  EXPECT_TRUE(is_smooth(Quadric(ComplexMatrix::Identity(4, 4))));
  EXPECT_FALSE(is_smooth(real_diag({1.0, 1.0, 1.0, 0.0})));
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const RealMatrix g = random_invertible(rng, 4);
    EXPECT_TRUE(is_smooth(Quadric((g.transpose() * g).cast<Complex>())));
  }
}

TEST(IsSmooth, ScaleInvariant) {
  const Quadric q = random_real_point_free(3, 9);
  for (double c : {1e-8, 1e-3, 1.0, 1e4, 1e9})
    EXPECT_TRUE(is_smooth(Quadric(c * q.matrix())));
  const Quadric d = real_diag({1.0, 1.0, 0.0});
  for (double c : {1e-8, 1.0, 1e9}) EXPECT_FALSE(is_smooth(Quadric(c * d.matrix())));
}

TEST(HasRealPoints, Examples) {
  EXPECT_FALSE(has_real_points(Quadric(ComplexMatrix::Identity(3, 3))));
  EXPECT_TRUE(has_real_points(real_diag({1.0, -1.0, 1.0})));
  EXPECT_FALSE(has_real_points(diag_phases({0.0, kPi / 3, kPi / 2})));
}

TEST(HasRealPoints, Errors) {
  EXPECT_THROW(has_real_points(real_diag({1.0, 1.0, 0.0})), DegenerateQuadric);
  EXPECT_THROW(has_real_points(Quadric(ComplexMatrix::Identity(2, 2))), AmbientTooSmall);
}

TEST(HasRealPoints, ScaleInvariant) {
  Rng rng(4);
  for (int seed = 0; seed < 20; ++seed) {
    const Quadric free = random_real_point_free(2, seed);
    const Quadric planted = random_with_real_point(2, seed).first;
    const Complex c = random_scale(rng);
    EXPECT_FALSE(has_real_points(Quadric(c * free.matrix())));
    EXPECT_TRUE(has_real_points(Quadric(c * planted.matrix())));
  }
}

TEST(HasRealPoints, AgreesWithSphereOracle) {
  for (int n = 1; n <= 3; ++n) {
    const RealMatrix sphere = oracle::halton_sphere(n + 2, 100000);
    for (int seed = 0; seed < 10; ++seed) {
      const Quadric free = random_real_point_free(n, seed);
      const Quadric planted = random_with_real_point(n, seed).first;
      EXPECT_EQ(has_real_points(free), oracle::oracle_has_real_points(free, sphere)) << n << ' ' << seed;
      EXPECT_EQ(has_real_points(planted), oracle::oracle_has_real_points(planted, sphere)) << n << ' ' << seed;
    }
  }
}

TEST(PlantedQuadric, PlantedVectorIsAZero) {
  for (int seed = 0; seed < 10; ++seed) {
    const auto [q, x] = random_with_real_point(3, seed);
    EXPECT_LT(std::abs(evaluate(q, x.cast<Complex>())), 1e-12 * q.spectral_norm());
    EXPECT_TRUE(is_smooth(q));
  }
}

TEST(NormalForm, IdentityHasZeroPhases) {
  const PencilNormalForm nf = normal_form(Quadric(ComplexMatrix::Identity(4, 4)));
  for (double p : nf.phases) EXPECT_NEAR(p, 0.0, 1e-12);
}

TEST(NormalForm, DiagonalRecoversPhases) {
  const std::vector<double> phases = {0.0, 0.3, 0.3, 1.1, 2.5};
  const Quadric q = diag_phases(phases);
  const PencilNormalForm nf = normal_form(q);
  ASSERT_EQ(nf.phases.size(), phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) EXPECT_NEAR(nf.phases[k], phases[k], 1e-9);
  EXPECT_LT(normal_form_residual(q, nf), 1e-10);
}

TEST(NormalForm, RotatedPhasesAreNormalized) {
  // e^{0.4 i} diag(e^{i p}) has the same phase list.
  const Quadric q(std::polar(1.0, 0.4) * diag_phases({0.0, 0.5, 1.7}).matrix());
  const PencilNormalForm nf = normal_form(q);
  EXPECT_NEAR(nf.phases[0], 0.0, 1e-12);
  EXPECT_NEAR(nf.phases[1], 0.5, 1e-9);
  EXPECT_NEAR(nf.phases[2], 1.7, 1e-9);
}

TEST(NormalForm, CongruenceRecoversPlantedPhases) {
  for (int n = 1; n <= 4; ++n)
    for (int seed = 0; seed < 20; ++seed) {
      const PlantedQuadric planted = random_real_point_free_record(n, seed);
      const PencilNormalForm nf = normal_form(planted.quadric);
      EXPECT_LT(normal_form_residual(planted.quadric, nf), 1e-8);
      ASSERT_EQ(nf.phases.size(), planted.phases.size());
      for (std::size_t k = 0; k < nf.phases.size(); ++k)
        EXPECT_NEAR(nf.phases[k], planted.phases[k], 1e-8);
      EXPECT_DOUBLE_EQ(nf.phases.front(), 0.0);
      EXPECT_TRUE(std::is_sorted(nf.phases.begin(), nf.phases.end()));
      EXPECT_LT(nf.phases.back(), kPi);
    }
}

TEST(NormalForm, PhasesInvariantUnderCongruenceAndScale) {
  Rng rng(6);
  for (int seed = 0; seed < 20; ++seed) {
    const Quadric q = random_real_point_free(3, 100 + seed);
    const RealMatrix g = random_invertible(rng, 5);
    const Quadric moved(random_scale(rng) * (g.transpose().cast<Complex>() * q.matrix() * g.cast<Complex>()));
    const auto a = normal_form(q).phases;
    const auto b = normal_form(moved).phases;
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-8);
  }
}

TEST(NormalForm, RejectsRealPoints) {
  EXPECT_THROW(normal_form(real_diag({1.0, -1.0, 1.0})), HasRealPoints);
  EXPECT_THROW(normal_form(real_diag({1.0, 1.0, 0.0})), DegenerateQuadric);
}

TEST(Dual, Examples) {
  const Quadric id(ComplexMatrix::Identity(3, 3));
  EXPECT_TRUE(dual(id).equivalent(id));
  const std::vector<double> p = {0.0, 0.7, 2.0, 2.9};
  std::vector<double> minus;
  for (double x : p) minus.push_back(-x);
  EXPECT_TRUE(dual(diag_phases(p)).equivalent(diag_phases(minus)));
  EXPECT_THROW(dual(real_diag({1.0, 0.0, 1.0})), DegenerateQuadric);
}

TEST(Dual, InvolutionAndNoRealPoints) {
  for (int seed = 0; seed < 30; ++seed) {
    const Quadric q = random_real_point_free(1 + seed % 3, seed);
    const Quadric d = dual(q);
    EXPECT_TRUE(dual(d).equivalent(q, 1e-8));
    EXPECT_TRUE(is_smooth(d));
    EXPECT_FALSE(has_real_points(d));
  }
}

TEST(Restrict, Examples) {
  RealMatrix b = RealMatrix::Zero(3, 2);
  b(0, 0) = 1.0;
  b(1, 1) = 1.0;
  EXPECT_TRUE(restrict_to(Quadric(ComplexMatrix::Identity(3, 3)), b).matrix().isApprox(ComplexMatrix::Identity(2, 2)));
  RealMatrix c = RealMatrix::Zero(3, 2);
  c(0, 0) = 1.0;
  c(2, 1) = 1.0;
  const Quadric r = restrict_to(diag_phases({0.0, 0.4, 1.3}), c);
  EXPECT_LT((r.matrix() - diag_phases({0.0, 1.3}).matrix()).norm(), 1e-15);
}

TEST(Restrict, RankDeficientThrows) {
  RealMatrix b = RealMatrix::Zero(4, 3);
  b(0, 0) = 1.0;
  b(1, 1) = 1.0;
  b.col(2) = b.col(0) + b.col(1);
  EXPECT_THROW(restrict_to(Quadric(ComplexMatrix::Identity(4, 4)), b), RankDeficientBasis);
  EXPECT_THROW(restrict_to(Quadric(ComplexMatrix::Identity(4, 4)), RealMatrix::Identity(4, 1)),
               RankDeficientBasis);
}

TEST(Restrict, RandomSubspacesStayRealPointFree) {
  Rng rng(7);
  for (int seed = 0; seed < 30; ++seed) {
    const int n = 1 + seed % 4;
    const Quadric q = random_real_point_free(n, seed);
    for (int k = 3; k <= n + 2; ++k) {
      const Quadric r = restrict_to(q, random_subspace(rng, n + 2, k));
      EXPECT_TRUE(is_smooth(r));
      EXPECT_FALSE(has_real_points(r));
    }
  }
}

TEST(Restrict, BinaryRestrictionHasNoRealRoots) {
  Rng rng(8);
  for (int seed = 0; seed < 30; ++seed) {
    const Quadric q = random_real_point_free(2, seed);
    const Quadric r = restrict_to(q, random_subspace(rng, 4, 2));
    const ComplexMatrix& a = r.matrix();
    for (const auto& root : binary_roots(a(0, 0), a(0, 1), a(1, 1)))
      EXPECT_GT(std::abs(root_orientation(root)), 1e-6);
  }
}

TEST(RandomRealPointFree, DeterministicPerSeed) {
  EXPECT_EQ(random_real_point_free(3, 42).matrix(), random_real_point_free(3, 42).matrix());
  EXPECT_NE(random_real_point_free(3, 42).matrix(), random_real_point_free(3, 43).matrix());
  const PlantedQuadric p = random_real_point_free_record(3, 42);
  EXPECT_DOUBLE_EQ(p.phases.front(), 0.0);
  for (double x : p.phases) EXPECT_LT(x, kPi - kPhaseGap);
}
