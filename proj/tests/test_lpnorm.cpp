#include <pnuc/lpnorm.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace pnuc;

namespace {

CMatrix real2(double a, double b, double c, double d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(Exponent, ConjugatesAndDomain) {
  EXPECT_DOUBLE_EQ(PExponent(3.0).q(), 1.5);
  EXPECT_EQ(PExponent(1.0).q(), kInf);
  EXPECT_EQ(PExponent::infinity().q(), 1.0);
  EXPECT_DOUBLE_EQ(PExponent(1.5).conjugate().p(), 3.0);
  EXPECT_THROW(PExponent(0.5), DomainError);
  EXPECT_THROW(PExponent(std::nan("")), DomainError);
}

TEST(VectorNorm, SmallExamples) {
  CVector x(2);
  x << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(vector_pnorm(x, PExponent(2)), 5.0);
  CVector ones = CVector::Ones(3);
  EXPECT_DOUBLE_EQ(vector_pnorm(ones, PExponent(1)), 3.0);
  CVector y(3);
  y << 1.0, -2.0, 2.0;
  EXPECT_NEAR(vector_pnorm(y, PExponent(3)), std::cbrt(17.0), 1e-14);
  EXPECT_NEAR(vector_pnorm(y, PExponent(3)), 2.5713, 1e-4);
  EXPECT_DOUBLE_EQ(vector_pnorm(y, PExponent::infinity()), 2.0);
  EXPECT_THROW(vector_pnorm(CVector(0), PExponent(2)), DomainError);
}

TEST(VectorNorm, ScalingAvoidsOverflow) {
  CVector x = CVector::Constant(4, 1e200);
  EXPECT_NEAR(vector_pnorm(x, PExponent(3)) / 1e200, std::cbrt(4.0), 1e-12);
}

TEST(DualMap, NormsTheVector) {
  Rng rng(5);
  for (double p : {1.0, 1.3, 2.0, 3.0, 7.0}) {
    const PExponent e(p);
    for (int i = 0; i < 20; ++i) {
      const CVector x = random_complex_vector(5, rng);
      const CVector y = dual_map(x, e);
      EXPECT_NEAR(vector_pnorm(y, e.conjugate()), 1.0, 1e-12);
      const cplx pairing = (x.array() * y.conjugate().array()).sum();
      EXPECT_NEAR(pairing.real(), vector_pnorm(x, e), 1e-10 * vector_pnorm(x, e));
      EXPECT_NEAR(pairing.imag(), 0.0, 1e-10 * vector_pnorm(x, e));
    }
  }
  EXPECT_THROW(dual_map(CVector::Ones(2), PExponent::infinity()), UnsupportedExponent);
}

TEST(Adjoint, Examples) {
  EXPECT_EQ(adjoint(CMatrix::Identity(3, 3)), CMatrix::Identity(3, 3));
  CMatrix n = real2(0, 1, 0, 0);
  EXPECT_EQ(adjoint(n), real2(0, 0, 1, 0));
  CMatrix d(2, 2);
  d << cplx(0, 1), 0, 0, 1;
  CMatrix dstar(2, 2);
  dstar << cplx(0, -1), 0, 0, 1;
  EXPECT_EQ(adjoint(d), dstar);
}

TEST(Adjoint, PairingIdentity) {
  Rng rng(9);
  const CMatrix a = random_complex_matrix(4, 4, rng);
  const CVector x = random_complex_vector(4, rng), y = random_complex_vector(4, rng);
  const cplx lhs = (a * x).dot(y);  // conj-linear in the first slot
  const cplx rhs = x.dot(adjoint(a) * y);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
}

TEST(ExactNorm, ClosedForms) {
  for (double p : {1.0, 2.0, kInf}) EXPECT_NEAR(pnorm_exact(CMatrix::Identity(4, 4), PExponent(p)), 1.0, 1e-15);
  const CMatrix a = real2(1, -2, 3, 4);
  EXPECT_DOUBLE_EQ(pnorm_exact(a, PExponent(1)), 6.0);
  EXPECT_DOUBLE_EQ(pnorm_exact(a, PExponent::infinity()), 7.0);
  EXPECT_THROW(pnorm_exact(a, PExponent(3)), UnsupportedExponent);
}

TEST(ExactNorm, SpectralAgainstEigenvalues) {
  // ||A||_2^2 is the top eigenvalue of A*A: for [[1,2],[3,4]] that is 15 + sqrt(221).
  const CMatrix a = real2(1, 2, 3, 4);
  EXPECT_NEAR(pnorm_exact(a, PExponent(2)), std::sqrt(15.0 + std::sqrt(221.0)), 1e-12);
}

TEST(Estimate, IsometriesAndDiagonals) {
  CMatrix perm = CMatrix::Zero(3, 3);
  perm(1, 0) = perm(2, 1) = perm(0, 2) = 1.0;
  for (double p : {1.5, 3.0, 6.0}) {
    const auto e = pnorm_estimate(perm, PExponent(p));
    EXPECT_NEAR(e.value, 1.0, 1e-12);
    EXPECT_TRUE(e.converged);
  }
  const CMatrix d = real2(2, 0, 0, 1);
  EXPECT_NEAR(pnorm_estimate(d, PExponent(3)).value, 2.0, 1e-12);
}

TEST(Estimate, DelegatesToClosedForm) {
  const CMatrix a = real2(1, -2, 3, 4);
  const auto e = pnorm_estimate(a, PExponent(1));
  EXPECT_EQ(e.method, NormMethod::exact);
  EXPECT_DOUBLE_EQ(e.value, 6.0);
}

TEST(Estimate, WitnessReproducesValue) {
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    const CMatrix a = random_complex_matrix(5, 5, rng);
    for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
      const PExponent e(p);
      const auto est = pnorm_estimate(a, e);
      ASSERT_EQ(est.witness.size(), 5);
      EXPECT_NEAR(vector_pnorm(est.witness, e), 1.0, 1e-12);
      EXPECT_NEAR(vector_pnorm(a * est.witness, e), est.value, 1e-10 * est.value);
    }
  }
}

TEST(Estimate, AgreesWithOracle) {
  const CMatrix a = real2(1, 1, 0, 1);
  const PExponent p(3);
  EXPECT_NEAR(pnorm_estimate(a, p).value, pnorm_oracle(a, p, 64), 1e-6);

  Rng rng(23);
  for (int i = 0; i < 8; ++i) {
    const CMatrix m = random_complex_matrix(3, 3, rng);
    for (double q : {1.25, 3.0}) {
      const double est = pnorm_estimate(m, PExponent(q)).value;
      const double orc = pnorm_oracle(m, PExponent(q), 24);
      EXPECT_NEAR(est, orc, 1e-5 * orc) << "p=" << q;
    }
  }
}

TEST(Estimate, Duality) {
  Rng rng(31);
  for (int i = 0; i < 6; ++i) {
    const CMatrix m = random_complex_matrix(4, 4, rng);
    const double a = pnorm_estimate(m, PExponent(3)).value;
    const double b = pnorm_estimate(adjoint(m), PExponent(1.5)).value;
    EXPECT_NEAR(a, b, 1e-6 * a);
  }
}

TEST(Estimate, ImproveNeverDecreases) {
  Rng rng(3);
  const CMatrix m = random_complex_matrix(4, 4, rng);
  EstimatorOptions weak;
  weak.restarts = 0;
  const auto first = pnorm_estimate(m, PExponent(4), weak);
  std::vector<CVector> starts{random_complex_vector(4, rng), random_complex_vector(4, rng)};
  const auto better = improve_estimate(m, PExponent(4), first, starts);
  EXPECT_GE(better.value, first.value);
}

TEST(Oracle, Examples) {
  EXPECT_EQ(pnorm_oracle(CMatrix::Zero(3, 3), PExponent(3), 8), 0.0);
  EXPECT_NEAR(pnorm_oracle(real2(0, 1, 1, 0), PExponent(4), 16), 1.0, 1e-9);
  const CMatrix a = real2(1, 2, 3, 4);
  EXPECT_NEAR(pnorm_oracle(a, PExponent(2), 16), pnorm_exact(a, PExponent(2)), 1e-6);
  EXPECT_NEAR(pnorm_oracle(a, PExponent(1), 16), 6.0, 1e-9);
  EXPECT_NEAR(pnorm_oracle(a, PExponent::infinity(), 16), 7.0, 1e-9);
}

TEST(Oracle, RefusesLargeInputs) {
  EXPECT_THROW(pnorm_oracle(CMatrix::Identity(7, 7), PExponent(3), 4), RefusalError);
}

TEST(Estimate, SparseOperatorPath) {
  // Large and sparse enough for the sparse product path; a scaled permutation.
  const Index n = 80;
  CMatrix a = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) a((i + 3) % n, i) = 2.5;
  const auto e = pnorm_estimate(a, PExponent(3));
  EXPECT_NEAR(e.value, 2.5, 1e-12);
}
