#include <pnuc/crossed.hpp>

#include <gtest/gtest.h>

using namespace pnuc;

namespace {

Group cyclic(int n) { return Group::finite(FiniteGroup::cyclic(n)); }

CMatrix diag3(cplx a, cplx b, cplx c) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

CrossedSystem rotation_system(int n, Index d, long long k) {
  const Group g = cyclic(n);
  return CrossedSystem(g, ConcreteAlgebra::diagonal(d), IsometricAction::coordinate_rotation(g, d, k));
}

CrossedSystem trivial_system(const Group& g, Index d) {
  return CrossedSystem(g, ConcreteAlgebra::full(d), IsometricAction::trivial(g, d));
}

CMatrix swap2() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

}  // namespace

TEST(Algebra, FullAndDiagonal) {
  const ConcreteAlgebra diag = ConcreteAlgebra::diagonal(3);
  Rng rng(2);
  const CMatrix x = random_complex_matrix(3, 3, rng);
  EXPECT_FALSE(diag.contains(x));
  EXPECT_TRUE(diag.contains(diag.project(x)));
  EXPECT_EQ(diag.project(x).diagonal(), x.diagonal());
  EXPECT_EQ(diag.basis().size(), 3u);
  EXPECT_EQ(ConcreteAlgebra::full(3).basis().size(), 9u);
  EXPECT_TRUE(diag.contains(diag.random_element(rng)));
}

TEST(PhasedPermutation, Validation) {
  CMatrix u = CMatrix::Zero(2, 2);
  u(1, 0) = cplx(0, 1);
  u(0, 1) = -1.0;
  const PhasedPermutation pp = PhasedPermutation::from_matrix(u);
  EXPECT_EQ(pp.matrix(), u);
  EXPECT_LT(max_abs_diff(pp.then_after(pp.inverse()).matrix(), CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_THROW(PhasedPermutation::from_matrix(CMatrix::Ones(2, 2)), DomainError);
  EXPECT_THROW(PhasedPermutation::from_matrix(2.0 * CMatrix::Identity(2, 2)), DomainError);
  EXPECT_THROW(PhasedPermutation::from_matrix(CMatrix::Zero(2, 2)), DomainError);
}

TEST(PhasedPermutation, ConjugationMatchesMatrices) {
  Rng rng(6);
  CMatrix u = CMatrix::Zero(3, 3);
  u(2, 0) = std::polar(1.0, 0.3);
  u(0, 1) = std::polar(1.0, -1.1);
  u(1, 2) = 1.0;
  const PhasedPermutation pp = PhasedPermutation::from_matrix(u);
  const CMatrix a = random_complex_matrix(3, 3, rng);
  EXPECT_LT(max_abs_diff(pp.conjugate(a), u * a * u.adjoint()), 1e-14);
  const CVector x = random_complex_vector(3, rng);
  EXPECT_LT(max_abs_diff(pp.apply(x), u * x), 1e-15);
}

TEST(Action, ImplementersMustFormAHomomorphism) {
  const Group z2 = cyclic(2);
  EXPECT_NO_THROW(IsometricAction::from_implementers(z2, {CMatrix::Identity(2, 2), swap2()}));
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  bad(1, 0) = cplx(0, 1);  // squares to i I, not I
  EXPECT_THROW(IsometricAction::from_implementers(z2, {CMatrix::Identity(2, 2), bad}), DomainError);
  EXPECT_THROW(IsometricAction::from_implementers(z2, {swap2(), swap2()}), DomainError);
  EXPECT_THROW(IsometricAction::generated_by(cyclic(3), swap2()), DomainError);
}

TEST(Action, CoordinateRotation) {
  const IsometricAction act = IsometricAction::coordinate_rotation(Group::integers(), 4, 1);
  CMatrix w = CMatrix::Zero(4, 4);
  for (Index j = 0; j < 4; ++j) w(j, j) = static_cast<double>(j + 1);
  const CMatrix r = act.apply(1, w);
  for (Index j = 0; j < 4; ++j) EXPECT_EQ(r(j, j), w((j + 1) % 4, (j + 1) % 4));
  EXPECT_LT(max_abs_diff(act.apply(-3, act.apply(3, w)), w), 1e-15);
  EXPECT_LT(max_abs_diff(act.apply(4, w), w), 1e-15);
}

TEST(System, RejectsMismatches) {
  const Group z3 = cyclic(3);
  EXPECT_THROW(CrossedSystem(z3, ConcreteAlgebra::full(2), IsometricAction::trivial(z3, 3)), DomainError);
  EXPECT_THROW(CrossedSystem(z3, ConcreteAlgebra::full(2), IsometricAction::trivial(cyclic(4), 2)), DomainError);
}

TEST(CcElement, Bookkeeping) {
  CcElement f(2);
  f.add(1, CMatrix::Identity(2, 2)).add(1, -CMatrix::Identity(2, 2));
  EXPECT_TRUE(f.empty());
  f.add(0, 3.0 * CMatrix::Identity(2, 2)).add(2, 1e-16 * CMatrix::Identity(2, 2));
  EXPECT_EQ(f.support(), (std::vector<Element>{0, 2}));
  f.prune(1e-14);
  EXPECT_EQ(f.support(), (std::vector<Element>{0}));
  EXPECT_EQ(f.coefficient(5), CMatrix::Zero(2, 2));
  EXPECT_THROW(f.add(0, CMatrix::Identity(3, 3)), DomainError);
}

TEST(TwistedConvolution, DeltaProducts) {
  // delta_s a * delta_t b = a alpha_s(b) delta_{st}.
  const CrossedSystem sys = rotation_system(3, 3, 1);
  const CMatrix a = diag3(1, 2, 3), b = diag3(4, 5, 6);
  const CcElement prod = twisted_convolve(CcElement::delta(1, a), CcElement::delta(1, b), sys.action);
  EXPECT_EQ(prod.support(), (std::vector<Element>{2}));
  EXPECT_LT(max_abs_diff(prod.coefficient(2), a * diag3(5, 6, 4)), 1e-15);
}

TEST(TwistedConvolution, IntegratedFormIsMultiplicative) {
  Rng rng(41);
  for (int n : {2, 3, 5}) {
    const CrossedSystem sys = rotation_system(n, n, 1);
    const CovariantRep rep = build_regular_rep(sys, PExponent(3));
    std::vector<Element> all;
    for (int s = 0; s < n; ++s) all.push_back(s);
    for (int i = 0; i < 5; ++i) {
      const CcElement f = random_cc_element(sys, all, rng), g = random_cc_element(sys, all, rng);
      const CMatrix lhs = integrated_form(rep, twisted_convolve(f, g, sys.action));
      const CMatrix rhs = integrated_form(rep, f) * integrated_form(rep, g);
      EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
    }
  }
}

TEST(CovariantRep, PiOfDiagonalUnderRotation) {
  const CovariantRep rep = build_regular_rep(rotation_system(3, 3, 1), PExponent(3));
  const CMatrix p = rep.pi(diag3(1, 2, 3));
  ASSERT_EQ(p.rows(), 9);
  EXPECT_EQ(p.block(0, 0, 3, 3), diag3(1, 2, 3));
  EXPECT_EQ(p.block(3, 3, 3, 3), diag3(3, 1, 2));
  EXPECT_EQ(p.block(6, 6, 3, 3), diag3(2, 3, 1));
  EXPECT_EQ(rep.pi(CMatrix::Identity(3, 3)), CMatrix::Identity(9, 9));
}

TEST(CovariantRep, Covariance) {
  Rng rng(13);
  const CrossedSystem sys = rotation_system(4, 4, 1);
  for (double p : {1.0, 1.5, 3.0}) {
    const CovariantRep rep = build_regular_rep(sys, PExponent(p));
    for (Element t = 0; t < 4; ++t) EXPECT_LT(covariance_defect(rep, sys.algebra.random_element(rng), t), 1e-14);
  }
  // A non-cyclic group with a nontrivial action.
  const Group d3 = Group::finite(FiniteGroup::dihedral(3));
  std::vector<CMatrix> impl;
  for (int s = 0; s < 6; ++s) impl.push_back(s < 3 ? CMatrix::Identity(2, 2) : swap2());
  const CrossedSystem dsys(d3, ConcreteAlgebra::full(2), IsometricAction::from_implementers(d3, impl));
  const CovariantRep drep = build_regular_rep(dsys, PExponent(3));
  for (Element t = 0; t < 6; ++t) EXPECT_LT(covariance_defect(drep, random_complex_matrix(2, 2, rng), t), 1e-13);
}

TEST(CovariantRep, SitesValidation) {
  const CrossedSystem sys = trivial_system(cyclic(3), 1);
  EXPECT_THROW(CovariantRep(sys, PExponent(2), {0, 1}), DomainError);
  EXPECT_THROW(CovariantRep(sys, PExponent(2), {0, 1, 1}), DomainError);
  const CrossedSystem zsys = trivial_system(Group::integers(), 1);
  EXPECT_THROW(build_window_rep(zsys, PExponent(2), 3, 1), DomainError);
}

TEST(IntegratedForm, Examples) {
  const CrossedSystem sys = trivial_system(cyclic(2), 2);
  const CovariantRep rep = build_regular_rep(sys, PExponent(2));
  EXPECT_EQ(integrated_form(rep, CcElement::delta(0, CMatrix::Identity(2, 2))), CMatrix::Identity(4, 4));
  Rng rng(3);
  const CMatrix a = random_complex_matrix(2, 2, rng), b = random_complex_matrix(2, 2, rng);
  EXPECT_EQ(integrated_form(rep, CcElement::delta(0, a)), rep.pi(a));

  // Hand assembly on Z/2 with the swap action: block (r, s^-1 r) = alpha_{r^-1}(coefficient).
  const Group z2 = cyclic(2);
  const CrossedSystem ssys(z2, ConcreteAlgebra::full(2), IsometricAction::from_implementers(z2, {CMatrix::Identity(2, 2), swap2()}));
  const CovariantRep srep = build_regular_rep(ssys, PExponent(3));
  CcElement f = CcElement::delta(0, a);
  f.add(1, b);
  CMatrix expected(4, 4);
  expected.block(0, 0, 2, 2) = a;
  expected.block(0, 2, 2, 2) = b;
  expected.block(2, 2, 2, 2) = swap2() * a * swap2();
  expected.block(2, 0, 2, 2) = swap2() * b * swap2();
  EXPECT_LT(max_abs_diff(integrated_form(srep, f), expected), 1e-15);
  EXPECT_LT(max_abs_diff(integrated_form(srep, f), srep.pi(a) + srep.pi(b) * srep.v(1)), 1e-15);
}

TEST(ReducedNorm, Examples) {
  const CrossedSystem sys = trivial_system(cyclic(2), 1);
  const CovariantRep rep = build_regular_rep(sys, PExponent(2));
  const CMatrix one = CMatrix::Identity(1, 1);
  EXPECT_NEAR(reduced_norm(CcElement::delta(0, one), rep).value, 1.0, 1e-12);
  EXPECT_NEAR(reduced_norm(CcElement::delta(1, one), rep).value, 1.0, 1e-12);
  // [[1,1],[1,1]] has eigenvalues 2 and 0.
  CcElement f = CcElement::delta(0, one);
  f.add(1, one);
  EXPECT_NEAR(reduced_norm(f, rep).value, 2.0, 1e-12);
  // Isometries stay of norm one for other p too.
  const CovariantRep rep3 = build_regular_rep(rotation_system(5, 5, 1), PExponent(3));
  EXPECT_NEAR(reduced_norm(CcElement::delta(2, CMatrix::Identity(5, 5)), rep3).value, 1.0, 1e-10);
}

TEST(Expectation, Examples) {
  const Group z4 = cyclic(4);
  Rng rng(4);
  const CMatrix a = random_complex_matrix(2, 2, rng), b = random_complex_matrix(2, 2, rng);
  CcElement f = CcElement::delta(0, a);
  f.add(3, b);
  EXPECT_EQ(conditional_expectation(f, z4), a);
  EXPECT_EQ(conditional_expectation(CcElement::delta(2, b), z4), CMatrix::Zero(2, 2));
  EXPECT_EQ(conditional_expectation(CcElement::delta(0, 3.0 * CMatrix::Identity(2, 2)), z4), 3.0 * CMatrix::Identity(2, 2));
}

TEST(Expectation, CompressionIdentity) {
  Rng rng(19);
  const CrossedSystem sys = rotation_system(4, 4, 1);
  const CovariantRep rep = build_regular_rep(sys, PExponent(1.5));
  for (int i = 0; i < 10; ++i) {
    const CcElement f = random_cc_element(sys, {0, 1, 2, 3}, rng);
    const CompressionCheck c = compress_identity_check(rep, f);
    EXPECT_LT(c.max_abs_diff, 1e-13);
    EXPECT_LT(max_abs_diff(c.lhs.topLeftCorner(4, 4), f.coefficient(0)), 1e-13);
  }
  const CompressionCheck off = compress_identity_check(rep, CcElement::delta(1, CMatrix::Identity(4, 4)));
  EXPECT_EQ(off.lhs.norm(), 0.0);
}

TEST(Expectation, CompressionOnIntegerWindow) {
  Rng rng(20);
  const CrossedSystem sys(Group::integers(), ConcreteAlgebra::diagonal(3),
                          IsometricAction::coordinate_rotation(Group::integers(), 3, 1));
  const CovariantRep rep = build_window_rep(sys, PExponent(3), -3, 3);
  EXPECT_TRUE(rep.is_window());
  const CcElement f = random_cc_element(sys, {-2, -1, 0, 1, 2}, rng);
  EXPECT_LT(compress_identity_check(rep, f).max_abs_diff, 1e-13);
}

TEST(Expectation, ElementLevelContractivity) {
  Rng rng(77);
  const CrossedSystem sys = rotation_system(3, 3, 1);
  for (double p : {1.0, 1.5, 4.0}) {
    const CovariantRep rep = build_regular_rep(sys, PExponent(p));
    for (int i = 0; i < 6; ++i) {
      const CcElement f = random_cc_element(sys, {0, 1, 2}, rng);
      const double e = pnorm_estimate(conditional_expectation(f, sys.group), PExponent(p)).value;
      EXPECT_LE(e, reduced_norm(f, rep).value + 1e-6);
    }
  }
}

TEST(Expectation, CbCertificate) {
  CbOptions small;
  small.n_max = 1;
  small.trials = 8;
  const CbEstimate z2 = expectation_cb_certificate(build_regular_rep(rotation_system(2, 2, 1), PExponent(3)), small);
  EXPECT_TRUE(z2.contractive(1e-6));

  CbOptions sweep;
  sweep.n_max = 3;
  sweep.trials = 64;
  const CbEstimate z3 = expectation_cb_certificate(build_regular_rep(trivial_system(cyclic(3), 1), PExponent(3)), sweep);
  ASSERT_EQ(z3.levels.size(), 3u);
  EXPECT_LE(z3.best, 1.0 + 1e-6);
}

TEST(Expectation, TightOnIdentity) {
  const CovariantRep rep = build_regular_rep(trivial_system(cyclic(3), 2), PExponent(3));
  const LinearMap e = expectation_map(rep);
  const CMatrix x = integrated_form(rep, CcElement::delta(0, CMatrix::Identity(2, 2)));
  EXPECT_NEAR(map_ratio(e, x, PExponent(3)).ratio, 1.0, 1e-12);
}

TEST(Embedding, IsIsometric) {
  const CovariantRep rep = build_regular_rep(rotation_system(3, 3, 1), PExponent(1.5));
  CbOptions o;
  o.n_max = 2;
  o.trials = 6;
  EXPECT_TRUE(cb_norm_lower(embedding_map(rep), PExponent(1.5), o).isometric(1e-6));
}
