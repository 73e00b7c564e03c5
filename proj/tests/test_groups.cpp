#include <pnuc/groups.hpp>

#include <gtest/gtest.h>

#include <numeric>

using namespace pnuc;

namespace {

std::vector<Element> range(Element lo, Element hi) {
  std::vector<Element> v(static_cast<std::size_t>(hi - lo + 1));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

FiniteGroup klein() {
  return FiniteGroup::from_table({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}});
}

}  // namespace

TEST(FiniteGroup, Cyclic) {
  const FiniteGroup z1 = FiniteGroup::cyclic(1);
  EXPECT_EQ(z1.order(), 1);
  EXPECT_EQ(z1.inverse(0), 0);
  const FiniteGroup z5 = FiniteGroup::cyclic(5);
  EXPECT_EQ(z5.inverse(1), 4);
  EXPECT_EQ(z5.multiply(3, 4), 2);
  EXPECT_TRUE(z5.is_cyclic_model());
  EXPECT_THROW(FiniteGroup::cyclic(0), DomainError);
}

TEST(FiniteGroup, DihedralIsNonabelian) {
  const FiniteGroup d3 = FiniteGroup::dihedral(3);
  EXPECT_EQ(d3.order(), 6);
  bool commutes = true;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) commutes = commutes && d3.multiply(a, b) == d3.multiply(b, a);
  EXPECT_FALSE(commutes);
  for (int r = 3; r < 6; ++r) EXPECT_EQ(d3.multiply(r, r), d3.identity());
}

TEST(FiniteGroup, TableValidation) {
  EXPECT_EQ(klein().order(), 4);
  EXPECT_THROW(FiniteGroup::from_table({}), DomainError);
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {1, 1}}), DomainError);          // not a Latin square
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {1}}), DomainError);             // ragged
  EXPECT_THROW(FiniteGroup::from_table({{0, 2}, {1, 0}}), DomainError);          // out of range
  EXPECT_THROW(FiniteGroup::from_table({{1, 0}, {0, 0}}), DomainError);          // no identity
  // A Latin square with identity 0 that is not associative.
  EXPECT_THROW(FiniteGroup::from_table({{0, 1, 2, 3, 4},
                                        {1, 0, 3, 4, 2},
                                        {2, 4, 0, 1, 3},
                                        {3, 2, 4, 0, 1},
                                        {4, 3, 1, 2, 0}}),
               DomainError);
}

TEST(FiniteGroup, DirectProduct) {
  const FiniteGroup g = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  EXPECT_EQ(g.order(), 6);
  for (int a = 0; a < 6; ++a) EXPECT_EQ(g.multiply(a, g.inverse(a)), g.identity());
}

TEST(Group, Integers) {
  const Group z = Group::integers();
  EXPECT_FALSE(z.is_finite());
  EXPECT_EQ(z.multiply(-3, 5), 2);
  EXPECT_EQ(z.inverse(7), -7);
  EXPECT_EQ(z.identity(), 0);
  EXPECT_FALSE(z.order().has_value());
  EXPECT_THROW(z.finite_group(), DomainError);
}

TEST(RegularRep, IdentityAndShift) {
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  EXPECT_EQ(regular_rep(z3, 0), CMatrix::Identity(3, 3));
  const CMatrix l = regular_rep(z3, 1);
  for (int t = 0; t < 3; ++t) {
    CVector d = CVector::Zero(3);
    d(t) = 1.0;
    const CVector img = l * d;
    EXPECT_EQ(img((t + 1) % 3), cplx(1.0));
    EXPECT_NEAR(img.norm(), 1.0, 0.0);
  }
}

TEST(RegularRep, IsAHomomorphism) {
  for (const FiniteGroup& g : {FiniteGroup::dihedral(4), klein(), FiniteGroup::cyclic(7)})
    for (int s = 0; s < g.order(); ++s)
      for (int t = 0; t < g.order(); ++t)
        EXPECT_EQ(regular_rep(g, s) * regular_rep(g, t), regular_rep(g, g.multiply(s, t)));
}

TEST(RegularRep, AdjointIsInverse) {
  EXPECT_TRUE(lambda_adjoint_check(FiniteGroup::cyclic(4), 1));
  for (const FiniteGroup& g : {klein(), FiniteGroup::dihedral(5), FiniteGroup::cyclic(9)})
    for (int s = 0; s < g.order(); ++s) EXPECT_TRUE(lambda_adjoint_check(g, s));
}

TEST(WindowShift, CompressedTranslation) {
  const CMatrix w = window_shift(-2, 2, 1);
  ASSERT_EQ(w.rows(), 5);
  // delta_t -> delta_{t+1}; the top site falls off the window.
  for (Index c = 0; c < 4; ++c) EXPECT_EQ(w(c + 1, c), cplx(1.0));
  EXPECT_EQ(w.col(4).norm(), 0.0);
  EXPECT_EQ(window_shift(0, 3, 0), CMatrix::Identity(4, 4));
}

TEST(Folner, RatiosAndIntersections) {
  const FolnerSet F(Group::integers(), range(0, 9));
  EXPECT_EQ(folner_ratio(F, 0), 0.0);
  EXPECT_DOUBLE_EQ(folner_ratio(F, 1), 0.2);
  EXPECT_EQ(symmetric_difference_size(F, 1), 2u);
  EXPECT_EQ(folner_intersection(F, 1), 9u);
  EXPECT_EQ(folner_intersection(F, 0), 10u);
  EXPECT_EQ(folner_intersection(F, 20), 0u);

  const Group z12 = Group::finite(FiniteGroup::cyclic(12));
  const FolnerSet whole(z12, range(0, 11));
  for (Element s = 0; s < 12; ++s) EXPECT_EQ(folner_ratio(whole, s), 0.0);
  const FolnerSet half(z12, range(0, 5));
  EXPECT_EQ(folner_intersection(half, 1), 5u);
  EXPECT_DOUBLE_EQ(folner_ratio(half, 1), 2.0 / 6.0);
}

TEST(Folner, Validation) {
  EXPECT_THROW(FolnerSet(Group::integers(), {}), DomainError);
  EXPECT_THROW(FolnerSet(Group::finite(FiniteGroup::cyclic(3)), {0, 5}), DomainError);
  EXPECT_THROW(FolnerSet(Group::integers(), {3, 1, 2, 2}), DomainError);
  const FolnerSet F(Group::integers(), {3, 1, 2});
  EXPECT_EQ(F.members, (std::vector<Element>{1, 2, 3}));
}

TEST(Folner, IntersectionFormulaProperty) {
  Rng rng(12);
  std::uniform_int_distribution<int> len(1, 30), shift(-40, 40), start(-20, 20);
  for (int i = 0; i < 300; ++i) {
    // Random subsets of the integers, not just intervals.
    std::vector<Element> m;
    const int lo = start(rng), n = len(rng);
    std::bernoulli_distribution keep(0.6);
    for (int k = 0; k < n; ++k)
      if (keep(rng)) m.push_back(lo + k);
    if (m.empty()) m.push_back(lo);
    const FolnerSet F(Group::integers(), m);
    const Element s = shift(rng);
    std::size_t inter = 0;
    for (Element t : F.members) inter += F.contains(t - s) ? 1 : 0;
    EXPECT_EQ(folner_intersection(F, s), inter);
    EXPECT_EQ(2 * inter, 2 * F.size() - symmetric_difference_size(F, s));
  }
}

TEST(Folner, SearchOnIntegers) {
  const Group z = Group::integers();
  FolnerSet a = folner_search(z, {1}, 0.25);
  EXPECT_EQ(a.size(), 9u);
  EXPECT_NEAR(folner_ratio(a, 1), 2.0 / 9.0, 1e-15);
  FolnerSet b = folner_search(z, {1, 2}, 0.1);
  EXPECT_EQ(b.size(), 41u);
  EXPECT_NEAR(folner_ratio(b, 2), 4.0 / 41.0, 1e-15);
  // 2/L < delta is strict: delta = 0.2 needs L = 11, not 10.
  EXPECT_EQ(folner_search(z, {1}, 0.2).size(), 11u);
}

TEST(Folner, SearchIsMinimal) {
  const Group z = Group::integers();
  for (int smax = 1; smax <= 5; ++smax)
    for (double delta : {0.5, 0.13, 0.07}) {
      std::vector<Element> shifts;
      for (int s = -smax; s <= smax; ++s) shifts.push_back(s);
      const FolnerSet F = folner_search(z, shifts, delta);
      double worst = 0.0;
      for (Element s : shifts) worst = std::max(worst, folner_ratio(F, s));
      EXPECT_LT(worst, delta);
      const FolnerSet shorter(z, range(0, static_cast<Element>(F.size()) - 2));
      double worse = 0.0;
      for (Element s : shifts) worse = std::max(worse, folner_ratio(shorter, s));
      if (F.size() > 1) EXPECT_GE(worse, delta) << smax << " " << delta;
    }
}

TEST(Folner, SearchFiniteAndCapacity) {
  const Group d4 = Group::finite(FiniteGroup::dihedral(4));
  const FolnerSet F = folner_search(d4, {1, 5}, 0.01);
  EXPECT_EQ(F.size(), 8u);
  EXPECT_EQ(folner_ratio(F, 5), 0.0);
  EXPECT_THROW(folner_search(Group::integers(), {1}, 0.01, 100), CapacityError);
  EXPECT_THROW(folner_search(Group::integers(), {1}, 0.0), DomainError);
}
