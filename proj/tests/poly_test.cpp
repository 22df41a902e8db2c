#include <gtest/gtest.h>

#include <random>

#include "xorlift/boolfn.hpp"
#include "xorlift/poly.hpp"

using namespace xorlift;

namespace {

MultilinearPolynomial random_poly(int n, std::mt19937& rng, double density = 0.5) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  MultilinearPolynomial p(VarSet::range(0, n));
  for (Mask s = 0; s < cube_size(n); ++s)
    if (keep(rng)) p.add_term(VarSet(s), coeff(rng));
  return p;
}

PartialAssignment full(int n, Point x) {
  std::vector<VarId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(i);
  return PartialAssignment::from_point(ids, x);
}

}  // namespace

TEST(Poly, EvalExamples) {
  MultilinearPolynomial p(VarSet{0});
  p.add_term(VarSet{}, 0.5);
  p.add_term(VarSet{0}, 0.5);
  EXPECT_DOUBLE_EQ(p.eval(full(1, 0)), 1.0);

  MultilinearPolynomial q(VarSet{0, 1});
  q.add_term(VarSet{0, 1}, 1.0);
  EXPECT_DOUBLE_EQ(q.eval(full(2, 0b11)), 1.0);

  const auto maj = MultilinearPolynomial::from_spectrum(wht_forward(majority(3)));
  // (-1,-1,+1)
  EXPECT_DOUBLE_EQ(maj.eval(full(3, 0b011)), -1.0);
}

TEST(Poly, EvalNeedsEveryVariable) {
  MultilinearPolynomial p(VarSet{0, 3});
  p.add_term(VarSet{3}, 1.0);
  EXPECT_THROW(p.eval(full(2, 0)), InvalidInput);
}

TEST(Poly, DegreeAndNorm) {
  MultilinearPolynomial p(VarSet{0, 1});
  p.add_term(VarSet{}, 3.0);
  p.add_term(VarSet{0, 1}, -2.0);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_DOUBLE_EQ(p.l1_norm(), 5.0);
  const MultilinearPolynomial zero;
  EXPECT_EQ(zero.degree(), 0);
  EXPECT_DOUBLE_EQ(zero.l1_norm(), 0.0);
  const auto par = MultilinearPolynomial::from_spectrum(wht_forward(parity(5)));
  EXPECT_EQ(par.degree(), 5);
  EXPECT_DOUBLE_EQ(par.l1_norm(), 1.0);
  EXPECT_EQ(par.term_count(), 1U);
}

TEST(Poly, ZeroCoefficientsArePruned) {
  MultilinearPolynomial p(VarSet{0});
  p.add_term(VarSet{0}, 1.0);
  p.add_term(VarSet{0}, -1.0);
  EXPECT_TRUE(p.is_zero());
  EXPECT_THROW(p.add_term(VarSet{1}, 1.0), InvalidInput);
}

TEST(Restrict, Examples) {
  MultilinearPolynomial p(VarSet{0, 1});
  p.add_term(VarSet{0, 1}, 1.0);
  p.add_term(VarSet{1}, 1.0);
  PartialAssignment a;
  a.set(0, -1);
  EXPECT_TRUE(restrict(p, a).is_zero());

  MultilinearPolynomial q(VarSet{0, 1});
  q.add_term(VarSet{0, 1}, 1.0);
  PartialAssignment b;
  b.set(0, 1);
  const auto r = restrict(q, b);
  EXPECT_EQ(r.terms().size(), 1U);
  EXPECT_DOUBLE_EQ(r.coeff(VarSet{1}), 1.0);
}

TEST(Restrict, CommutesWithEvalOnAllCompletions) {
  std::mt19937 rng(5);
  const int n = 10;
  for (int trial = 0; trial < 4; ++trial) {
    const auto p = random_poly(n, rng, 0.3);
    std::uniform_int_distribution<Point> pick(0, static_cast<Point>(cube_size(n) - 1));
    const Point bound_mask = pick(rng);
    const Point bound_vals = pick(rng);
    PartialAssignment a;
    for (int i = 0; i < n; ++i)
      if ((bound_mask >> i) & 1U) a.set(i, ((bound_vals >> i) & 1U) ? -1 : 1);
    const auto r = restrict(p, a);
    EXPECT_LE(r.l1_norm(), p.l1_norm() + 1e-12);
    for (Point x = 0; x < cube_size(n); ++x) {
      const auto xa = full(n, x).merged(a);
      ASSERT_NEAR(r.eval(xa), p.eval(xa), 1e-12);
    }
  }
}

TEST(ExpectUniform, Examples) {
  MultilinearPolynomial p(VarSet{0, 1});
  p.add_term(VarSet{0}, 1.0);
  p.add_term(VarSet{1}, 1.0);
  const auto e = expect_uniform(p, VarSet{0});
  EXPECT_EQ(e.term_count(), 1U);
  EXPECT_DOUBLE_EQ(e.coeff(VarSet{1}), 1.0);
  EXPECT_EQ(expect_uniform(p, VarSet{5}).terms(), p.terms());
}

TEST(ExpectUniform, EqualsBruteForceAverage) {
  std::mt19937 rng(9);
  const int n = 8;
  const auto p = random_poly(n, rng);
  const VarSet v{1, 4, 6};
  const std::vector<VarId> ids = v.ids();
  MultilinearPolynomial avg(p.vars() - v);
  for (Point s = 0; s < cube_size(static_cast<int>(ids.size())); ++s) {
    const auto r = restrict(p, PartialAssignment::from_point(ids, s));
    for (const auto& [m, c] : r.terms()) avg.add_term(m, c / static_cast<double>(cube_size(3)));
  }
  const auto e = expect_uniform(p, v);
  for (Mask m = 0; m < cube_size(n); ++m) ASSERT_NEAR(e.coeff(VarSet(m)), avg.coeff(VarSet(m)), 1e-12);
  EXPECT_EQ(expect_uniform(e, v), e);
}

TEST(Drop, ConservesMass) {
  MultilinearPolynomial p(VarSet{0, 1});
  p.add_term(VarSet{}, 3.0);
  p.add_term(VarSet{0, 1}, -2.0);
  auto none = drop_monomials(p, [](VarSet) { return false; });
  EXPECT_EQ(none.poly, p);
  EXPECT_DOUBLE_EQ(none.removed_mass, 0.0);
  auto nonconst = drop_monomials(p, [](VarSet s) { return s.size() >= 1; });
  EXPECT_DOUBLE_EQ(nonconst.removed_mass, 2.0);
  EXPECT_DOUBLE_EQ(nonconst.poly.coeff(VarSet{}), 3.0);
  EXPECT_EQ(nonconst.poly.term_count(), 1U);

  std::mt19937 rng(2);
  const auto q = random_poly(7, rng);
  auto d = drop_monomials(q, [](VarSet s) { return s.size() % 2 == 1; });
  double filtered = 0.0;
  for (const auto& [s, c] : q.terms())
    if (s.size() % 2 == 1) filtered += std::abs(c);
  EXPECT_DOUBLE_EQ(d.removed_mass, filtered);
  EXPECT_NEAR(q.l1_norm(), d.poly.l1_norm() + d.removed_mass, 1e-12);
}

TEST(Rename, MovesVariables) {
  MultilinearPolynomial p(VarSet{3, 7});
  p.add_term(VarSet{3, 7}, 2.0);
  const auto r = rename(p, {{3, 0}, {7, 1}});
  EXPECT_DOUBLE_EQ(r.coeff(VarSet{0, 1}), 2.0);
  EXPECT_THROW(rename(p, {{3, 7}}), InvalidInput);
}

TEST(SupError, Examples) {
  const auto f = majority(5);
  const auto exact = MultilinearPolynomial::from_spectrum(wht_forward(f));
  EXPECT_NEAR(sup_error(exact, f), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(sup_error(MultilinearPolynomial(VarSet::range(0, 5)), f), 1.0);
  MultilinearPolynomial scaled(VarSet::range(0, 4));
  scaled.add_term(VarSet{0, 1, 2, 3}, 0.75);
  EXPECT_NEAR(sup_error(scaled, parity(4)), 0.25, 1e-15);
}

TEST(SupError, IgnoresNonPromise) {
  const PartialTruthTable f(1, {1, kStar});
  MultilinearPolynomial p(VarSet{0});
  p.add_term(VarSet{}, 1.0);
  p.add_term(VarSet{0}, 5.0);
  EXPECT_DOUBLE_EQ(sup_error(p, f), 5.0);
  MultilinearPolynomial one(VarSet{0});
  one.add_term(VarSet{}, 1.0);
  EXPECT_DOUBLE_EQ(sup_error(one, f), 0.0);
}
