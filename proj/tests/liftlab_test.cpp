#include <gtest/gtest.h>

#include <random>

#include "xorlift/liftlab.hpp"

using namespace xorlift;

namespace {

MultilinearPolynomial exact_expansion(const TruthTable& f) {
  return MultilinearPolynomial::from_spectrum(wht_forward(f));
}

}  // namespace

TEST(MuSupport, Sizes) {
  const auto h2 = mu_support(make_hadd(2), 2);
  ASSERT_EQ(h2.size(), 4U);
  for (const auto& z : h2) EXPECT_EQ(z.probability, Rational(1, 4));
  EXPECT_EQ(mu_support(make_indexing(1), 3).size(), 8U);
  EXPECT_EQ(mu_support(make_hadd(4), 1).size(), 4U);
}

TEST(MuSupport, BlockZeroVariesSlowest) {
  const BlockLayout layout{2, 2, 2};
  const auto s = mu_support(make_hadd(2), layout);
  EXPECT_EQ(s[0].selected, (std::vector<int>{0, 0}));
  EXPECT_EQ(s[1].selected, (std::vector<int>{0, 1}));
  EXPECT_EQ(s[2].selected, (std::vector<int>{1, 0}));
  for (const auto& z : s) EXPECT_EQ(z.assignment.bound(), layout.address_set());
}

TEST(MuSupport, Guard) {
  EXPECT_THROW(mu_support(make_indexing(2), 10), ResourceLimit);
}

TEST(Selection, Probabilities) {
  for (int ell : {2, 4, 8}) {
    const auto h = make_hadd(ell);
    for (int j = 0; j < ell; ++j) EXPECT_EQ(selection_probability(h, j), Rational(1, ell));
    EXPECT_TRUE(selection_is_uniform(h));
  }
  EXPECT_EQ(selection_probability(make_indexing(3), 5), Rational(1, 8));
  const AddressingFunction skewed(2, 2, {0, 0, 1, AddressingFunction::kStarTarget});
  EXPECT_EQ(selection_probability(skewed, 0), Rational(2, 3));
  EXPECT_EQ(selection_probability(skewed, 1), Rational(1, 3));
  EXPECT_FALSE(selection_is_uniform(skewed));
}

TEST(Relevance, Examples) {
  const BlockLayout layout{3, 4, 4};
  const auto h = make_hadd(4);
  EXPECT_EQ(relevance_probability(VarSet{}, h, layout), Rational(1));
  const VarSet one_per_block{layout.target_id(0, 1), layout.target_id(1, 3), layout.target_id(2, 0)};
  EXPECT_EQ(relevance_probability(one_per_block, h, layout), Rational(1, 64));
  const VarSet same_block{layout.target_id(1, 0), layout.target_id(1, 2)};
  EXPECT_EQ(relevance_probability(same_block, h, layout), Rational(0));
  EXPECT_THROW(relevance_probability(VarSet{layout.address_id(0, 0)}, h, layout), InvalidInput);
}

TEST(Relevance, MatchesEnumerationForEveryMonomial) {
  for (int blocks = 1; blocks <= 3; ++blocks) {
    const BlockLayout layout{blocks, 2, 2};
    const auto ids = layout.target_ids();
    for (Point s = 0; s < cube_size(static_cast<int>(ids.size())); ++s) {
      VarSet v;
      for (std::size_t i = 0; i < ids.size(); ++i)
        if ((s >> i) & 1U) v.insert(ids[i]);
      ASSERT_EQ(relevance_probability(v, make_hadd(2), layout), relevance_by_enumeration(v, make_hadd(2), layout));
    }
  }
}

TEST(Relevance, SkewedSelectorMatchesEnumeration) {
  const AddressingFunction skewed(2, 2, {0, 0, 1, AddressingFunction::kStarTarget});
  const BlockLayout layout{2, 2, 2};
  for (Point s = 0; s < 16; ++s) {
    VarSet v;
    const auto ids = layout.target_ids();
    for (std::size_t i = 0; i < 4; ++i)
      if ((s >> i) & 1U) v.insert(ids[i]);
    ASSERT_EQ(relevance_probability(v, skewed, layout), relevance_by_enumeration(v, skewed, layout));
  }
}

TEST(RelevantMass, Examples) {
  const BlockLayout layout{2, 4, 4};
  const auto h = make_hadd(4);
  MultilinearPolynomial low(VarSet::range(0, layout.total_vars()));
  low.add_term(VarSet{layout.target_id(0, 0)}, 0.7);
  EXPECT_DOUBLE_EQ(expected_relevant_mass(low, h, layout, 2).expected, 0.0);

  MultilinearPolynomial mono(VarSet::range(0, layout.total_vars()));
  mono.add_term(VarSet{layout.target_id(0, 2), layout.target_id(1, 1)}, 3.0);
  const auto m = expected_relevant_mass(mono, h, layout, 2);
  EXPECT_NEAR(m.expected, 3.0 / 16.0, 1e-15);
  EXPECT_NEAR(m.analytic_bound, 3.0 / 16.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.min, 0.0);
}

TEST(RelevantMass, MarkovChainOnRandomPolynomials) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  const BlockLayout layout{2, 2, 2};
  for (int trial = 0; trial < 20; ++trial) {
    MultilinearPolynomial p(VarSet::range(0, 8));
    for (Mask s = 0; s < 256; ++s)
      if (s % 3 == static_cast<Mask>(trial % 3)) p.add_term(VarSet(s), c(rng));
    for (int d = 1; d <= 2; ++d) {
      const auto m = expected_relevant_mass(p, make_hadd(2), layout, d);
      EXPECT_LE(m.min, m.expected + 1e-12);
      EXPECT_LE(m.expected, m.analytic_bound + 1e-12);
      EXPECT_LE(m.analytic_bound, m.markov_bound + 1e-12);
    }
  }
}

TEST(Restriction, FBecomesOuterFunctionOnSelectedTargets) {
  for (auto [ell, k] : {std::pair{2, 2}, {2, 4}, {4, 2}}) {
    const auto c = paper_f_partial(ell, k);
    const auto outer = parity(k / 2);
    for (const auto& z : mu_support(make_hadd(ell), c.layout)) {
      Point fixed = 0;
      for (VarId id : c.layout.address_ids())
        if (z.assignment.value(id) == -1) fixed |= Point{1} << id;
      const auto tids = c.layout.target_ids();
      for (Point y = 0; y < cube_size(static_cast<int>(tids.size())); ++y) {
        Point x = fixed;
        for (std::size_t i = 0; i < tids.size(); ++i) x |= ((y >> i) & 1U) << tids[i];
        Point inner = 0;
        for (int b = 0; b < c.layout.blocks; ++b)
          if ((x >> c.layout.target_id(b, z.selected[b])) & 1U) inner |= Point{1} << b;
        ASSERT_EQ(c.table(x), outer(inner));
      }
    }
  }
}

TEST(Pipeline, LosslessOnLowDegreeTargetPolynomial) {
  const BlockLayout layout{2, 2, 2};
  const auto f = parity(2);
  const auto lifted = compose(f, make_hadd(2));
  MultilinearPolynomial p(VarSet::range(0, 8));
  p.add_term(VarSet{layout.target_id(0, 0)}, 0.5);
  EXPECT_DOUBLE_EQ(sup_error(p, lifted.table), 1.5);
  const auto r = degree_reduction_pipeline(p, make_hadd(2), layout, f, 2, 1.5);
  EXPECT_DOUBLE_EQ(r.dropped_mass, 0.0);
  EXPECT_LE(r.final_error, r.input_error + 1e-12);
  EXPECT_EQ(r.final_degree, 1);
}

TEST(Pipeline, ExactExpansionOfSmallestInstance) {
  const auto c = paper_f_partial(2, 2);
  const auto F = paper_F(2, 2);
  const auto p = exact_expansion(F.table);
  const auto r = degree_reduction_pipeline(p, make_hadd(2), c.layout, parity(1), 1, 0.0);
  EXPECT_NEAR(r.input_error, 0.0, 1e-12);
  EXPECT_LT(r.final_degree, 1);
  EXPECT_LE(r.final_error, r.dropped_mass + 1e-8);
  // Independent recomputation of the dropped mass at the chosen z.
  const auto z = mu_support(make_hadd(2), c.layout)[r.z_index];
  EXPECT_NEAR(r.dropped_mass, relevant_mass(p, z, c.layout, 1), 1e-12);
}

TEST(Pipeline, RejectsPolynomialOutsidePrecondition) {
  const auto c = paper_f_partial(2, 2);
  MultilinearPolynomial zero(VarSet::range(0, 4));
  EXPECT_THROW(degree_reduction_pipeline(zero, make_hadd(2), c.layout, parity(1), 1, 0.5), InvalidInput);
}

TEST(LiftBound, SmallGrid) {
  for (auto [ell, k, floor] : {std::tuple{2, 2, 0.1}, {4, 2, 0.2}, {2, 4, 0.2}}) {
    const auto r = lemma_bound_check(ell, k);
    EXPECT_EQ(r.degree, k / 2);
    EXPECT_NEAR(r.proof_floor, floor, 1e-12);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.lp_log2_norm, r.proof_floor);
    EXPECT_LT(r.pipeline.final_degree, r.degree);
    EXPECT_LE(r.pipeline.final_error, 1.0 / 3.0 + r.pipeline.dropped_mass + 1e-6);
    EXPECT_TRUE(r.selection_uniform);
  }
}
