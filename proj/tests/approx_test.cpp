#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "xorlift/approx.hpp"

using namespace xorlift;

namespace {

TruthTable from_index(int n, unsigned bits) {
  return TruthTable::from(n, [bits](Point x) { return ((bits >> x) & 1U) ? -1 : 1; });
}

void check_norm_witness(const ApproxResult& r, const PartialTruthTable& f, double eps) {
  EXPECT_LE(sup_error(r.witness, f), eps + 1e-6);
  EXPECT_NEAR(r.witness.l1_norm(), r.value, 1e-6);
}

// eps*(0): the best constant is 0 when both values occur, else the value.
double best_constant_error(const PartialTruthTable& f) {
  bool plus = false;
  bool minus = false;
  for (Point x : f.promise_points()) (f(x) == 1 ? plus : minus) = true;
  return plus && minus ? 1.0 : 0.0;
}

}  // namespace

TEST(BestError, FullDegreeIsExact) {
  for (unsigned bits = 0; bits < 256; bits += 37) {
    const auto f = from_index(3, bits);
    EXPECT_NEAR(best_error_at_degree(f, 3).error, 0.0, 1e-7);
  }
  EXPECT_NEAR(best_error_at_degree(constant(3, 1), 0).error, 0.0, 1e-7);
}

TEST(BestError, ParityBelowFullDegreeIsOne) {
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(best_error_at_degree(parity(n), n - 1).error, 1.0, 1e-7);
}

TEST(BestError, DegreeZeroIsBestConstant) {
  for (unsigned bits = 0; bits < 16; ++bits) {
    const auto f = PartialTruthTable(from_index(2, bits));
    EXPECT_NEAR(best_error_at_degree(f, 0).error, best_constant_error(f), 1e-7);
  }
}

TEST(BestError, Majority3AtDegreeOne) {
  // p = (x1 + x2 + x3)/2 has error 1/2 and no linear form does better:
  // averaging over the symmetric group keeps the error and forces
  // p = a + b(x1+x2+x3), whose best choice is b = 1/2, a = 0.
  EXPECT_NEAR(best_error_at_degree(majority(3), 1).error, 0.5, 1e-7);
}

TEST(BestError, WitnessMatchesReportedError) {
  const auto f = majority(5);
  for (int d = 0; d <= 5; ++d) {
    const auto fit = best_error_at_degree(f, d);
    EXPECT_LE(fit.witness.degree(), d);
    EXPECT_NEAR(sup_error(fit.witness, f), fit.error, 1e-6);
  }
}

TEST(ApproxDegree, Parity) {
  for (int n = 1; n <= 5; ++n) {
    const auto r = approx_degree(parity(n), 1.0 / 3.0);
    EXPECT_EQ(r.value, n);
    EXPECT_EQ(r.witness.degree(), n);
    EXPECT_LE(sup_error(r.witness, parity(n)), 1.0 / 3.0 + 1e-6);
  }
}

TEST(ApproxDegree, Constant) {
  for (double eps : {0.1, 0.5, 0.9}) EXPECT_EQ(approx_degree(constant(4, -1), eps).value, 0);
}

TEST(ApproxDegree, MonotoneInDegreeAndNestedInEps) {
  for (unsigned bits = 0; bits < 256; ++bits) {
    const auto f = from_index(3, bits);
    const auto r = approx_degree(f, 0.0);
    for (std::size_t i = 1; i < r.profile.size(); ++i)
      ASSERT_LE(r.profile[i].second, r.profile[i - 1].second + 1e-6) << bits;
    ASSERT_LE(approx_degree(f, 0.99).value, approx_degree(f, 1.0 / 3.0).value) << bits;
  }
}

TEST(ApproxDegree, Guard) {
  EXPECT_THROW(approx_degree(parity(15), 1.0 / 3.0), ResourceLimit);
  EXPECT_THROW(approx_degree(parity(3), 1.0), InvalidInput);
}

TEST(SpectralNorm, ParityAndConstant) {
  for (int n = 1; n <= 5; ++n) {
    for (double eps : {0.0, 0.25, 1.0 / 3.0, 0.9}) {
      const auto r = approx_spectral_norm(parity(n), eps);
      EXPECT_NEAR(r.value, 1.0 - eps, 1e-6);
      check_norm_witness(r, PartialTruthTable(parity(n)), eps);
    }
  }
  EXPECT_NEAR(approx_spectral_norm(constant(3, 1), 1.0 / 3.0).value, 2.0 / 3.0, 1e-6);
}

TEST(SpectralNorm, AgreesWithDirectPrimalFormulation) {
  std::mt19937 rng(13);
  std::bernoulli_distribution coin(0.5);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto f = TruthTable::from(n, [&](Point) { return coin(rng) ? 1 : -1; });
      const auto dual_form = approx_spectral_norm(f, 1.0 / 3.0);
      const auto primal = solve_lp(spectral_norm_primal_lp(PartialTruthTable(f), 1.0 / 3.0));
      ASSERT_EQ(primal.status, LPStatus::Optimal);
      EXPECT_NEAR(dual_form.value, primal.objective, 1e-6);
      // Complementarity of the split pairs at the primal optimum.
      for (Mask s = 0; s < cube_size(n); ++s)
        EXPECT_LE(std::min(primal.x[2 * s], primal.x[2 * s + 1]), 1e-7);
      check_norm_witness(dual_form, PartialTruthTable(f), 1.0 / 3.0);
    }
  }
}

TEST(SpectralNorm, PartialFunctionConstrainsOnlyThePromise) {
  const auto c = paper_f_partial(2, 2);
  const auto r = approx_spectral_norm(c.table, 1.0 / 3.0);
  check_norm_witness(r, c.table, 1.0 / 3.0);
  const auto total = approx_spectral_norm(paper_F(2, 2).table, 1.0 / 3.0);
  EXPECT_LE(r.value, total.value + 1e-6);
}

TEST(SpectralNorm, BoundedByExactNormAndMonotoneInEps) {
  std::mt19937 rng(17);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = TruthTable::from(5, [&](Point) { return coin(rng) ? 1 : -1; });
    const double exact = spectral_norm(wht_forward(f));
    double prev = exact + 1e-6;
    for (double eps : {0.0, 0.1, 1.0 / 3.0, 0.6}) {
      const double v = approx_spectral_norm(f, eps).value;
      EXPECT_LE(v, prev + 1e-6);
      prev = v;
    }
    EXPECT_NEAR(approx_spectral_norm(f, 0.0).value, exact, 1e-6);
  }
}

TEST(CauchySchwarz, Examples) {
  const auto p3 = certify_cs_upper_bound(parity(3));
  EXPECT_TRUE(p3.holds);
  EXPECT_NEAR(p3.norm, 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(p3.bound, 4.0 / 3.0 * 8.0, 1e-9);
  for (unsigned bits = 0; bits < 16; ++bits) EXPECT_TRUE(certify_cs_upper_bound(from_index(2, bits)).holds);
  EXPECT_TRUE(certify_cs_upper_bound(paper_F(2, 2).table).holds);
}

TEST(IndexingLift, SkipsSmallDegree) {
  const auto r = indexing_lift_check(parity(3));
  EXPECT_TRUE(r.skipped);
  EXPECT_EQ(r.degree, 3);
}
