#pragma once

// The lifting argument for f^ADDR made executable: exact selection and
// relevance probabilities under the product distribution mu over non-star
// addresses, and the restrict / drop / average pipeline that turns an
// approximation of f^ADDR into a low-degree approximation of f.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "xorlift/approx.hpp"
#include "xorlift/boolfn.hpp"
#include "xorlift/constructions.hpp"
#include "xorlift/errors.hpp"
#include "xorlift/poly.hpp"

namespace xorlift {

using Rational = boost::rational<std::int64_t>;

inline constexpr std::size_t kEnumerationGuard = 1'000'000;
// Slack on the pipeline's error accounting.
inline constexpr double kPipelineSlack = 1e-8;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

struct RestrictionSample {
  PartialAssignment assignment;  // binds every address variable
  std::vector<int> selected;     // per block, the selected target index
  Rational probability;

  // Global ids of the selected targets.
  VarSet selected_targets(const BlockLayout& layout) const {
    VarSet s;
    for (int b = 0; b < layout.blocks; ++b) s.insert(layout.target_id(b, selected[b]));
    return s;
  }
};

namespace detail {

inline void check_layout(const AddressingFunction& a, const BlockLayout& layout) {
  require(layout.m == a.m() && layout.k == a.k(), "layout does not match the addressing function");
  require(layout.blocks >= 1, "layout needs at least one block");
  require(layout.total_vars() <= kMaxVarId + 1, "layout exceeds the polynomial variable range");
}

inline std::size_t support_power(std::size_t base, int blocks) {
  std::size_t total = 1;
  for (int b = 0; b < blocks; ++b) {
    if (total > kEnumerationGuard / std::max<std::size_t>(base, 1)) {
      throw ResourceLimit("mu support exceeds enumeration guard " + std::to_string(kEnumerationGuard));
    }
    total *= base;
  }
  return total;
}

}  // namespace detail

// Product of the per-block non-star addresses, uniform per block. Block 0
// varies slowest.
inline std::vector<RestrictionSample> mu_support(const AddressingFunction& a, const BlockLayout& layout) {
  detail::check_layout(a, layout);
  const auto support = a.support();
  require(!support.empty(), "addressing function selects * everywhere");
  const std::size_t total = detail::support_power(support.size(), layout.blocks);
  const Rational p(1, static_cast<std::int64_t>(total));

  std::vector<RestrictionSample> out;
  out.reserve(total);
  std::vector<std::size_t> digit(static_cast<std::size_t>(layout.blocks), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    RestrictionSample s;
    s.probability = p;
    for (int b = 0; b < layout.blocks; ++b) {
      const Point addr = support[digit[b]];
      for (int j = 0; j < layout.m; ++j) s.assignment.set(layout.address_id(b, j), ((addr >> j) & 1U) ? -1 : 1);
      s.selected.push_back(*a.select(addr));
    }
    out.push_back(std::move(s));
    for (int b = layout.blocks - 1; b >= 0; --b) {
      if (++digit[b] < support.size()) break;
      digit[b] = 0;
    }
  }
  return out;
}

inline std::vector<RestrictionSample> mu_support(const AddressingFunction& a, int blocks) {
  return mu_support(a, BlockLayout{blocks, a.m(), a.k()});
}

// Share of non-star addresses selecting target j.
inline Rational selection_probability(const AddressingFunction& a, int j) {
  require(j >= 0 && j < a.k(), "target index out of range");
  const auto support = a.support();
  require(!support.empty(), "addressing function selects * everywhere");
  std::int64_t hits = 0;
  for (Point addr : support) hits += *a.select(addr) == j;
  return {hits, static_cast<std::int64_t>(support.size())};
}

inline bool selection_is_uniform(const AddressingFunction& a) {
  const Rational first = selection_probability(a, 0);
  for (int j = 1; j < a.k(); ++j)
    if (selection_probability(a, j) != first) return false;
  return true;
}

// Probability under mu that every variable of the target monomial s is selected.
inline Rational relevance_probability(VarSet s, const AddressingFunction& a, const BlockLayout& layout) {
  detail::check_layout(a, layout);
  require(s.subset_of(layout.target_set()), "relevance is defined for target-only monomials");
  Rational p(1);
  for (int b = 0; b < layout.blocks; ++b) {
    int touched = -1;
    for (int j = 0; j < layout.k; ++j) {
      if (!s.contains(layout.target_id(b, j))) continue;
      if (touched >= 0) return Rational(0);
      touched = j;
    }
    if (touched >= 0) p *= selection_probability(a, touched);
  }
  return p;
}

inline Rational relevance_by_enumeration(VarSet s, const AddressingFunction& a, const BlockLayout& layout) {
  require(s.subset_of(layout.target_set()), "relevance is defined for target-only monomials");
  Rational p(0);
  for (const auto& z : mu_support(a, layout))
    if (s.subset_of(z.selected_targets(layout))) p += z.probability;
  return p;
}

// l1 mass of the monomials of p|_z that use only selected targets and have
// degree >= d.
inline double relevant_mass(const MultilinearPolynomial& p, const RestrictionSample& z,
                            const BlockLayout& layout, int d) {
  const VarSet selected = z.selected_targets(layout);
  const MultilinearPolynomial r = restrict(p, z.assignment);
  double mass = 0.0;
  for (const auto& [s, c] : r.terms())
    if (s.size() >= d && s.subset_of(selected)) mass += std::abs(c);
  return mass;
}

struct RelevantMass {
  double expected = 0.0;       // E_z of the relevant degree->=D mass
  double analytic_bound = 0.0;  // sum over |S & targets| >= D of |w_S| Pr[S & targets relevant]
  double markov_bound = 0.0;    // l1(p) times the largest such relevance probability
  double min = 0.0;
  std::size_t argmin = 0;  // first minimizer in enumeration order
};

inline RelevantMass expected_relevant_mass(const MultilinearPolynomial& p, const AddressingFunction& a,
                                           const BlockLayout& layout, int d) {
  const auto samples = mu_support(a, layout);
  require(p.vars().subset_of(VarSet::range(0, layout.total_vars())),
          "polynomial uses variables outside the layout");
  RelevantMass out;
  out.min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double m = relevant_mass(p, samples[i], layout, d);
    out.expected += to_double(samples[i].probability) * m;
    if (m < out.min) {
      out.min = m;
      out.argmin = i;
    }
  }
  const VarSet targets = layout.target_set();
  double worst = 0.0;
  for (const auto& [s, c] : p.terms()) {
    const VarSet t = s & targets;
    if (t.size() < d) continue;
    const double pr = to_double(relevance_probability(t, a, layout));
    out.analytic_bound += std::abs(c) * pr;
    worst = std::max(worst, pr);
  }
  out.markov_bound = p.l1_norm() * worst;
  return out;
}

struct PipelineReport {
  std::size_t z_index = 0;
  std::vector<int> selected;
  RelevantMass mass;
  double dropped_mass = 0.0;  // delta_1
  double input_error = 0.0;   // sup error of p against f^ADDR on the promise
  double final_error = 0.0;   // sup error of the result against f
  int final_degree = 0;
  MultilinearPolynomial result;  // on f's variables 0..blocks-1
};

// Restrict p at the least-mass z, drop relevant monomials of degree >= d,
// average out the unselected targets, then rename block b's selected target to
// variable b.
inline PipelineReport degree_reduction_pipeline(const MultilinearPolynomial& p, const AddressingFunction& a,
                                                const BlockLayout& layout, const TruthTable& f, int d,
                                                double eps_in) {
  detail::check_layout(a, layout);
  require(f.n() == layout.blocks, "outer function arity differs from the block count");
  require(d >= 1, "degree threshold must be positive");
  const Composed lifted = compose(f, a);
  PipelineReport rep;
  rep.input_error = sup_error(p, lifted.table);
  require(rep.input_error <= eps_in + kTolerances.objective,
          "polynomial does not approximate f^ADDR within the stated error");

  rep.mass = expected_relevant_mass(p, a, layout, d);
  ensure(rep.mass.min <= rep.mass.expected + kPipelineSlack, "no sample reaches the average mass");
  ensure(rep.mass.expected <= rep.mass.analytic_bound + kPipelineSlack,
         "expected relevant mass exceeds its termwise bound");
  ensure(rep.mass.analytic_bound <= rep.mass.markov_bound + kPipelineSlack,
         "termwise bound exceeds the l1 bound");

  const auto samples = mu_support(a, layout);
  const RestrictionSample& z = samples[rep.mass.argmin];
  rep.z_index = rep.mass.argmin;
  rep.selected = z.selected;
  const VarSet selected = z.selected_targets(layout);

  const MultilinearPolynomial p1 = restrict(p, z.assignment);
  auto dropped = drop_monomials(p1, [&](VarSet s) { return s.size() >= d && s.subset_of(selected); });
  rep.dropped_mass = dropped.removed_mass;
  const MultilinearPolynomial p3 = expect_uniform(dropped.poly, layout.target_set() - selected);

  std::map<VarId, VarId> to_outer;
  for (int b = 0; b < layout.blocks; ++b) to_outer[layout.target_id(b, z.selected[b])] = b;
  // Widen to all selected targets so that every outer variable exists.
  MultilinearPolynomial widened(selected, p3.terms());
  rep.result = rename(widened, to_outer);
  rep.final_degree = rep.result.degree();
  rep.final_error = sup_error(rep.result, f);

  ensure(rep.final_degree < d, "pipeline left a monomial of degree >= D");
  ensure(rep.final_error <= rep.input_error + rep.dropped_mass + kPipelineSlack,
         "pipeline error exceeds input error plus dropped mass");
  return rep;
}

struct LiftReport {
  int ell = 0;
  int k = 0;
  int degree = 0;  // D = adeg_{eps_degree}(PARITY_{k/2})
  int t = 0;       // selection denominator, l for HADD_l
  double eps = 0.0;
  double eps_degree = 0.0;
  double lp_norm = 0.0;
  double lp_log2_norm = 0.0;
  double proof_floor = 0.0;  // (D/10) log2 t
  bool holds = false;
  bool selection_uniform = false;
  PipelineReport pipeline;
};

inline LiftReport lemma_bound_check(int ell, int k, double eps = 1.0 / 3.0, double eps_degree = 0.99,
                                    int guard = kLPGuard) {
  check_paper_params(ell, k, guard);
  LiftReport rep;
  rep.ell = ell;
  rep.k = k;
  rep.t = ell;
  rep.eps = eps;
  rep.eps_degree = eps_degree;
  const TruthTable outer = parity(k / 2);
  const AddressingFunction hadd = make_hadd(ell);
  rep.selection_uniform = selection_is_uniform(hadd);
  rep.degree = static_cast<int>(approx_degree(outer, eps_degree, guard).value);

  const Composed lifted = paper_f_partial(ell, k, guard);
  const ApproxResult norm = approx_spectral_norm(lifted.table, eps, guard);
  rep.lp_norm = norm.value;
  rep.lp_log2_norm = std::log2(norm.value);
  rep.proof_floor = rep.degree / 10.0 * std::log2(static_cast<double>(rep.t));
  rep.holds = rep.lp_log2_norm >= rep.proof_floor - kTolerances.objective;
  rep.pipeline = degree_reduction_pipeline(norm.witness, hadd, lifted.layout, outer, rep.degree, eps);
  return rep;
}

}  // namespace xorlift
