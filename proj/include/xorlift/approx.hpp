#pragma once

// Approximate degree and approximate spectral norm computed exactly (to LP
// tolerance) by linear programming over the promise domain.

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "xorlift/boolfn.hpp"
#include "xorlift/constructions.hpp"
#include "xorlift/errors.hpp"
#include "xorlift/lp.hpp"
#include "xorlift/poly.hpp"

namespace xorlift {

struct ApproxTolerances {
  double feasibility = 1e-7;  // LP constraint satisfaction
  double objective = 1e-6;    // comparisons of optimal values
};

inline constexpr ApproxTolerances kTolerances{};

// Largest variable count accepted by the approximation LPs.
inline constexpr int kLPGuard = 14;

struct DegreeFit {
  int degree = 0;
  double error = 0.0;  // eps*(d)
  MultilinearPolynomial witness;
  LPSolution lp;
};

struct ApproxResult {
  double value = 0.0;  // degree (integral) or spectral norm
  MultilinearPolynomial witness;
  double epsilon = 0.0;
  std::vector<std::pair<int, double>> profile;  // (d, eps*(d)) for degree scans
};

namespace detail {

inline void check_lp_size(int n, int guard) {
  if (n > guard) {
    throw ResourceLimit("LP on " + std::to_string(n) + " variables exceeds guard " +
                        std::to_string(guard));
  }
}

inline void check_solved(const LPSolution& s, const char* what) {
  if (s.status != LPStatus::Optimal) {
    throw InvariantViolation(std::string(what) + " LP ended with status " + to_string(s.status));
  }
  ensure(s.primal_violation <= kTolerances.feasibility,
         std::string(what) + " LP solution violates its constraints by " +
             std::to_string(s.primal_violation));
  ensure(s.dual_violation <= kTolerances.feasibility,
         std::string(what) + " LP solution has a reduced cost off by " +
             std::to_string(s.dual_violation));
}

inline std::vector<Mask> monomials_up_to(int n, int d) {
  std::vector<Mask> out;
  for (Mask s = 0; s < cube_size(n); ++s)
    if (std::popcount(s) <= d) out.push_back(s);
  return out;
}

}  // namespace detail

// Least eps such that some polynomial of degree <= d is within eps of f on
// every promise input. Coefficients are split as a_S - b_S with a, b >= 0, and
// the program carries the margin t = 1 - eps in [0, 1]:
//   max t  s.t.  p(x) + t <= f(x) + 1  and  p(x) - t >= f(x) - 1,
// so the all-zero start (p = 0, eps = 1) is already feasible.
inline DegreeFit best_error_at_degree(const PartialTruthTable& f, int d, int guard = kLPGuard) {
  const int n = f.n();
  detail::check_lp_size(n, guard);
  require(d >= 0 && d <= n, "degree must lie in [0, n]");
  const auto mons = detail::monomials_up_to(n, d);
  const std::size_t nm = mons.size();
  const std::size_t margin = 2 * nm;

  LPProblem lp(2 * nm + 1);
  lp.set_bounds(margin, 0.0, 1.0);
  lp.objective[margin] = -1.0;
  for (Point x : f.promise_points()) {
    std::vector<double> row(lp.num_vars(), 0.0);
    for (std::size_t k = 0; k < nm; ++k) {
      const double c = chi(mons[k], x);
      row[2 * k] = c;
      row[2 * k + 1] = -c;
    }
    auto upper_row = row;
    upper_row[margin] = 1.0;
    lp.add(std::move(upper_row), Relation::LessEqual, f(x) + 1.0);
    row[margin] = -1.0;
    lp.add(std::move(row), Relation::GreaterEqual, f(x) - 1.0);
  }
  DegreeFit fit;
  fit.degree = d;
  fit.lp = solve_lp(lp);
  detail::check_solved(fit.lp, "degree");
  fit.error = 1.0 - fit.lp.x[margin];
  fit.witness = MultilinearPolynomial(VarSet::range(0, n));
  for (std::size_t k = 0; k < nm; ++k)
    fit.witness.add_term(VarSet(mons[k]), fit.lp.x[2 * k] - fit.lp.x[2 * k + 1]);
  return fit;
}

inline DegreeFit best_error_at_degree(const TruthTable& f, int d, int guard = kLPGuard) {
  return best_error_at_degree(PartialTruthTable(f), d, guard);
}

// Smallest d with eps*(d) <= eps + tol, found by a scan from d = 0; the
// profile lists eps*(d) for every scanned d.
inline ApproxResult approx_degree(const PartialTruthTable& f, double eps, int guard = kLPGuard,
                                  double tol = kTolerances.objective) {
  require(eps >= 0.0 && eps < 1.0, "epsilon must lie in [0, 1)");
  ApproxResult r;
  r.epsilon = eps;
  for (int d = 0; d <= f.n(); ++d) {
    DegreeFit fit = best_error_at_degree(f, d, guard);
    r.profile.emplace_back(d, fit.error);
    if (fit.error <= eps + tol) {
      r.value = d;
      r.witness = std::move(fit.witness);
      return r;
    }
  }
  throw InvariantViolation("degree scan found no exact interpolant at d = n");
}

inline ApproxResult approx_degree(const TruthTable& f, double eps, int guard = kLPGuard,
                                  double tol = kTolerances.objective) {
  return approx_degree(PartialTruthTable(f), eps, guard, tol);
}

// Rows indexed by all subsets S, two columns (u_x, v_x) per promise input x,
// entries chi_S(x) and -chi_S(x). Products run through the fast transform.
class SignedCharacterOperator final : public ConstraintOperator {
 public:
  SignedCharacterOperator(int n, std::vector<Point> points)
      : n_(n), points_(std::move(points)), buffer_(cube_size(n)) {}

  std::size_t rows() const override { return cube_size(n_); }
  std::size_t cols() const override { return 2 * points_.size(); }

  void column(std::size_t j, std::span<double> out) const override {
    const Point x = points_[j / 2];
    const int sign = (j % 2 == 0) ? 1 : -1;
    for (Mask s = 0; s < out.size(); ++s) out[s] = sign * chi(s, x);
  }
  void transpose_times(std::span<const double> y, std::span<double> out) const override {
    std::copy(y.begin(), y.end(), buffer_.begin());
    detail::butterfly(buffer_);
    for (std::size_t r = 0; r < points_.size(); ++r) {
      out[2 * r] = buffer_[points_[r]];
      out[2 * r + 1] = -buffer_[points_[r]];
    }
  }
  void times(std::span<const double> w, std::span<double> out) const override {
    std::fill(buffer_.begin(), buffer_.end(), 0.0);
    for (std::size_t r = 0; r < points_.size(); ++r) buffer_[points_[r]] = w[2 * r] - w[2 * r + 1];
    detail::butterfly(buffer_);
    std::copy(buffer_.begin(), buffer_.end(), out.begin());
  }

 private:
  int n_;
  std::vector<Point> points_;
  mutable std::vector<double> buffer_;
};

// The direct formulation of the approximate spectral norm as an LPProblem:
//   min sum_S (a_S + b_S)  s.t.  sum_S (a_S - b_S) chi_S(x) - e_x = f(x),
//   -eps <= e_x <= eps, for every promise input x.
// Columns: a_S at 2S, b_S at 2S+1, then e_x in promise order.
inline LPProblem spectral_norm_primal_lp(const PartialTruthTable& f, double eps) {
  require(eps >= 0.0 && eps < 1.0, "epsilon must lie in [0, 1)");
  const std::size_t nm = cube_size(f.n());
  const auto pts = f.promise_points();
  LPProblem lp(2 * nm + pts.size());
  for (std::size_t k = 0; k < 2 * nm; ++k) lp.objective[k] = 1.0;
  for (std::size_t r = 0; r < pts.size(); ++r) lp.set_bounds(2 * nm + r, -eps, eps);
  for (std::size_t r = 0; r < pts.size(); ++r) {
    const Point x = pts[r];
    std::vector<double> row(lp.num_vars(), 0.0);
    for (Mask s = 0; s < nm; ++s) {
      const double c = chi(s, x);
      row[2 * s] = c;
      row[2 * s + 1] = -c;
    }
    row[2 * nm + r] = -1.0;
    lp.add(std::move(row), Relation::Equal, f(x));
  }
  return lp;
}

// Minimum l1 coefficient mass of a polynomial within eps of f on the promise.
// Solved through the dual program
//   max sum_x y_x f(x) - eps sum_x |y_x|  s.t.  |sum_x y_x chi_S(x)| <= 1 for all S,
// with y = u - v. Its starting point y = 0 is feasible, and the optimal
// polynomial is read off the row prices: p^(S) = -price_S.
inline ApproxResult approx_spectral_norm(const PartialTruthTable& f, double eps,
                                         int guard = kLPGuard) {
  require(eps >= 0.0 && eps < 1.0, "epsilon must lie in [0, 1)");
  const int n = f.n();
  detail::check_lp_size(n, guard);
  const std::size_t nm = cube_size(n);
  const auto pts = f.promise_points();
  const SignedCharacterOperator op(n, pts);

  OperatorLP lp;
  lp.matrix = &op;
  for (Point x : pts) {
    lp.objective.push_back(eps - f(x));
    lp.objective.push_back(eps + f(x));
  }
  lp.lower.assign(2 * pts.size(), 0.0);
  lp.upper.assign(2 * pts.size(), kInfinity);
  lp.row_lower.assign(nm, -1.0);
  lp.row_upper.assign(nm, 1.0);
  const LPSolution sol = solve_lp(lp);
  detail::check_solved(sol, "spectral norm");

  ApproxResult r;
  r.epsilon = eps;
  r.value = -sol.objective;
  r.witness = MultilinearPolynomial(VarSet::range(0, n));
  for (Mask s = 0; s < nm; ++s) r.witness.add_term(VarSet(s), -sol.duals[s]);
  ensure(sup_error(r.witness, f) <= eps + kTolerances.objective,
         "spectral norm witness misses the error bound");
  ensure(std::abs(r.witness.l1_norm() - r.value) <= kTolerances.objective,
         "spectral norm witness mass differs from the optimum");
  return r;
}

inline ApproxResult approx_spectral_norm(const TruthTable& f, double eps, int guard = kLPGuard) {
  return approx_spectral_norm(PartialTruthTable(f), eps, guard);
}

// Upper bound sum|p^(S)| <= sqrt(C(n,<=d)) * ||p||_2 <= (4/3)(n+1)^{d/2} for a
// degree-d 1/3-approximation p of a total f.
struct CauchySchwarzReport {
  int n = 0;
  int adeg = 0;
  double norm = 0.0;
  double bound = 0.0;
  double log2_norm = 0.0;
  double log2_bound = 0.0;
  bool holds = false;
};

inline CauchySchwarzReport certify_cs_upper_bound(const TruthTable& f, int guard = 12) {
  detail::check_lp_size(f.n(), guard);
  CauchySchwarzReport rep;
  rep.n = f.n();
  rep.adeg = static_cast<int>(approx_degree(f, 1.0 / 3.0, guard).value);
  rep.norm = approx_spectral_norm(f, 1.0 / 3.0, guard).value;
  rep.log2_bound = std::log2(4.0 / 3.0) + 0.5 * rep.adeg * std::log2(rep.n + 1.0);
  rep.bound = std::exp2(rep.log2_bound);
  rep.log2_norm = std::log2(rep.norm);
  rep.holds = rep.norm <= rep.bound + kTolerances.objective;
  return rep;
}

// ||f o IND_1||_{1,1/3} >= 2^{cD} with D = adeg_{2/3}(f) and c = 1 - 3/D - 0.01.
struct IndexingLiftReport {
  int degree = 0;  // D
  double c = 0.0;
  double norm = 0.0;
  double bound = 0.0;
  bool skipped = false;  // D <= 3 makes the bound vacuous
  bool holds = false;
};

inline IndexingLiftReport indexing_lift_check(const TruthTable& f, int guard = kLPGuard) {
  IndexingLiftReport rep;
  rep.degree = static_cast<int>(approx_degree(f, 2.0 / 3.0, guard).value);
  if (rep.degree <= 3) {
    rep.skipped = true;
    return rep;
  }
  rep.c = 1.0 - 3.0 / rep.degree - 0.01;
  rep.bound = std::exp2(rep.c * rep.degree);
  const auto lifted = compose(f, make_indexing(1), guard);
  rep.norm = approx_spectral_norm(lifted.table, 1.0 / 3.0, guard).value;
  rep.holds = rep.norm >= rep.bound - kTolerances.objective;
  return rep;
}

}  // namespace xorlift
