#pragma once

// Bounded two-phase revised simplex for small dense linear programs.
//
//   minimize  c.x  subject to  rows (<=, =, >=)  and  lower <= x <= upper.
//
// Every row gets a logical column; rows whose logical cannot start feasible
// also get an artificial column, and phase one minimizes the artificial sum.
// Logical and artificial columns are signed unit vectors, so only the block
// of basic structural columns over the rows no basic unit column covers needs
// an inverse. That kernel inverse is kept explicitly, updated after each
// pivot and recomputed from an LU factorization when residuals drift.
//
// Finite bounds are widened by small irregular amounts (a golden-ratio
// sequence, so runs are reproducible) while iterating, which breaks the heavy
// degeneracy of the Fourier LPs. Once the
// perturbed problem is optimal the true bounds come back and a dual simplex
// pass restores primal feasibility.
//
// The constraint matrix is reached only through ConstraintOperator, so a
// structured matrix can price all columns with a fast transform.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "xorlift/errors.hpp"

namespace xorlift {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct LPProblem {
  std::vector<double> objective;  // minimized
  std::vector<LinearConstraint> constraints;
  // Empty means the default bounds 0 <= x < inf.
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LPProblem(std::size_t num_vars = 0) : objective(num_vars, 0.0) {}

  std::size_t num_vars() const { return objective.size(); }

  double lower_bound(std::size_t j) const { return lower.empty() ? 0.0 : lower[j]; }
  double upper_bound(std::size_t j) const { return upper.empty() ? kInfinity : upper[j]; }

  void set_bounds(std::size_t j, double lo, double hi) {
    if (lower.empty()) lower.assign(num_vars(), 0.0);
    if (upper.empty()) upper.assign(num_vars(), kInfinity);
    lower[j] = lo;
    upper[j] = hi;
  }

  void add(std::vector<double> coeffs, Relation rel, double rhs) {
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  // Row prices y with reduced costs c - A^T y; a row at its upper end has
  // y <= 0 and a row at its lower end has y >= 0.
  std::vector<double> duals;
  double primal_violation = 0.0;  // worst row or bound violation at x
  double dual_violation = 0.0;    // worst reduced cost of the wrong sign
  std::int64_t iterations = 0;
};

// Bland: smallest eligible index, always. Devex: approximate steepest edge,
// handing over to Bland's rule during runs of degenerate steps.
enum class Pricing { Bland, Devex };

struct SimplexOptions {
  Pricing pricing = Pricing::Devex;
  int degenerate_switch = 30;  // consecutive degenerate steps before Bland takes over
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-7;
  std::int64_t max_iterations = 1'000'000;
  std::size_t max_rows = 8192;  // the kernel inverse is dense
  double perturbation = 1e-6;   // relative bound widening; 0 disables it
};

// Column access to an m x n constraint matrix.
class ConstraintOperator {
 public:
  virtual ~ConstraintOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  // out (length m) = column j.
  virtual void column(std::size_t j, std::span<double> out) const = 0;
  // out (length n): out_j = y . A_j.
  virtual void transpose_times(std::span<const double> y, std::span<double> out) const = 0;
  // out (length m) = A x.
  virtual void times(std::span<const double> x, std::span<double> out) const = 0;
};

// Row-wise dense matrix borrowed from an LPProblem.
class DenseRowsOperator final : public ConstraintOperator {
 public:
  DenseRowsOperator(const std::vector<LinearConstraint>& rows, std::size_t cols)
      : rows_(rows), cols_(cols) {}

  std::size_t rows() const override { return rows_.size(); }
  std::size_t cols() const override { return cols_; }

  void column(std::size_t j, std::span<double> out) const override {
    for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = rows_[i].coeffs[j];
  }
  void transpose_times(std::span<const double> y, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (y[i] == 0.0) continue;
      const double* a = rows_[i].coeffs.data();
      for (std::size_t j = 0; j < cols_; ++j) out[j] += y[i] * a[j];
    }
  }
  void times(std::span<const double> x, std::span<double> out) const override {
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < cols_; ++j)
      if (x[j] != 0.0) nz.push_back(j);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double* a = rows_[i].coeffs.data();
      double s = 0.0;
      for (std::size_t j : nz) s += a[j] * x[j];
      out[i] = s;
    }
  }

 private:
  const std::vector<LinearConstraint>& rows_;
  std::size_t cols_;
};

// minimize c.x  s.t.  row_lower <= A x <= row_upper,  lower <= x <= upper,
// with A given by an operator.
struct OperatorLP {
  const ConstraintOperator* matrix = nullptr;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;

  void validate() const {
    require(matrix != nullptr, "LP has no constraint matrix");
    const std::size_t n = matrix->cols();
    const std::size_t m = matrix->rows();
    require(objective.size() == n && lower.size() == n && upper.size() == n,
            "objective/bounds length differs from variable count");
    require(row_lower.size() == m && row_upper.size() == m, "row bounds length differs from row count");
    for (std::size_t i = 0; i < m; ++i) {
      require(!std::isnan(row_lower[i]) && !std::isnan(row_upper[i]), "row bounds must not be NaN");
      require(row_lower[i] <= row_upper[i], "row lower bound exceeds upper bound");
      require(row_lower[i] < kInfinity && row_upper[i] > -kInfinity, "empty row range");
    }
    for (std::size_t j = 0; j < n; ++j) {
      require(std::isfinite(objective[j]), "objective coefficients must be finite");
      require(!std::isnan(lower[j]) && !std::isnan(upper[j]), "variable bounds must not be NaN");
      require(lower[j] <= upper[j], "variable lower bound exceeds upper bound");
      require(lower[j] < kInfinity && upper[j] > -kInfinity, "empty variable range");
    }
  }
};

namespace detail {

class RevisedSimplex {
 public:
  RevisedSimplex(const OperatorLP& lp, const SimplexOptions& opt)
      : lp_(lp), a_(*lp.matrix), opt_(opt) {}

  LPSolution run() {
    lp_.validate();
    setup();
    LPSolution sol;
    if (artificials_ > 0) {
      phase_costs(true);
      const LPStatus s1 = iterate(sol.iterations);
      if (s1 == LPStatus::IterationLimit) return finish(sol, s1);
      ensure(s1 == LPStatus::Optimal, "phase one left its bounded region");
      double infeas = 0.0;
      for (std::size_t j = first_artificial_; j < total_; ++j) infeas = std::max(infeas, x_[j]);
      if (infeas > opt_.feasibility_tolerance) return finish(sol, LPStatus::Infeasible);
      for (std::size_t j = first_artificial_; j < total_; ++j) {
        upper_[j] = 0.0;
        if (status_[j] != Status::Basic) x_[j] = 0.0;
      }
      drive_out_artificials();
    }
    phase_costs(false);
    LPStatus s2 = iterate(sol.iterations);
    if (s2 == LPStatus::Optimal && perturbed_) {
      remove_perturbation();
      s2 = dual_cleanup(sol.iterations);
      if (s2 == LPStatus::Optimal) s2 = iterate(sol.iterations);
    }
    if (s2 == LPStatus::Optimal && since_refactor_ > 0) {
      // Clean values from a fresh factorization, then confirm optimality.
      refactor();
      s2 = iterate(sol.iterations);
    }
    return finish(sol, s2);
  }

 private:
  enum class Status : std::uint8_t { Basic, AtLower, AtUpper, Free };

  // Columns: structural [0, n), logical [n, n+m), artificial [n+m, total).
  bool is_structural(std::size_t j) const { return j < n_; }
  bool is_logical(std::size_t j) const { return j >= n_ && j < first_artificial_; }
  bool is_artificial(std::size_t j) const { return j >= first_artificial_; }

  void setup() {
    m_ = a_.rows();
    n_ = a_.cols();
    if (m_ > opt_.max_rows) {
      throw ResourceLimit("LP with " + std::to_string(m_) + " rows exceeds the solver guard of " +
                          std::to_string(opt_.max_rows));
    }
    first_artificial_ = n_ + m_;
    lower_ = lp_.lower;
    upper_ = lp_.upper;
    // Row i reads A_i x + s_i = 0, so its logical s_i ranges over -[row bounds].
    for (std::size_t i = 0; i < m_; ++i) {
      lower_.push_back(-lp_.row_upper[i]);
      upper_.push_back(-lp_.row_lower[i]);
    }
    true_lower_ = lower_;
    true_upper_ = upper_;
    if (opt_.perturbation > 0.0) perturb_bounds();
    x_.assign(n_ + m_, 0.0);
    status_.assign(n_ + m_, Status::AtLower);
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
        status_[j] = Status::AtLower;
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
        status_[j] = Status::AtUpper;
      } else {
        status_[j] = Status::Free;
      }
    }
    std::vector<double> ax(m_);
    a_.times(std::span<const double>(x_.data(), n_), ax);
    head_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double r = -ax[i];
      const std::size_t lj = n_ + i;
      if (r >= lower_[lj] && r <= upper_[lj]) {
        head_[i] = lj;
        x_[lj] = r;
        status_[lj] = Status::Basic;
        continue;
      }
      // The logical sits at its nearest bound and an artificial absorbs the rest.
      const bool below = r < lower_[lj];
      x_[lj] = below ? lower_[lj] : upper_[lj];
      status_[lj] = below ? Status::AtLower : Status::AtUpper;
      const double gap = r - x_[lj];
      const double sign = gap >= 0.0 ? 1.0 : -1.0;
      art_rows_.push_back(i);
      art_sign_.push_back(sign);
      lower_.push_back(0.0);
      upper_.push_back(kInfinity);
      x_.push_back(std::abs(gap));
      status_.push_back(Status::Basic);
      head_[i] = x_.size() - 1;
      ++artificials_;
    }
    total_ = x_.size();
    kinv_.assign(m_ * m_, 0.0);
    pslot_.assign(m_, kNone);
    rslot_.assign(m_, kNone);
    weight_.assign(total_, 1.0);
    cost_.assign(total_, 0.0);
    y_.assign(m_, 0.0);
    d_.assign(total_, 0.0);
    work_m_.assign(m_, 0.0);
    rho_.assign(m_, 0.0);
    km_.assign(m_, 0.0);
    kn_.assign(n_, 0.0);
    ka_.assign(m_, 0.0);
    kc_.assign(m_, 0.0);
    work_n_.assign(n_, 0.0);
    alpha_.assign(m_, 0.0);
    row_alpha_.assign(total_, 0.0);
  }

  void perturb_bounds() {
    double u = 0.0;
    auto widen = [&](double bound) {
      u += 0.6180339887498949;
      u -= std::floor(u);
      return opt_.perturbation * (1.0 + std::abs(bound)) * (1.0 + u);
    };
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (std::isfinite(lower_[j])) lower_[j] -= widen(lower_[j]);
      if (std::isfinite(upper_[j])) upper_[j] += widen(upper_[j]);
    }
    perturbed_ = true;
  }

  void remove_perturbation() {
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      lower_[j] = true_lower_[j];
      upper_[j] = true_upper_[j];
      if (status_[j] == Status::AtLower) x_[j] = lower_[j];
      if (status_[j] == Status::AtUpper) x_[j] = upper_[j];
    }
    perturbed_ = false;
    refactor();
  }

  // Dual simplex from a dual feasible basis: the most violated basic variable
  // leaves at the bound it violates.
  LPStatus dual_cleanup(std::int64_t& iterations) {
    const double tol = opt_.feasibility_tolerance;
    for (;;) {
      std::size_t r = SIZE_MAX;
      double worst = tol;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t h = head_[i];
        const double v = std::max(lower_[h] - x_[h], x_[h] - upper_[h]);
        if (v > worst) {
          worst = v;
          r = i;
        }
      }
      if (r == SIZE_MAX) return LPStatus::Optimal;
      if (iterations >= opt_.max_iterations) return LPStatus::IterationLimit;
      ++iterations;

      const std::size_t h = head_[r];
      const bool below = x_[h] < lower_[h];
      const double want = below ? 1.0 : -1.0;  // required direction of x_h
      basis_row(r, rho_);
      price_vector(rho_, row_alpha_);
      // Raising x_j by t moves x_h by -alpha_rj t.
      std::size_t q = SIZE_MAX;
      double q_dir = 1.0;
      double best_ratio = kInfinity;
      double best_alpha = 0.0;
      double largest = 0.0;
      for (std::size_t j = 0; j < total_; ++j)
        if (status_[j] != Status::Basic) largest = std::max(largest, std::abs(row_alpha_[j]));
      const double floor = std::max(opt_.pivot_tolerance, kRelativePivot * largest);
      for (std::size_t j = 0; j < total_; ++j) {
        if (status_[j] == Status::Basic || fixed(j)) continue;
        const double a = row_alpha_[j];
        if (std::abs(a) <= floor) continue;
        const double dir = -a * want > 0.0 ? 1.0 : -1.0;
        if (status_[j] == Status::AtLower && dir < 0.0) continue;
        if (status_[j] == Status::AtUpper && dir > 0.0) continue;
        const double ratio = std::max(dir * d_[j], 0.0) / std::abs(a);
        if (ratio < best_ratio - kTieTolerance ||
            (ratio <= best_ratio + kTieTolerance && std::abs(a) > best_alpha)) {
          best_ratio = ratio;
          best_alpha = std::abs(a);
          q = j;
          q_dir = dir;
        }
      }
      if (q == SIZE_MAX) return LPStatus::Infeasible;
      ftran(q);
      const double target = below ? lower_[h] : upper_[h];
      const double theta = (x_[h] - target) / (q_dir * alpha_[r]);
      if (!pivot(q, q_dir, Step{std::max(theta, 0.0), r, !below})) {
        refactor();
        continue;
      }
      ++since_refactor_;
      if (since_refactor_ >= std::max<std::size_t>(200, m_)) refactor();
    }
  }

  // Column j of [A | I | artificials].
  void full_column(std::size_t j, std::span<double> out) const {
    if (is_structural(j)) {
      a_.column(j, out);
      return;
    }
    std::fill(out.begin(), out.end(), 0.0);
    if (is_logical(j)) {
      out[j - n_] = 1.0;
    } else {
      out[art_rows_[j - first_artificial_]] = art_sign_[j - first_artificial_];
    }
  }

  // out_j = v . (column j) for every column.
  void price_vector(std::span<const double> v, std::span<double> out) {
    a_.transpose_times(v, work_n_);
    std::copy(work_n_.begin(), work_n_.end(), out.begin());
    for (std::size_t i = 0; i < m_; ++i) out[n_ + i] = v[i];
    for (std::size_t k = 0; k < artificials_; ++k)
      out[first_artificial_ + k] = art_sign_[k] * v[art_rows_[k]];
  }

  // Row covered by the logical or artificial column j, and the sign there.
  std::size_t unit_row(std::size_t j) const {
    return is_logical(j) ? j - n_ : art_rows_[j - first_artificial_];
  }
  double unit_sign(std::size_t j) const { return is_logical(j) ? 1.0 : art_sign_[j - first_artificial_]; }

  double* kinv_row(std::size_t p) { return kinv_.data() + p * m_; }

  // With X the basic structural columns, T the rows covered by basic unit
  // columns and R the remaining rows, B z = a reads
  //   z_X = K^{-1} a_R,  z_i = s_i (a_t - (A_X z_X)_t)  for the unit at t,
  // where K = A[R, X]. kinv_ rows follow kx_ and its columns follow krow_.
  void solve_basis(std::span<const double> a, std::span<double> out) {
    const std::size_t k = kx_.size();
    for (std::size_t c = 0; c < k; ++c) ka_[c] = a[krow_[c]];
    std::fill(kn_.begin(), kn_.end(), 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const double* row = kinv_row(p);
      double s = 0.0;
      for (std::size_t c = 0; c < k; ++c) s += row[c] * ka_[c];
      kn_[kx_[p]] = s;
      out[kpos_[p]] = s;
    }
    if (k > 0) {
      a_.times(kn_, km_);
    } else {
      std::fill(km_.begin(), km_.end(), 0.0);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = head_[i];
      if (is_structural(j)) continue;
      const std::size_t t = unit_row(j);
      out[i] = unit_sign(j) * (a[t] - km_[t]);
    }
  }

  // rho = row r of B^{-1}, indexed by constraint row.
  void basis_row(std::size_t r, std::span<double> rho) {
    std::fill(rho.begin(), rho.end(), 0.0);
    const std::size_t k = kx_.size();
    const std::size_t j = head_[r];
    if (is_structural(j)) {
      const double* row = kinv_row(pslot_[r]);
      for (std::size_t c = 0; c < k; ++c) rho[krow_[c]] = row[c];
      return;
    }
    // rho_R = -s A[t, X] K^{-1}, rho_t = s.
    const std::size_t t = unit_row(j);
    const double s = unit_sign(j);
    rho[t] = s;
    if (k == 0) return;
    std::fill(km_.begin(), km_.end(), 0.0);
    km_[t] = 1.0;
    a_.transpose_times(km_, kn_);
    std::fill(kc_.begin(), kc_.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const double g = kn_[kx_[p]];
      if (g == 0.0) continue;
      const double* row = kinv_row(p);
      for (std::size_t c = 0; c < k; ++c) kc_[c] += g * row[c];
    }
    for (std::size_t c = 0; c < k; ++c) rho[krow_[c]] = -s * kc_[c];
  }

  // alpha = B^{-1} (column q). Entries below the pivot tolerance, absolute or
  // relative to the largest entry, are not eligible pivots.
  void ftran(std::size_t q) {
    full_column(q, work_m_);
    solve_basis(work_m_, alpha_);
    double largest = 0.0;
    for (std::size_t i = 0; i < m_; ++i) largest = std::max(largest, std::abs(alpha_[i]));
    pivot_floor_ = std::max(opt_.pivot_tolerance, kRelativePivot * largest);
  }

  // Kernel inverse after column q replaces the basic column at position r.
  // Expects alpha_ = B^{-1} A_q and rho_ = row r of B^{-1}, both before the
  // change.
  void update_kernel(std::size_t q, std::size_t r) {
    const std::size_t leaving = head_[r];
    const std::size_t k = kx_.size();
    if (is_structural(q) && is_structural(leaving)) {
      // Column replacement inside K.
      const std::size_t p = pslot_[r];
      double* pr = kinv_row(p);
      const double inv = 1.0 / alpha_[r];
      for (std::size_t c = 0; c < k; ++c) pr[c] *= inv;
      for (std::size_t p2 = 0; p2 < k; ++p2) {
        const double f = alpha_[kpos_[p2]];
        if (p2 == p || f == 0.0) continue;
        double* row = kinv_row(p2);
        for (std::size_t c = 0; c < k; ++c) row[c] -= f * pr[c];
      }
      kx_[p] = q;
    } else if (is_structural(q)) {
      // K grows by column q and row t; bordered inverse with
      // u = K^{-1} A[R, q], v = A[t, X] K^{-1} = -s rho_R, sigma = s alpha_r.
      const std::size_t t = unit_row(leaving);
      const double s = unit_sign(leaving);
      const double sigma = s * alpha_[r];
      for (std::size_t c = 0; c < k; ++c) kc_[c] = -s * rho_[krow_[c]] / sigma;
      for (std::size_t p = 0; p < k; ++p) {
        const double u = alpha_[kpos_[p]];
        double* row = kinv_row(p);
        if (u != 0.0)
          for (std::size_t c = 0; c < k; ++c) row[c] += u * kc_[c];
        row[k] = -u / sigma;
      }
      double* last = kinv_row(k);
      for (std::size_t c = 0; c < k; ++c) last[c] = -kc_[c];
      last[k] = 1.0 / sigma;
      pslot_[r] = k;
      rslot_[t] = k;
      kx_.push_back(q);
      kpos_.push_back(r);
      krow_.push_back(t);
    } else if (is_structural(leaving)) {
      // K loses column p and row c (the row q now covers):
      //   K'^{-1} = M_{-p,-c} - M_{-p,c} M_{p,-c} / M_{p,c}.
      const std::size_t t = unit_row(q);
      const std::size_t p = pslot_[r];
      const std::size_t c = rslot_[t];
      const double* pr = kinv_row(p);
      const double piv = pr[c];
      for (std::size_t p2 = 0; p2 < k; ++p2) {
        if (p2 == p) continue;
        double* row = kinv_row(p2);
        const double f = row[c] / piv;
        if (f == 0.0) continue;
        for (std::size_t c2 = 0; c2 < k; ++c2) row[c2] -= f * pr[c2];
      }
      const std::size_t back = k - 1;
      if (p != back) {
        std::copy_n(kinv_row(back), k, kinv_row(p));
        kx_[p] = kx_[back];
        kpos_[p] = kpos_[back];
        pslot_[kpos_[p]] = p;
      }
      kx_.pop_back();
      kpos_.pop_back();
      if (c != back) {
        for (std::size_t p2 = 0; p2 < back; ++p2) kinv_row(p2)[c] = kinv_row(p2)[back];
        krow_[c] = krow_[back];
        rslot_[krow_[c]] = c;
      }
      krow_.pop_back();
      pslot_[r] = kNone;
      rslot_[t] = kNone;
    } else {
      const std::size_t t_out = unit_row(leaving);
      const std::size_t t_in = unit_row(q);
      if (t_out == t_in) return;
      // Row c of K becomes A[t_out, X]. With w = A[t_out, X] - A[t_in, X],
      // w^T K^{-1} = -s rho_R - e_c and Sherman-Morrison applies.
      const std::size_t c = rslot_[t_in];
      const double s = unit_sign(leaving);
      for (std::size_t c2 = 0; c2 < k; ++c2) kc_[c2] = -s * rho_[krow_[c2]];
      kc_[c] -= 1.0;
      const double den = 1.0 + kc_[c];
      for (std::size_t p = 0; p < k; ++p) {
        double* row = kinv_row(p);
        const double f = row[c] / den;
        if (f == 0.0) continue;
        for (std::size_t c2 = 0; c2 < k; ++c2) row[c2] -= f * kc_[c2];
      }
      krow_[c] = t_out;
      rslot_[t_out] = c;
      rslot_[t_in] = kNone;
    }
  }

  void phase_costs(bool phase_one) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    if (phase_one) {
      for (std::size_t j = first_artificial_; j < total_; ++j) cost_[j] = 1.0;
    } else {
      std::copy(lp_.objective.begin(), lp_.objective.end(), cost_.begin());
    }
    std::fill(weight_.begin(), weight_.end(), 1.0);
    compute_duals();
  }

  // y = B^{-T} c_B and d = c - [A | I | art]^T y. On covered rows y_t = s c,
  // and y_R = K^{-T} (c_X - A[T, X]^T y_T).
  void compute_duals() {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = head_[i];
      if (!is_structural(j)) y_[unit_row(j)] = unit_sign(j) * cost_[j];
    }
    const std::size_t k = kx_.size();
    if (k > 0) {
      a_.transpose_times(y_, kn_);
      std::fill(kc_.begin(), kc_.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
      for (std::size_t p = 0; p < k; ++p) {
        const double h = cost_[kx_[p]] - kn_[kx_[p]];
        if (h == 0.0) continue;
        const double* row = kinv_row(p);
        for (std::size_t c = 0; c < k; ++c) kc_[c] += h * row[c];
      }
      for (std::size_t c = 0; c < k; ++c) y_[krow_[c]] = kc_[c];
    }
    price_vector(y_, d_);
    for (std::size_t j = 0; j < total_; ++j) d_[j] = cost_[j] - d_[j];
    for (std::size_t i = 0; i < m_; ++i) d_[head_[i]] = 0.0;
  }

  bool fixed(std::size_t j) const { return lower_[j] == upper_[j]; }

  // Objective decrease per unit step if column j enters in its feasible direction.
  double gain(std::size_t j) const {
    switch (status_[j]) {
      case Status::Basic: return 0.0;
      case Status::AtLower: return -d_[j];
      case Status::AtUpper: return d_[j];
      case Status::Free: return std::abs(d_[j]);
    }
    return 0.0;
  }

  std::size_t choose_entering(bool bland) const {
    const double tol = opt_.optimality_tolerance;
    std::size_t best = SIZE_MAX;
    double best_score = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      if (status_[j] == Status::Basic || fixed(j)) continue;
      const double g = gain(j);
      if (g <= tol) continue;
      if (bland) return j;
      const double score = g * g / weight_[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  struct Step {
    double theta = kInfinity;
    std::size_t row = SIZE_MAX;
    bool to_upper = false;
  };

  // Step length at which basic row i reaches a bound, with that bound widened
  // by `slack`.
  double row_limit(std::size_t i, double dir, double slack, bool& to_upper) const {
    const double rate = -dir * alpha_[i];
    const std::size_t h = head_[i];
    if (rate < 0.0 && std::isfinite(lower_[h])) {
      to_upper = false;
      return (x_[h] - lower_[h] + slack) / -rate;
    }
    if (rate > 0.0 && std::isfinite(upper_[h])) {
      to_upper = true;
      return (upper_[h] - x_[h] + slack) / rate;
    }
    return kInfinity;
  }

  // Harris two-pass ratio test: the step limit comes from bounds widened by the
  // feasibility tolerance, then the largest pivot within that limit wins. In
  // Bland mode the exact minimum ratio wins, ties to the smallest basic index.
  Step ratio_test(double dir, bool bland) const {
    Step s;
    if (bland) {
      double least = kInfinity;
      for (std::size_t i = 0; i < m_; ++i) {
        if (std::abs(alpha_[i]) <= pivot_floor_) continue;
        bool up = false;
        least = std::min(least, std::max(row_limit(i, dir, 0.0, up), 0.0));
      }
      if (!std::isfinite(least)) return s;
      // Among tied rows, the smallest basic index with a reasonably sized pivot.
      double tied_max = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (std::abs(alpha_[i]) <= pivot_floor_) continue;
        bool up = false;
        if (std::max(row_limit(i, dir, 0.0, up), 0.0) <= least + kTieTolerance)
          tied_max = std::max(tied_max, std::abs(alpha_[i]));
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (std::abs(alpha_[i]) < kTiedPivotShare * tied_max) continue;
        bool up = false;
        const double t = std::max(row_limit(i, dir, 0.0, up), 0.0);
        if (t <= least + kTieTolerance && (s.row == SIZE_MAX || head_[i] < head_[s.row]))
          s = {least, i, up};
      }
      return s;
    }
    double relaxed = kInfinity;
    for (std::size_t i = 0; i < m_; ++i) {
      if (std::abs(alpha_[i]) <= pivot_floor_) continue;
      bool up = false;
      relaxed = std::min(relaxed, row_limit(i, dir, opt_.feasibility_tolerance, up));
    }
    if (!std::isfinite(relaxed)) return s;
    double best = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double mag = std::abs(alpha_[i]);
      if (mag <= pivot_floor_ || mag <= best) continue;
      bool up = false;
      const double t = row_limit(i, dir, 0.0, up);
      if (t > relaxed) continue;
      best = mag;
      s = {std::max(t, 0.0), i, up};
    }
    return s;
  }

  LPStatus iterate(std::int64_t& iterations) {
    int degenerate_run = 0;
    for (;;) {
      const bool bland =
          opt_.pricing == Pricing::Bland || degenerate_run >= opt_.degenerate_switch;
      const std::size_t q = choose_entering(bland);
      if (q == SIZE_MAX) {
        if (since_refactor_ > 0 && primal_residual() > kDriftTolerance) {
          refactor();
          continue;
        }
        return LPStatus::Optimal;
      }
      if (iterations >= opt_.max_iterations) return LPStatus::IterationLimit;
      ++iterations;

      double dir = 1.0;
      if (status_[q] == Status::AtUpper) dir = -1.0;
      if (status_[q] == Status::Free) dir = d_[q] > 0.0 ? -1.0 : 1.0;
      ftran(q);

      const Step step = ratio_test(dir, bland);
      const double span = upper_[q] - lower_[q];
      if (span <= step.theta) {
        if (!std::isfinite(span)) return LPStatus::Unbounded;
        // Bound flip, no basis change.
        for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] -= dir * alpha_[i] * span;
        const bool was_lower = status_[q] == Status::AtLower;
        x_[q] = was_lower ? upper_[q] : lower_[q];
        status_[q] = was_lower ? Status::AtUpper : Status::AtLower;
        degenerate_run = 0;
        continue;
      }
      degenerate_run = step.theta > 1e-12 ? 0 : degenerate_run + 1;
      if (!pivot(q, dir, step)) {
        refactor();
        continue;
      }
      ++since_refactor_;
      if (since_refactor_ >= std::max<std::size_t>(200, m_) ||
          (since_refactor_ % 64 == 0 && primal_residual() > kDriftTolerance)) {
        refactor();
      }
    }
  }

  // Returns false, changing nothing, when the pivot element computed from the
  // column disagrees with the one from the row; the caller refactors.
  bool pivot(std::size_t q, double dir, const Step& step) {
    const std::size_t r = step.row;
    const std::size_t leaving = head_[r];
    const double arq = alpha_[r];

    // Row r of B^{-1} [A | I | art], for the Devex update.
    basis_row(r, rho_);
    price_vector(rho_, row_alpha_);
    if (since_refactor_ > 0 && std::abs(row_alpha_[q] - arq) > 1e-8 * (1.0 + std::abs(arq)))
      return false;

    for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] -= dir * alpha_[i] * step.theta;
    x_[q] += dir * step.theta;
    // The leaving variable keeps its computed value, which Harris may have put
    // just past the bound; snapping it would break A x = b.

    const double wq = std::max(weight_[q], 1.0);
    for (std::size_t j = 0; j < total_; ++j) {
      const double arj = row_alpha_[j];
      if (arj == 0.0 || status_[j] == Status::Basic) continue;
      const double ratio = arj / arq;
      weight_[j] = std::max(weight_[j], ratio * ratio * wq);
    }
    weight_[leaving] = std::max(wq / (arq * arq), 1.0);
    if (*std::max_element(weight_.begin(), weight_.end()) > kWeightReset)
      std::fill(weight_.begin(), weight_.end(), 1.0);

    update_kernel(q, r);

    if (!std::isfinite(lower_[leaving]) && !std::isfinite(upper_[leaving])) {
      status_[leaving] = Status::Free;
    } else {
      status_[leaving] = step.to_upper && !fixed(leaving) ? Status::AtUpper : Status::AtLower;
    }
    status_[q] = Status::Basic;
    head_[r] = q;
    // Fresh prices every pivot: updating them in place drifts on these LPs.
    compute_duals();
    return true;
  }

  // (A x)_i for the full column set.
  void full_times(std::span<double> out) const {
    a_.times(std::span<const double>(x_.data(), n_), out);
    for (std::size_t i = 0; i < m_; ++i) out[i] += x_[n_ + i];
    for (std::size_t k = 0; k < artificials_; ++k)
      out[art_rows_[k]] += art_sign_[k] * x_[first_artificial_ + k];
  }

  double primal_residual() {
    full_times(work_m_);
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) worst = std::max(worst, std::abs(work_m_[i]));
    return worst;
  }

  // Fresh kernel inverse from an LU factorization; basic values and duals
  // recomputed.
  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return;
    kx_.clear();
    kpos_.clear();
    krow_.clear();
    std::fill(pslot_.begin(), pslot_.end(), kNone);
    std::fill(rslot_.begin(), rslot_.end(), kNone);
    std::vector<char> covered(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = head_[i];
      if (is_structural(j)) {
        pslot_[i] = kx_.size();
        kx_.push_back(j);
        kpos_.push_back(i);
      } else {
        ensure(!covered[unit_row(j)], "simplex basis became singular");
        covered[unit_row(j)] = 1;
      }
    }
    for (std::size_t t = 0; t < m_; ++t) {
      if (covered[t]) continue;
      rslot_[t] = krow_.size();
      krow_.push_back(t);
    }
    ensure(krow_.size() == kx_.size(), "simplex basis became singular");
    const std::size_t k = kx_.size();
    if (k > 0) {
      const auto dim = static_cast<Eigen::Index>(k);
      Eigen::MatrixXd kernel(dim, dim);
      for (std::size_t p = 0; p < k; ++p) {
        full_column(kx_[p], work_m_);
        for (std::size_t c = 0; c < k; ++c)
          kernel(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(p)) = work_m_[krow_[c]];
      }
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(kernel);
      ensure(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 1e-13, "simplex basis became singular");
      const Eigen::MatrixXd inv = lu.inverse();
      for (std::size_t p = 0; p < k; ++p) {
        double* row = kinv_row(p);
        for (std::size_t c = 0; c < k; ++c)
          row[c] = inv(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c));
      }
    }

    // x_B = B^{-1} (b - N x_N)
    for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] = 0.0;
    full_times(work_m_);
    std::vector<double> rhs(m_);
    std::vector<double> xb(m_);
    for (std::size_t i = 0; i < m_; ++i) rhs[i] = -work_m_[i];
    solve_basis(rhs, xb);
    for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
    compute_duals();
  }

  // Basic artificials left at zero after phase one are swapped for any
  // non-artificial column with a usable pivot in their row.
  void drive_out_artificials() {
    bool pivoted = false;
    for (std::size_t r = 0; r < m_; ++r) {
      if (!is_artificial(head_[r])) continue;
      basis_row(r, rho_);
      price_vector(rho_, row_alpha_);
      std::size_t q = SIZE_MAX;
      double best = 1e-6;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (status_[j] == Status::Basic) continue;
        if (std::abs(row_alpha_[j]) > best) {
          best = std::abs(row_alpha_[j]);
          q = j;
        }
      }
      if (q == SIZE_MAX) continue;  // redundant row: the artificial stays, fixed at zero
      ftran(q);
      if (!pivot(q, 1.0, Step{0.0, r, false})) {
        refactor();
        --r;  // retry this row with the fresh inverse
        continue;
      }
      ++since_refactor_;
      pivoted = true;
    }
    if (pivoted) refactor();
  }

  LPSolution& finish(LPSolution& sol, LPStatus status) {
    sol.status = status;
    sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += lp_.objective[j] * sol.x[j];

    double viol = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      viol = std::max(viol, lp_.lower[j] - sol.x[j]);
      viol = std::max(viol, sol.x[j] - lp_.upper[j]);
    }
    std::vector<double> ax(m_);
    a_.times(sol.x, ax);
    for (std::size_t i = 0; i < m_; ++i) {
      viol = std::max(viol, lp_.row_lower[i] - ax[i]);
      viol = std::max(viol, ax[i] - lp_.row_upper[i]);
    }
    sol.primal_violation = viol;
    if (status == LPStatus::Optimal) {
      compute_duals();
      sol.duals = y_;
      double dv = 0.0;
      for (std::size_t j = 0; j < first_artificial_; ++j)
        if (status_[j] != Status::Basic && !fixed(j)) dv = std::max(dv, gain(j));
      sol.dual_violation = dv;
    }
    return sol;
  }

  static constexpr double kDriftTolerance = 1e-9;
  static constexpr double kWeightReset = 1e6;
  static constexpr double kTieTolerance = 1e-12;
  static constexpr double kRelativePivot = 1e-7;
  static constexpr double kTiedPivotShare = 1e-2;

  const OperatorLP& lp_;
  const ConstraintOperator& a_;
  SimplexOptions opt_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t artificials_ = 0;
  std::size_t total_ = 0;
  std::size_t since_refactor_ = 0;
  double pivot_floor_ = 0.0;
  std::vector<std::size_t> art_rows_;
  std::vector<double> art_sign_;
  bool perturbed_ = false;
  std::vector<double> true_lower_;
  std::vector<double> true_upper_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<Status> status_;
  std::vector<std::size_t> head_;
  static constexpr std::size_t kNone = SIZE_MAX;
  std::vector<double> kinv_;         // K^{-1}, rows at stride m
  std::vector<std::size_t> kx_;      // basic structural columns, kernel order
  std::vector<std::size_t> kpos_;    // their basis positions
  std::vector<std::size_t> krow_;    // uncovered rows, kernel order
  std::vector<std::size_t> pslot_;   // basis position -> kernel column
  std::vector<std::size_t> rslot_;   // row -> kernel row
  std::vector<double> rho_;
  std::vector<double> km_;
  std::vector<double> kn_;
  std::vector<double> ka_;
  std::vector<double> kc_;
  std::vector<double> cost_;
  std::vector<double> y_;
  std::vector<double> d_;
  std::vector<double> weight_;
  std::vector<double> work_m_;
  std::vector<double> work_n_;
  std::vector<double> alpha_;
  std::vector<double> row_alpha_;
};

}  // namespace detail

inline LPSolution solve_lp(const OperatorLP& lp, const SimplexOptions& options = {}) {
  return detail::RevisedSimplex(lp, options).run();
}

inline LPSolution solve_lp(const LPProblem& problem, const SimplexOptions& options = {}) {
  const std::size_t n = problem.num_vars();
  for (const auto& row : problem.constraints)
    require(row.coeffs.size() == n, "constraint width differs from variable count");
  require(problem.lower.empty() || problem.lower.size() == n, "lower bound vector has wrong length");
  require(problem.upper.empty() || problem.upper.size() == n, "upper bound vector has wrong length");
  const DenseRowsOperator op(problem.constraints, n);
  OperatorLP lp;
  lp.matrix = &op;
  lp.objective = problem.objective;
  for (std::size_t j = 0; j < n; ++j) {
    lp.lower.push_back(problem.lower_bound(j));
    lp.upper.push_back(problem.upper_bound(j));
  }
  for (const auto& row : problem.constraints) {
    lp.row_lower.push_back(row.relation == Relation::LessEqual ? -kInfinity : row.rhs);
    lp.row_upper.push_back(row.relation == Relation::GreaterEqual ? kInfinity : row.rhs);
  }
  return solve_lp(lp, options);
}

}  // namespace xorlift
