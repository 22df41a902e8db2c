#pragma once

// Sparse multilinear polynomials over +-1 variables identified by global ids.

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "xorlift/boolfn.hpp"
#include "xorlift/errors.hpp"

namespace xorlift {

using VarId = int;

inline constexpr int kMaxVarId = 63;

// Coefficients with magnitude below this are treated as zero after merging.
inline constexpr double kPruneTolerance = 1e-12;

// Set of variable ids in [0, 63].
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint64_t bits) : bits_(bits) {}
  VarSet(std::initializer_list<VarId> ids) {
    for (VarId id : ids) insert(id);
  }

  static VarSet range(VarId first, VarId last_exclusive) {
    VarSet s;
    for (VarId i = first; i < last_exclusive; ++i) s.insert(i);
    return s;
  }

  void insert(VarId id) {
    require(id >= 0 && id <= kMaxVarId, "variable id out of range: " + std::to_string(id));
    bits_ |= std::uint64_t{1} << id;
  }
  constexpr bool contains(VarId id) const { return (bits_ >> id) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(VarSet other) const { return (bits_ & other.bits_) != 0; }

  std::vector<VarId> ids() const {
    std::vector<VarId> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr VarSet operator|(VarSet a, VarSet b) { return VarSet(a.bits_ | b.bits_); }
  friend constexpr VarSet operator&(VarSet a, VarSet b) { return VarSet(a.bits_ & b.bits_); }
  friend constexpr VarSet operator-(VarSet a, VarSet b) { return VarSet(a.bits_ & ~b.bits_); }
  friend constexpr auto operator<=>(VarSet, VarSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

// Binding of some variables to +-1.
class PartialAssignment {
 public:
  PartialAssignment() = default;

  void set(VarId id, int value) {
    require(value == 1 || value == -1, "assignment values must be +1 or -1");
    bound_.insert(id);
    if (value == -1) {
      negative_.insert(id);
    } else {
      negative_ = negative_ - VarSet{id};
    }
  }

  // Binds ids[i] to the sign of bit i of `point`.
  static PartialAssignment from_point(const std::vector<VarId>& ids, Point point) {
    PartialAssignment a;
    for (std::size_t i = 0; i < ids.size(); ++i) a.set(ids[i], ((point >> i) & 1U) ? -1 : 1);
    return a;
  }

  VarSet bound() const { return bound_; }
  VarSet negative() const { return negative_; }
  bool binds(VarId id) const { return bound_.contains(id); }
  int value(VarId id) const {
    require(binds(id), "variable " + std::to_string(id) + " is unbound");
    return negative_.contains(id) ? -1 : 1;
  }

  // Union; bindings of `other` win on overlap.
  PartialAssignment merged(const PartialAssignment& other) const {
    PartialAssignment out;
    out.bound_ = bound_ | other.bound_;
    out.negative_ = (negative_ - other.bound_) | other.negative_;
    return out;
  }

 private:
  VarSet bound_;
  VarSet negative_;
};

class MultilinearPolynomial {
 public:
  using Terms = std::map<VarSet, double>;

  MultilinearPolynomial() = default;
  explicit MultilinearPolynomial(VarSet vars) : vars_(vars) {}

  MultilinearPolynomial(VarSet vars, const Terms& terms) : vars_(vars) {
    for (const auto& [s, c] : terms) add_term(s, c);
  }

  // Polynomial on variables 0..n-1 with coefficient coeffs[S] on chi_S.
  static MultilinearPolynomial from_spectrum(const FourierSpectrum& s) {
    MultilinearPolynomial p(VarSet::range(0, s.n));
    for (Mask m = 0; m < s.coeffs.size(); ++m) p.add_term(VarSet(m), s.coeffs[m]);
    return p;
  }

  void add_term(VarSet subset, double coeff) {
    require(subset.subset_of(vars_), "monomial uses a variable outside the polynomial");
    require(std::isfinite(coeff), "coefficient must be finite");
    const double merged = (terms_.count(subset) ? terms_[subset] : 0.0) + coeff;
    if (std::abs(merged) < kPruneTolerance) {
      terms_.erase(subset);
    } else {
      terms_[subset] = merged;
    }
  }

  VarSet vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  double coeff(VarSet s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? 0.0 : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [s, c] : terms_) d = std::max(d, s.size());
    return d;
  }

  double l1_norm() const {
    double total = 0.0;
    for (const auto& [s, c] : terms_) total += std::abs(c);
    return total;
  }

  double eval(const PartialAssignment& x) const {
    require(vars_.subset_of(x.bound()), "assignment leaves polynomial variables unbound");
    double total = 0.0;
    for (const auto& [s, c] : terms_) total += (std::popcount((s & x.negative()).bits()) & 1) ? -c : c;
    return total;
  }

  // Coefficient vector indexed by Mask for a polynomial on variables 0..n-1.
  std::vector<double> dense(int n) const {
    check_arity(n);
    require(vars_.subset_of(VarSet::range(0, n)), "polynomial variables exceed the cube arity");
    std::vector<double> out(cube_size(n), 0.0);
    for (const auto& [s, c] : terms_) out[static_cast<Mask>(s.bits())] = c;
    return out;
  }

  // Values at every point of {-1,1}^n, variables 0..n-1.
  std::vector<double> values(int n) const { return wht_inverse(FourierSpectrum{n, dense(n)}); }

  friend bool operator==(const MultilinearPolynomial&, const MultilinearPolynomial&) = default;

 private:
  VarSet vars_;
  Terms terms_;
};

inline MultilinearPolynomial restrict(const MultilinearPolynomial& p, const PartialAssignment& a) {
  const VarSet fixed = a.bound() & p.vars();
  MultilinearPolynomial out(p.vars() - fixed);
  for (const auto& [s, c] : p.terms()) {
    const bool flip = std::popcount((s & fixed & a.negative()).bits()) & 1;
    out.add_term(s - fixed, flip ? -c : c);
  }
  return out;
}

// Exact expectation when every variable in `averaged` is uniform and independent:
// monomials touching `averaged` vanish, the rest are untouched.
inline MultilinearPolynomial expect_uniform(const MultilinearPolynomial& p, VarSet averaged) {
  MultilinearPolynomial out(p.vars() - averaged);
  for (const auto& [s, c] : p.terms())
    if (!s.intersects(averaged)) out.add_term(s, c);
  return out;
}

struct DropResult {
  MultilinearPolynomial poly;
  double removed_mass = 0.0;
};

template <typename Pred>
DropResult drop_monomials(const MultilinearPolynomial& p, Pred&& pred) {
  DropResult r{MultilinearPolynomial(p.vars()), 0.0};
  for (const auto& [s, c] : p.terms()) {
    if (pred(s)) {
      r.removed_mass += std::abs(c);
    } else {
      r.poly.add_term(s, c);
    }
  }
  return r;
}

// Moves variable ids according to `mapping` (old -> new); unmapped ids stay.
inline MultilinearPolynomial rename(const MultilinearPolynomial& p,
                                    const std::map<VarId, VarId>& mapping) {
  auto move = [&](VarSet s) {
    VarSet out;
    for (VarId id : s.ids()) {
      auto it = mapping.find(id);
      out.insert(it == mapping.end() ? id : it->second);
    }
    return out;
  };
  const VarSet vars = move(p.vars());
  require(vars.size() == p.vars().size(), "renaming merges distinct variables");
  MultilinearPolynomial out(vars);
  for (const auto& [s, c] : p.terms()) out.add_term(move(s), c);
  return out;
}

// max |p(x) - f(x)| over promise inputs x; variables of p must lie in 0..n-1.
inline double sup_error(const MultilinearPolynomial& p, const PartialTruthTable& f) {
  if (f.promise_count() == 0) throw UndefinedQuantity("sup error over an empty promise domain");
  const auto v = p.values(f.n());
  double worst = 0.0;
  for (Point x = 0; x < f.size(); ++x)
    if (f.in_promise(x)) worst = std::max(worst, std::abs(v[x] - f(x)));
  return worst;
}

inline double sup_error(const MultilinearPolynomial& p, const TruthTable& f) {
  return sup_error(p, PartialTruthTable(f));
}

}  // namespace xorlift
