#pragma once

// Boolean functions on the {-1,+1} cube and their Fourier spectra.
//
// Index convention used everywhere in the library: a point x is stored as an
// unsigned index whose bit i is set exactly when x_{i+1} = -1, so variable 1
// is the least significant bit. A subset S of variables uses the same bitmask
// encoding, which makes chi_S(x) = (-1)^{|S & x|}.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "xorlift/errors.hpp"

namespace xorlift {

using Point = std::uint32_t;
using Mask = std::uint32_t;

// Largest n accepted by the dense transforms.
inline constexpr int kMaxTransformVars = 24;

inline constexpr std::int8_t kStar = 0;

constexpr std::size_t cube_size(int n) { return std::size_t{1} << n; }

constexpr int chi(Mask subset, Point x) {
  return (std::popcount(subset & x) & 1) ? -1 : 1;
}

// Sign of x_i (1-based) at point x.
constexpr int coordinate(Point x, int i) { return ((x >> (i - 1)) & 1U) ? -1 : 1; }

inline void check_arity(int n) {
  if (n < 0 || n > kMaxTransformVars) {
    throw ResourceLimit("variable count " + std::to_string(n) + " outside [0, " +
                        std::to_string(kMaxTransformVars) + "]");
  }
}

class TruthTable {
 public:
  TruthTable() = default;

  TruthTable(int n, std::vector<std::int8_t> values) : n_(n), values_(std::move(values)) {
    check_arity(n);
    require(values_.size() == cube_size(n), "truth table length must be 2^n");
    for (auto v : values_) require(v == 1 || v == -1, "truth table entries must be +1 or -1");
  }

  template <typename Fn>
  static TruthTable from(int n, Fn&& fn) {
    check_arity(n);
    std::vector<std::int8_t> v(cube_size(n));
    for (Point x = 0; x < v.size(); ++x) v[x] = static_cast<std::int8_t>(fn(x));
    return TruthTable(n, std::move(v));
  }

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  int operator()(Point x) const { return values_[x]; }
  const std::vector<std::int8_t>& values() const { return values_; }

  std::vector<double> as_reals() const { return {values_.begin(), values_.end()}; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int n_ = 0;
  std::vector<std::int8_t> values_{1};
};

// Entries in {-1, +1, kStar}; kStar marks inputs outside the promise.
class PartialTruthTable {
 public:
  PartialTruthTable() = default;

  PartialTruthTable(int n, std::vector<std::int8_t> values) : n_(n), values_(std::move(values)) {
    check_arity(n);
    require(values_.size() == cube_size(n), "truth table length must be 2^n");
    bool any = false;
    for (auto v : values_) {
      require(v == 1 || v == -1 || v == kStar, "partial truth table entries must be +1, -1 or *");
      any = any || v != kStar;
    }
    require(any, "partial function has an empty promise domain");
  }

  explicit PartialTruthTable(const TruthTable& f) : n_(f.n()), values_(f.values()) {}

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  int operator()(Point x) const { return values_[x]; }
  bool in_promise(Point x) const { return values_[x] != kStar; }
  const std::vector<std::int8_t>& values() const { return values_; }

  std::size_t promise_count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](auto v) { return v != kStar; }));
  }
  bool is_total() const { return promise_count() == size(); }

  std::vector<Point> promise_points() const {
    std::vector<Point> pts;
    pts.reserve(size());
    for (Point x = 0; x < size(); ++x)
      if (in_promise(x)) pts.push_back(x);
    return pts;
  }

  friend bool operator==(const PartialTruthTable&, const PartialTruthTable&) = default;

 private:
  int n_ = 0;
  std::vector<std::int8_t> values_{1};
};

struct FourierSpectrum {
  int n = 0;
  std::vector<double> coeffs{0.0};  // coeffs[S] = f^(S)

  double operator[](Mask s) const { return coeffs[s]; }
};

namespace detail {

// Unnormalized in-place Walsh-Hadamard butterfly. Fixed loop order, so the
// result is bitwise reproducible.
inline void butterfly(std::span<double> a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = a[j];
        const double v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
}

inline int log2_exact(std::size_t len) {
  require(len > 0 && std::has_single_bit(len), "length must be a power of two");
  return std::countr_zero(len);
}

}  // namespace detail

inline FourierSpectrum wht_forward(std::span<const double> values) {
  const int n = detail::log2_exact(values.size());
  check_arity(n);
  FourierSpectrum s{n, {values.begin(), values.end()}};
  detail::butterfly(s.coeffs);
  const double scale = std::ldexp(1.0, -n);
  for (auto& c : s.coeffs) c *= scale;
  return s;
}

inline FourierSpectrum wht_forward(const TruthTable& f) {
  const auto v = f.as_reals();
  return wht_forward(v);
}

inline std::vector<double> wht_inverse(const FourierSpectrum& s) {
  require(s.coeffs.size() == cube_size(s.n), "spectrum length must be 2^n");
  std::vector<double> v = s.coeffs;
  detail::butterfly(v);
  return v;
}

inline double spectral_norm(const FourierSpectrum& s) {
  double total = 0.0;
  for (double c : s.coeffs) total += std::abs(c);
  return total;
}

// Sum of squared coefficients; equals 1 for a +-1 valued function.
inline double fourier_weight(const FourierSpectrum& s) {
  double total = 0.0;
  for (double c : s.coeffs) total += c * c;
  return total;
}

inline double min_entropy(const FourierSpectrum& s) {
  double top = 0.0;
  for (double c : s.coeffs) top = std::max(top, std::abs(c));
  if (top == 0.0) throw UndefinedQuantity("min-entropy of an all-zero spectrum");
  return -std::log2(top);
}

inline double influence(const FourierSpectrum& s) {
  double total = 0.0;
  for (Mask m = 0; m < s.coeffs.size(); ++m) total += std::popcount(m) * s.coeffs[m] * s.coeffs[m];
  return total;
}

// Common functions.

inline TruthTable parity(int n) {
  const Mask all = static_cast<Mask>(cube_size(n) - 1);
  return TruthTable::from(n, [all](Point x) { return chi(all, x); });
}

inline TruthTable constant(int n, int value) {
  return TruthTable::from(n, [value](Point) { return value; });
}

// Majority over an odd number of variables.
inline TruthTable majority(int n) {
  require(n % 2 == 1, "majority needs an odd variable count");
  return TruthTable::from(n, [n](Point x) { return 2 * std::popcount(x) > n ? -1 : 1; });
}

inline TruthTable dictator(int n, int i) {
  require(i >= 1 && i <= n, "dictator variable out of range");
  return TruthTable::from(n, [i](Point x) { return coordinate(x, i); });
}

}  // namespace xorlift
