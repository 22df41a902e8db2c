#pragma once

// Hadamard codewords, addressing functions, composition f^ADDR, the separating
// function F and its XOR lift.

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xorlift/boolfn.hpp"
#include "xorlift/errors.hpp"
#include "xorlift/poly.hpp"

namespace xorlift {

using SignVector = std::vector<std::int8_t>;

// Largest total variable count for compose/paper_F tables.
inline constexpr int kComposeGuard = 24;
// Largest n for which the XOR-lift matrix may be materialized.
inline constexpr int kXorLiftGuard = 14;

inline Point signs_to_point(const SignVector& s) {
  Point p = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] == 1 || s[i] == -1, "sign vectors hold +1/-1 only");
    if (s[i] == -1) p |= Point{1} << i;
  }
  return p;
}

inline SignVector point_to_signs(Point p, int len) {
  SignVector s(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) s[i] = ((p >> i) & 1U) ? -1 : 1;
  return s;
}

// h(z): coordinate S (bitmask over z's positions) equals prod_{i in S} z_i.
inline SignVector hadamard_encode(const SignVector& z) {
  require(z.size() <= 20, "codeword too long");
  const Point zp = signs_to_point(z);
  SignVector out(cube_size(static_cast<int>(z.size())));
  for (Mask s = 0; s < out.size(); ++s) out[s] = static_cast<std::int8_t>(chi(s, zp));
  return out;
}

inline std::optional<SignVector> hadamard_decode(const SignVector& x) {
  require(!x.empty() && std::has_single_bit(x.size()), "codeword length must be a power of two");
  const int len = std::countr_zero(x.size());
  if (x[0] != 1) return std::nullopt;
  SignVector z(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) z[i] = x[std::size_t{1} << i];
  if (hadamard_encode(z) != x) return std::nullopt;
  return z;
}

// An (m,k)-addressing function given by its selector g: {-1,1}^m -> [k] + {*}.
// Targets are 0-based; kStarTarget marks an address selecting *.
class AddressingFunction {
 public:
  static constexpr int kStarTarget = -1;

  AddressingFunction(int m, int k, std::vector<int> selector)
      : m_(m), k_(k), selector_(std::move(selector)) {
    require(m >= 0 && m <= kComposeGuard, "address arity out of range");
    require(k >= 1, "addressing function needs at least one target");
    require(selector_.size() == cube_size(m), "selector table must have 2^m entries");
    std::vector<bool> hit(static_cast<std::size_t>(k), false);
    for (int t : selector_) {
      require(t == kStarTarget || (t >= 0 && t < k), "selector entry out of range");
      if (t != kStarTarget) hit[t] = true;
    }
    for (int j = 0; j < k; ++j)
      require(hit[j], "selector is not surjective: target " + std::to_string(j) + " unreachable");
  }

  int m() const { return m_; }
  int k() const { return k_; }
  const std::vector<int>& selector() const { return selector_; }

  std::optional<int> select(Point address) const {
    const int t = selector_.at(address);
    if (t == kStarTarget) return std::nullopt;
    return t;
  }

  // Addresses that do not select *, in increasing index order.
  std::vector<Point> support() const {
    std::vector<Point> out;
    for (Point a = 0; a < selector_.size(); ++a)
      if (selector_[a] != kStarTarget) out.push_back(a);
    return out;
  }

 private:
  int m_;
  int k_;
  std::vector<int> selector_;
};

// HADD_l: codeword h(z) selects target i where i is the integer encoding of z.
inline AddressingFunction make_hadd(int ell) {
  require(ell >= 2 && std::has_single_bit(static_cast<unsigned>(ell)),
          "HADD length must be a power of two >= 2");
  require(ell <= kComposeGuard, "HADD length exceeds size guard");
  const int log_ell = std::countr_zero(static_cast<unsigned>(ell));
  std::vector<int> sel(cube_size(ell), AddressingFunction::kStarTarget);
  for (int i = 0; i < ell; ++i) {
    const SignVector w = hadamard_encode(point_to_signs(static_cast<Point>(i), log_ell));
    sel[signs_to_point(w)] = i;
  }
  return {ell, ell, std::move(sel)};
}

// IND_k: address x selects target bin(x).
inline AddressingFunction make_indexing(int k) {
  require(k >= 1 && k <= 16, "indexing arity out of range");
  std::vector<int> sel(cube_size(k));
  for (std::size_t a = 0; a < sel.size(); ++a) sel[a] = static_cast<int>(a);
  return {k, 1 << k, std::move(sel)};
}

// Global variable ids for f^ADDR: block i holds address ids i(m+k)..i(m+k)+m-1
// followed by target ids i(m+k)+m..(i+1)(m+k)-1.
struct BlockLayout {
  int blocks = 0;
  int m = 0;
  int k = 0;

  int width() const { return m + k; }
  int total_vars() const { return blocks * width(); }
  VarId address_id(int block, int j) const { return block * width() + j; }
  VarId target_id(int block, int j) const { return block * width() + m + j; }

  std::vector<VarId> address_ids() const {
    std::vector<VarId> out;
    for (int b = 0; b < blocks; ++b)
      for (int j = 0; j < m; ++j) out.push_back(address_id(b, j));
    return out;
  }
  std::vector<VarId> target_ids() const {
    std::vector<VarId> out;
    for (int b = 0; b < blocks; ++b)
      for (int j = 0; j < k; ++j) out.push_back(target_id(b, j));
    return out;
  }
  VarSet address_set() const {
    VarSet s;
    for (VarId id : address_ids()) s.insert(id);
    return s;
  }
  VarSet target_set() const {
    VarSet s;
    for (VarId id : target_ids()) s.insert(id);
    return s;
  }

  Point address_of(Point x, int block) const {
    return (x >> (block * width())) & static_cast<Point>(cube_size(m) - 1);
  }
  Point targets_of(Point x, int block) const {
    return (x >> (block * width() + m)) & static_cast<Point>(cube_size(k) - 1);
  }

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

struct Composed {
  PartialTruthTable table;
  BlockLayout layout;
};

struct CompletedFunction {
  TruthTable table;
  BlockLayout layout;
};

inline Composed compose(const TruthTable& f, const AddressingFunction& addr,
                        int guard = kComposeGuard) {
  const BlockLayout layout{f.n(), addr.m(), addr.k()};
  if (layout.total_vars() > guard) {
    throw ResourceLimit("composition needs " + std::to_string(layout.total_vars()) +
                        " variables, guard is " + std::to_string(guard));
  }
  std::vector<std::int8_t> values(cube_size(layout.total_vars()));
  for (Point x = 0; x < values.size(); ++x) {
    Point inner = 0;
    bool star = false;
    for (int b = 0; b < layout.blocks && !star; ++b) {
      const auto t = addr.select(layout.address_of(x, b));
      if (!t) {
        star = true;
      } else if ((layout.targets_of(x, b) >> *t) & 1U) {
        inner |= Point{1} << b;
      }
    }
    values[x] = star ? kStar : static_cast<std::int8_t>(f(inner));
  }
  return {PartialTruthTable(layout.total_vars(), std::move(values)), layout};
}

inline TruthTable complete(const PartialTruthTable& p, int fill) {
  require(fill == 1 || fill == -1, "completion value must be +1 or -1");
  std::vector<std::int8_t> v = p.values();
  for (auto& e : v)
    if (e == kStar) e = static_cast<std::int8_t>(fill);
  return {p.n(), std::move(v)};
}

inline void check_paper_params(int ell, int k, int guard) {
  require(ell >= 2 && std::has_single_bit(static_cast<unsigned>(ell)),
          "l must be a power of two >= 2");
  require(k >= 2 && k % 2 == 0, "k must be even and >= 2");
  if (k * ell > guard) {
    throw ResourceLimit("F(l=" + std::to_string(ell) + ", k=" + std::to_string(k) + ") needs " +
                        std::to_string(k * ell) + " variables, guard is " + std::to_string(guard));
  }
}

// PARITY_{k/2} composed with HADD_l, before completion (k*l variables).
inline Composed paper_f_partial(int ell, int k, int guard = kComposeGuard) {
  check_paper_params(ell, k, guard);
  return compose(parity(k / 2), make_hadd(ell), guard);
}

// The total function F: the partial function above completed with -1.
inline CompletedFunction paper_F(int ell, int k, int guard = kComposeGuard) {
  auto c = paper_f_partial(ell, k, guard);
  return {complete(c.table, -1), c.layout};
}

// F(x) without materializing the table: -1 unless every block's address is a
// codeword h(z_b), else the parity of the targets selected by the z_b.
inline int paper_value(Point x, int ell, int k, const BlockLayout& layout) {
  check_paper_params(ell, k, kComposeGuard);
  require(layout == BlockLayout{k / 2, ell, ell}, "layout does not match paper_F(l, k)");
  int out = 1;
  for (int b = 0; b < layout.blocks; ++b) {
    const auto z = hadamard_decode(point_to_signs(layout.address_of(x, b), ell));
    if (!z) return -1;
    if ((layout.targets_of(x, b) >> signs_to_point(*z)) & 1U) out = -out;
  }
  return out;
}

struct PaperParams {
  int ell;
  int k;
};

// Desk-scale (l, k) for an asymptotic (n, delta): l ~ n^{1-delta}, k ~ n^delta,
// each rounded to the nearest power of two (and at least 2).
inline PaperParams params_from(double n, double delta) {
  require(n >= 4 && delta > 0.0 && delta < 1.0, "need n >= 4 and 0 < delta < 1");
  auto round_pow2 = [](double v) {
    const int e = std::max(1, static_cast<int>(std::lround(std::log2(v))));
    return 1 << e;
  };
  return {round_pow2(std::pow(n, 1.0 - delta)), round_pow2(std::pow(n, delta))};
}

// M(x, y) = F(x xor y); on index encodings xor of +-1 points is bitwise xor.
class XorLift {
 public:
  explicit XorLift(TruthTable f) : f_(std::move(f)) {}

  int n() const { return f_.n(); }
  int operator()(Point x, Point y) const { return f_(x ^ y); }

  // Row-major 2^n x 2^n sign matrix.
  std::vector<std::int8_t> materialize(int guard = kXorLiftGuard) const {
    if (f_.n() > guard) {
      throw ResourceLimit("XOR-lift matrix for n=" + std::to_string(f_.n()) +
                          " exceeds guard " + std::to_string(guard));
    }
    const std::size_t dim = f_.size();
    std::vector<std::int8_t> m(dim * dim);
    for (Point x = 0; x < dim; ++x)
      for (Point y = 0; y < dim; ++y) m[x * dim + y] = static_cast<std::int8_t>(f_(x ^ y));
    return m;
  }

 private:
  TruthTable f_;
};

inline XorLift xor_lift(TruthTable f) { return XorLift(std::move(f)); }

}  // namespace xorlift
