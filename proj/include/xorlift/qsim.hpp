#pragma once

// Exact state-vector simulation of the query algorithm for F: one
// Bernstein-Vazirani run per block, a verified Grover equality check, then the
// parity of the selected targets. All probabilities are computed, never
// sampled.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "xorlift/boolfn.hpp"
#include "xorlift/constructions.hpp"
#include "xorlift/errors.hpp"

namespace xorlift {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;

class QueryCounter {
 public:
  void add_oracle(std::int64_t count = 1) { oracle_queries_ += count; }
  void add_classical(std::int64_t count = 1) { classical_reads_ += count; }
  std::int64_t oracle_queries() const { return oracle_queries_; }
  std::int64_t classical_reads() const { return classical_reads_; }
  std::int64_t total() const { return oracle_queries_ + classical_reads_; }

 private:
  std::int64_t oracle_queries_ = 0;
  std::int64_t classical_reads_ = 0;
};

class StateVector {
 public:
  explicit StateVector(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
    require(!amps_.empty(), "state vector needs at least one amplitude");
    check_norm();
  }

  static StateVector uniform(std::size_t dim) {
    require(dim >= 1, "state vector needs at least one amplitude");
    return StateVector(std::vector<Amplitude>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
  }

  static StateVector basis(std::size_t dim, std::size_t index) {
    require(index < dim, "basis index out of range");
    std::vector<Amplitude> a(dim, 0.0);
    a[index] = 1.0;
    return StateVector(std::move(a));
  }

  std::size_t dimension() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  Amplitude operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
  }

  // Mutating primitives; each re-checks the norm.
  void multiply(std::size_t i, double factor) { amps_[i] *= factor; }

  // H^{(x)log2 N}, normalized.
  void hadamard() {
    const std::size_t n = amps_.size();
    require(std::has_single_bit(n), "Hadamard transform needs a power-of-two dimension");
    for (std::size_t h = 1; h < n; h <<= 1)
      for (std::size_t i = 0; i < n; i += h << 1)
        for (std::size_t j = i; j < i + h; ++j) {
          const Amplitude u = amps_[j];
          const Amplitude v = amps_[j + h];
          amps_[j] = u + v;
          amps_[j + h] = u - v;
        }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& a : amps_) a *= scale;
    check_norm();
  }

  // Inversion about the mean: a -> 2<a> - a.
  void diffuse() {
    Amplitude mean = 0.0;
    for (const auto& a : amps_) mean += a;
    mean /= static_cast<double>(amps_.size());
    for (auto& a : amps_) a = 2.0 * mean - a;
    check_norm();
  }

  void check_norm() const {
    const double drift = std::abs(norm() - 1.0);
    ensure(drift <= kNormTolerance, "state norm drifted by " + std::to_string(drift));
  }

 private:
  std::vector<Amplitude> amps_;
};

// Multiplies amplitude i by w_i; one oracle query.
inline StateVector apply_phase_oracle(StateVector s, std::span<const std::int8_t> w, QueryCounter& c) {
  require(w.size() == s.dimension(), "oracle string length differs from state dimension");
  for (std::size_t i = 0; i < w.size(); ++i) {
    require(w[i] == 1 || w[i] == -1, "oracle strings hold +1/-1 only");
    s.multiply(i, w[i]);
  }
  s.check_norm();
  c.add_oracle();
  return s;
}

struct BVOutcome {
  std::vector<double> distribution;  // indexed by z as a point over log2(l) coordinates
  std::int64_t queries = 0;
};

// Uniform superposition over the l subset-indices of one block, phase oracle
// with the block's address bits, Hadamard transform, exact measurement law.
inline BVOutcome bernstein_vazirani(const SignVector& x_block) {
  require(!x_block.empty() && std::has_single_bit(x_block.size()),
          "Bernstein-Vazirani block length must be a power of two");
  QueryCounter c;
  StateVector s = StateVector::uniform(x_block.size());
  s = apply_phase_oracle(std::move(s), x_block, c);
  s.hadamard();
  return {s.probabilities(), c.oracle_queries()};
}

// Deterministic schedule for an unknown number of marked items among N:
// stages mhat = 1, 2, 4, ... <= N with floor((pi/4) sqrt(N/mhat)) Grover
// iterations each, every stage followed by a 2-query check of the measured
// index. The whole sweep runs `repetitions` times, the least count whose
// worst case over marked counts 1..N reaches 2/3.
struct GroverSchedule {
  std::size_t size = 0;
  std::vector<int> iterations;  // per stage
  int repetitions = 1;
  double floor = 0.0;  // min over marked counts of the detection probability

  std::int64_t queries_per_sweep() const {
    std::int64_t q = 0;
    for (int t : iterations) q += t + kVerifyQueries;
    return q;
  }
  std::int64_t queries() const { return repetitions * queries_per_sweep(); }

  static constexpr int kVerifyQueries = 2;
};

namespace detail {

// Probability that one stage with t iterations measures a marked index.
inline double stage_hit_probability(std::size_t n, std::size_t marked, int t) {
  if (marked == 0) return 0.0;
  const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(n)));
  const double s = std::sin((2.0 * t + 1.0) * theta);
  return s * s;
}

inline double sweep_miss_probability(const std::vector<int>& iterations, std::size_t n,
                                     std::size_t marked) {
  double miss = 1.0;
  for (int t : iterations) miss *= 1.0 - stage_hit_probability(n, marked, t);
  return miss;
}

}  // namespace detail

inline GroverSchedule make_grover_schedule(std::size_t n) {
  require(n >= 1, "Grover search needs at least one index");
  GroverSchedule g;
  g.size = n;
  for (std::size_t mhat = 1; mhat <= n; mhat <<= 1) {
    const double t = std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(mhat));
    g.iterations.push_back(static_cast<int>(std::floor(t)));
  }
  double worst_miss = 0.0;
  for (std::size_t m = 1; m <= n; ++m)
    worst_miss = std::max(worst_miss, detail::sweep_miss_probability(g.iterations, n, m));
  ensure(worst_miss < 1.0, "Grover schedule cannot detect every marked count");
  while (1.0 - std::pow(worst_miss, g.repetitions) < 2.0 / 3.0) ++g.repetitions;
  g.floor = 1.0 - std::pow(worst_miss, g.repetitions);
  return g;
}

struct GroverResult {
  double p_unequal = 0.0;
  std::int64_t queries = 0;  // full schedule, the worst case
};

// Searches for i with u_i != w_i. The oracle marks such indices by the phase
// u_i w_i; u is known to the algorithm, so each application is one query to w.
// Only a verified index is reported, so u = w gives p_unequal = 0 exactly.
inline GroverResult grover_verified_unequal(const SignVector& u, const SignVector& w,
                                            const GroverSchedule& schedule) {
  require(u.size() == w.size(), "compared strings differ in length");
  require(schedule.size == u.size(), "schedule built for a different length");
  const std::size_t n = u.size();
  SignVector phase(n);
  std::vector<std::size_t> marked;
  for (std::size_t i = 0; i < n; ++i) {
    phase[i] = static_cast<std::int8_t>(u[i] * w[i]);
    if (u[i] != w[i]) marked.push_back(i);
  }
  QueryCounter c;
  double miss = 1.0;
  for (int rep = 0; rep < schedule.repetitions; ++rep) {
    for (int t : schedule.iterations) {
      StateVector s = StateVector::uniform(n);
      for (int it = 0; it < t; ++it) {
        s = apply_phase_oracle(std::move(s), phase, c);
        s.diffuse();
      }
      double hit = 0.0;
      for (std::size_t i : marked) hit += std::norm(s[i]);
      miss *= 1.0 - hit;
      c.add_classical(GroverSchedule::kVerifyQueries);
    }
  }
  return {marked.empty() ? 0.0 : 1.0 - miss, c.total()};
}

inline GroverResult grover_verified_unequal(const SignVector& u, const SignVector& w) {
  return grover_verified_unequal(u, w, make_grover_schedule(u.size()));
}

struct QueryBreakdown {
  std::int64_t bv = 0;
  std::int64_t grover = 0;
  std::int64_t classical = 0;
  std::int64_t total = 0;
};

struct RunReport {
  double p_minus = 0.0;  // probability of output -1
  double p_plus = 0.0;   // probability of output +1
  int expected = 0;      // F(input)
  double success = 0.0;
  QueryBreakdown queries;
};

// The three-step algorithm on one input of paper_F(l, k), branching exactly
// over every Bernstein-Vazirani outcome with nonzero probability.
inline RunReport algorithm_F(Point input, int ell, int k, const BlockLayout& layout,
                             const GroverSchedule& schedule) {
  check_paper_params(ell, k, kComposeGuard);
  require(layout == BlockLayout{k / 2, ell, ell}, "layout does not match paper_F(l, k)");
  require(schedule.size == static_cast<std::size_t>(layout.blocks * ell),
          "Grover schedule built for a different length");
  require(input < cube_size(layout.total_vars()), "input has bits beyond the layout");
  const int blocks = layout.blocks;
  const int log_ell = std::countr_zero(static_cast<unsigned>(ell));

  std::vector<BVOutcome> bv;
  SignVector w;
  for (int b = 0; b < blocks; ++b) {
    const SignVector addr = point_to_signs(layout.address_of(input, b), ell);
    w.insert(w.end(), addr.begin(), addr.end());
    bv.push_back(bernstein_vazirani(addr));
  }

  RunReport rep;
  std::int64_t worst_classical = 0;
  // Odometer over per-block outcomes z_b in [0, l).
  std::vector<Point> z(static_cast<std::size_t>(blocks), 0);
  for (;;) {
    double weight = 1.0;
    for (int b = 0; b < blocks; ++b) weight *= bv[b].distribution[z[b]];
    if (weight > 0.0) {
      SignVector u;
      int parity = 1;
      for (int b = 0; b < blocks; ++b) {
        const SignVector code = hadamard_encode(point_to_signs(z[b], log_ell));
        u.insert(u.end(), code.begin(), code.end());
        // Codeword h(z) selects target i, where i is the integer encoding of z.
        parity *= ((layout.targets_of(input, b) >> z[b]) & 1U) ? -1 : 1;
      }
      const GroverResult g = grover_verified_unequal(u, w, schedule);
      rep.p_minus += weight * g.p_unequal;
      const double p_equal = weight * (1.0 - g.p_unequal);
      (parity == 1 ? rep.p_plus : rep.p_minus) += p_equal;
      if (g.p_unequal < 1.0) worst_classical = blocks;
    }
    int b = 0;
    while (b < blocks && ++z[b] == static_cast<Point>(ell)) z[b++] = 0;
    if (b == blocks) break;
  }

  const double total = rep.p_minus + rep.p_plus;
  ensure(std::abs(total - 1.0) <= kNormTolerance, "output distribution does not sum to 1");
  rep.expected = paper_value(input, ell, k, layout);
  rep.success = rep.expected == 1 ? rep.p_plus : rep.p_minus;
  rep.queries.bv = blocks;
  rep.queries.grover = schedule.queries();
  rep.queries.classical = worst_classical;
  rep.queries.total = rep.queries.bv + rep.queries.grover + rep.queries.classical;
  return rep;
}

inline RunReport algorithm_F(Point input, int ell, int k, const BlockLayout& layout) {
  return algorithm_F(input, ell, k, layout, make_grover_schedule(static_cast<std::size_t>(k / 2 * ell)));
}

}  // namespace xorlift
