// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xorlift/approx.hpp"
#include "xorlift/boolfn.hpp"
#include "xorlift/constructions.hpp"
#include "xorlift/harness.hpp"
#include "xorlift/liftlab.hpp"
#include "xorlift/qsim.hpp"

using namespace xorlift;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

using Criterion = std::function<void(Verdict&)>;

const std::vector<std::pair<int, int>> kGrid{{2, 2}, {2, 4}, {4, 2}};

void fourier_core(Verdict& v) {
  std::mt19937 rng(1);
  std::bernoulli_distribution coin(0.5);
  double worst_parseval = 0.0;
  double worst_round_trip = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 10;
    const auto f = TruthTable::from(n, [&](Point) { return coin(rng) ? 1 : -1; });
    const auto s = wht_forward(f);
    worst_parseval = std::max(worst_parseval, std::abs(fourier_weight(s) - 1.0));
    const auto back = wht_inverse(s);
    for (Point x = 0; x < f.size(); ++x) worst_round_trip = std::max(worst_round_trip, std::abs(back[x] - f(x)));
  }
  v.check(worst_parseval <= 1e-10, "Parseval");
  v.check(worst_round_trip <= 1e-12, "round trip");
  v.detail << "max Parseval gap " << worst_parseval << ", max round-trip error " << worst_round_trip;
}

void upper_bound(Verdict& v) {
  for (auto [ell, k] : kGrid) {
    const auto F = paper_F(ell, k);
    const auto promise = paper_f_partial(ell, k).table;
    const auto g = make_grover_schedule(static_cast<std::size_t>(k / 2 * ell));
    double min_p = 1.0;
    double min_np = 1.0;
    std::int64_t worst = 0;
    for (Point x = 0; x < F.table.size(); ++x) {
      const auto r = algorithm_F(x, ell, k, F.layout, g);
      v.check(r.expected == F.table(x), "algorithm_F expected value");
      (promise.in_promise(x) ? min_p : min_np) = std::min(promise.in_promise(x) ? min_p : min_np, r.success);
      worst = std::max(worst, r.queries.total);
    }
    const std::int64_t budget = k / 2 + g.queries() + k / 2;
    v.check(min_p == 1.0 || std::abs(min_p - 1.0) <= 1e-12, "promise success 1");
    v.check(min_np >= 2.0 / 3.0, "non-promise success >= 2/3");
    v.check(worst <= budget, "query budget");
    v.detail << "(" << ell << "," << k << "): promise " << min_p << ", non-promise " << min_np << ", queries "
             << worst << "/" << budget << "; ";
  }
}

void lower_bound_reduction(Verdict& v) {
  for (auto [ell, k] : kGrid) {
    const auto F = paper_F(ell, k);
    const BlockLayout& L = F.layout;
    // The codeword h(+1,...,+1) selects the first target.
    const Point code = signs_to_point(hadamard_encode(point_to_signs(0, std::countr_zero(unsigned(ell)))));
    v.check(make_hadd(ell).select(code) == 0, "codeword selects the first target");
    Point fixed = 0;
    for (int b = 0; b < L.blocks; ++b) fixed |= code << (b * L.width());
    const auto par = parity(k / 2);
    std::size_t checked = 0;
    for (Point y = 0; y < cube_size(L.blocks * ell); ++y) {
      Point x = fixed;
      Point first = 0;
      for (int b = 0; b < L.blocks; ++b) {
        const Point t = (y >> (b * ell)) & static_cast<Point>(cube_size(ell) - 1);
        x |= t << (b * L.width() + L.m);
        first |= (t & 1U) << b;
      }
      v.check(F.table(x) == par(first), "restricted F equals parity");
      ++checked;
    }
    v.detail << "(" << ell << "," << k << "): " << checked << " assignments; ";
  }
}

void lp_correctness(Verdict& v) {
  for (int n = 1; n <= 5; ++n) {
    v.check(approx_degree(parity(n), 1.0 / 3.0).value == n, "adeg(PARITY_n) = n");
    v.check(std::abs(approx_spectral_norm(parity(n), 1.0 / 3.0).value - 2.0 / 3.0) <= 1e-6, "norm(PARITY_n) = 2/3");
  }
  int monotone = 0;
  for (unsigned bits = 0; bits < 256; ++bits) {
    const auto f = TruthTable::from(3, [bits](Point x) { return ((bits >> x) & 1U) ? -1 : 1; });
    double prev = 2.0;
    bool ok = true;
    for (int d = 0; d <= 3; ++d) {
      const double e = best_error_at_degree(f, d).error;
      ok = ok && e <= prev + kTolerances.objective;
      prev = e;
    }
    v.check(ok, "eps*(d) nonincreasing");
    monotone += ok;
  }
  v.detail << "parity n<=5 degree and norm checked; " << monotone << "/256 monotone profiles";
}

void cs_certificate(Verdict& v) {
  int held = 0;
  double tightest = 1e9;
  auto run = [&](const TruthTable& f) {
    const auto r = certify_cs_upper_bound(f);
    v.check(r.holds, "Cauchy-Schwarz bound");
    held += r.holds;
    tightest = std::min(tightest, r.log2_bound - r.log2_norm);
  };
  for (unsigned bits = 0; bits < 16; ++bits)
    run(TruthTable::from(2, [bits](Point x) { return ((bits >> x) & 1U) ? -1 : 1; }));
  std::mt19937 rng(4);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 50; ++i) run(TruthTable::from(4, [&](Point) { return coin(rng) ? 1 : -1; }));
  v.detail << held << "/66 hold, smallest log2 slack " << tightest;
}

void indexing_lift(Verdict& v) {
  const auto r = indexing_lift_check(parity(4));
  if (r.skipped) {
    v.detail << "skipped: D = " << r.degree << " <= 3";
    return;
  }
  v.check(r.holds, "norm >= 2^{cD}");
  v.detail << "D = " << r.degree << ", c = " << r.c << ", norm = " << r.norm << ", bound 2^{cD} = " << r.bound;
}

void lift_chain(Verdict& v) {
  for (auto [ell, k] : kGrid) {
    const auto r = lemma_bound_check(ell, k);
    v.check(r.holds, "log2 norm >= proof floor");
    v.check(r.pipeline.final_degree < r.degree, "pipeline degree < D");
    v.check(r.pipeline.final_error <= 1.0 / 3.0 + r.pipeline.dropped_mass + kTolerances.objective,
            "pipeline error <= 1/3 + dropped mass");
    v.detail << "(" << ell << "," << k << "): log2 norm " << r.lp_log2_norm << " >= " << r.proof_floor
             << ", degree " << r.pipeline.final_degree << " < " << r.degree << ", error " << r.pipeline.final_error
             << " <= 1/3 + " << r.pipeline.dropped_mass << "; ";
  }
}

void exact_counting(Verdict& v) {
  std::size_t checked = 0;
  for (int blocks = 1; blocks <= 3; ++blocks) {
    const BlockLayout L{blocks, 2, 2};
    const auto ids = L.target_ids();
    for (Point s = 0; s < cube_size(static_cast<int>(ids.size())); ++s) {
      VarSet m;
      for (std::size_t i = 0; i < ids.size(); ++i)
        if ((s >> i) & 1U) m.insert(ids[i]);
      v.check(relevance_probability(m, make_hadd(2), L) == relevance_by_enumeration(m, make_hadd(2), L),
              "l=2 relevance");
      ++checked;
    }
  }
  const BlockLayout L{2, 4, 4};
  const auto ids = L.target_ids();
  std::mt19937 rng(8);
  std::uniform_int_distribution<Point> pick(0, static_cast<Point>(cube_size(static_cast<int>(ids.size())) - 1));
  for (int i = 0; i < 100; ++i) {
    const Point s = pick(rng);
    VarSet m;
    for (std::size_t j = 0; j < ids.size(); ++j)
      if ((s >> j) & 1U) m.insert(ids[j]);
    v.check(relevance_probability(m, make_hadd(4), L) == relevance_by_enumeration(m, make_hadd(4), L),
            "l=4 relevance");
    ++checked;
  }
  v.detail << checked << " monomials agree exactly";
}

void sweep_reproducible(Verdict& v) {
  harness::Options opt;
  std::vector<PaperParams> grid;
  for (auto [ell, k] : kGrid) grid.push_back({ell, k});
  const auto rows = harness::sweep(grid, opt);
  const std::string first = harness::sweep_csv(rows);
  const std::string second = harness::cmd_sweep(grid, opt);
  v.check(first == second, "byte-identical CSV");
  for (const auto& r : rows) v.check(harness::row_invariants_hold(r), "row invariants");
  v.detail << first.size() << " bytes, " << rows.size() << " rows";
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Criterion run;
    double budget_s;
  };
  const std::vector<Entry> criteria{
      {1, "Fourier core", fourier_core, 10},
      {2, "query algorithm upper bound", upper_bound, 120},
      {3, "lower-bound reduction to parity", lower_bound_reduction, 60},
      {4, "LP correctness", lp_correctness, 300},
      {5, "Cauchy-Schwarz certificate", cs_certificate, 300},
      {6, "indexing lift of PARITY_4", indexing_lift, 1800},
      {7, "lifting bound chain", lift_chain, 600},
      {8, "exact relevance counting", exact_counting, 60},
      {9, "sweep reproducibility", sweep_reproducible, 300},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.check(secs < c.budget_s, "runtime budget");
    failures += !v.pass;
    std::printf("AC%d %s: %s (%.2fs of %.0fs) %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name, secs, c.budget_s,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
