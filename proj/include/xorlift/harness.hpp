#pragma once

// Library side of the command-line tool: each cmd_* returns the JSON or CSV
// text that the tool prints, so tests can call them without a process.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xorlift/approx.hpp"
#include "xorlift/boolfn.hpp"
#include "xorlift/constructions.hpp"
#include "xorlift/errors.hpp"
#include "xorlift/io.hpp"
#include "xorlift/liftlab.hpp"
#include "xorlift/qsim.hpp"

namespace xorlift::harness {

struct Options {
  double eps = 1.0 / 3.0;
  double eps_degree = 0.99;
  double tol = 1e-6;
  int guard_n = 14;
};

inline std::string layout_path(const std::string& function_path) {
  const std::string ext = ".json";
  std::string stem = function_path;
  if (stem.size() > ext.size() && stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0)
    stem.resize(stem.size() - ext.size());
  return stem + ".layout.json";
}

struct GenOutput {
  std::string function_json;
  std::string layout_json;
};

inline GenOutput gen(int ell, int k) {
  const CompletedFunction F = paper_F(ell, k);
  return {io::dump(io::to_json(F.table)), io::dump(io::to_json(F.layout))};
}

// Writes the function file for paper_F(l, k) and its layout sidecar.
inline GenOutput cmd_gen(int ell, int k, const std::string& out) {
  GenOutput g = gen(ell, k);
  io::write_text(out, g.function_json);
  io::write_text(layout_path(out), g.layout_json);
  return g;
}

inline io::Json analyze(const io::FunctionFile& file, const Options& opt) {
  const PartialTruthTable& f = file.table;
  io::Json j;
  j["n"] = f.n();
  j["kind"] = file.partial ? "partial" : "total";
  j["promise_count"] = f.promise_count();
  if (file.partial) {
    j["fourier"] = nullptr;
  } else {
    const FourierSpectrum s = wht_forward(file.total());
    io::Json fj;
    fj["spectral_norm"] = spectral_norm(s);
    fj["min_entropy"] = min_entropy(s);
    fj["influence"] = influence(s);
    fj["weight"] = fourier_weight(s);
    j["fourier"] = std::move(fj);
  }
  j["approx_degree"] = io::to_json(approx_degree(f, opt.eps, opt.guard_n, opt.tol));
  j["approx_spectral_norm"] = io::to_json(approx_spectral_norm(f, opt.eps, opt.guard_n));
  return j;
}

inline std::string cmd_analyze(const std::string& path, const Options& opt) {
  return io::dump(analyze(io::function_from_json(io::parse(io::read_text(path))), opt));
}

struct SimulationSummary {
  int ell = 0;
  int k = 0;
  std::size_t inputs = 0;
  double min_success_promise = 1.0;
  double min_success_nonpromise = 1.0;
  std::int64_t max_total_queries = 0;
  GroverSchedule schedule;
  std::vector<std::pair<Point, RunReport>> runs;  // filled only for a single input
};

// (l, k) of paper_F for a layout, or invalid-input if the layout is not one.
inline PaperParams params_of(const BlockLayout& layout) {
  const int ell = layout.m;
  require(layout.k == ell && ell >= 2 && std::has_single_bit(static_cast<unsigned>(ell)),
          "layout is not a HADD layout");
  return {ell, 2 * layout.blocks};
}

inline SimulationSummary simulate(const TruthTable& f, const BlockLayout& layout, const Options& opt,
                                  std::optional<Point> only = std::nullopt) {
  const auto [ell, k] = params_of(layout);
  const int bits = layout.total_vars();
  require(f.n() == bits, "function arity differs from the layout");
  if (!only && bits > opt.guard_n) {
    throw ResourceLimit("exhaustive simulation over " + std::to_string(bits) + " bits exceeds guard " +
                        std::to_string(opt.guard_n));
  }
  const Composed partial = paper_f_partial(ell, k);
  require(f.values() == complete(partial.table, -1).values(), "function file is not F for this layout");

  SimulationSummary s;
  s.ell = ell;
  s.k = k;
  s.schedule = make_grover_schedule(static_cast<std::size_t>(k / 2 * ell));
  auto run = [&](Point x) {
    const RunReport r = algorithm_F(x, ell, k, layout, s.schedule);
    double& floor = partial.table.in_promise(x) ? s.min_success_promise : s.min_success_nonpromise;
    floor = std::min(floor, r.success);
    s.max_total_queries = std::max(s.max_total_queries, r.queries.total);
    ++s.inputs;
    return r;
  };
  if (only) {
    require(*only < f.size(), "input has bits beyond the layout");
    s.runs.emplace_back(*only, run(*only));
  } else {
    for (Point x = 0; x < f.size(); ++x) run(x);
  }
  return s;
}

inline io::Json to_json(const SimulationSummary& s) {
  io::Json j;
  j["l"] = s.ell;
  j["k"] = s.k;
  j["inputs"] = s.inputs;
  j["min_success_promise"] = s.min_success_promise;
  j["min_success_nonpromise"] = s.min_success_nonpromise;
  j["max_total_queries"] = s.max_total_queries;
  j["schedule"] = io::to_json(s.schedule);
  io::Json runs = io::Json::array();
  for (const auto& [x, r] : s.runs) {
    io::Json e = io::to_json(r);
    e["input"] = x;
    runs.push_back(std::move(e));
  }
  j["runs"] = std::move(runs);
  return j;
}

inline std::string cmd_simulate(const std::string& function_path, const std::string& layout_file,
                                const Options& opt, std::optional<Point> only = std::nullopt) {
  const io::FunctionFile file = io::function_from_json(io::parse(io::read_text(function_path)));
  const BlockLayout layout = io::layout_from_json(io::parse(io::read_text(layout_file)));
  return io::dump(to_json(simulate(file.total(), layout, opt, only)));
}

inline LiftReport liftcheck(int ell, int k, const Options& opt,
                            const std::optional<MultilinearPolynomial>& poly = std::nullopt) {
  LiftReport rep = lemma_bound_check(ell, k, opt.eps, opt.eps_degree, opt.guard_n);
  if (poly) {
    const Composed lifted = paper_f_partial(ell, k, opt.guard_n);
    rep.pipeline =
        degree_reduction_pipeline(*poly, make_hadd(ell), lifted.layout, parity(k / 2), rep.degree, opt.eps);
  }
  return rep;
}

inline std::string cmd_liftcheck(int ell, int k, const Options& opt,
                                 const std::optional<std::string>& poly_path = std::nullopt) {
  std::optional<MultilinearPolynomial> poly;
  if (poly_path) poly = io::polynomial_from_json(io::parse(io::read_text(*poly_path)));
  return io::dump(io::to_json(liftcheck(ell, k, opt, poly)));
}

inline constexpr const char* kSweepHeader =
    "l,k,n_bits,promise_count,sim_total_queries,min_succ_promise,min_succ_nonpromise,adeg_F,"
    "log2_specnorm_F,proof_floor,cs_upper_bound";

struct SweepRow {
  int ell = 0;
  int k = 0;
  int n_bits = 0;
  std::size_t promise_count = 0;
  std::int64_t sim_total_queries = 0;
  double min_succ_promise = 0.0;
  double min_succ_nonpromise = 0.0;
  int adeg_F = 0;
  double log2_specnorm_F = 0.0;
  double proof_floor = 0.0;
  double cs_upper_bound = 0.0;  // log2 of (4/3)(n+1)^{adeg_F/2}
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
};

inline bool row_invariants_hold(const SweepRow& r, double tol = 1e-6) {
  return r.ok() && std::abs(r.min_succ_promise - 1.0) <= kNormTolerance &&
         r.min_succ_nonpromise >= 2.0 / 3.0 && r.proof_floor <= r.log2_specnorm_F + tol &&
         r.log2_specnorm_F <= r.cs_upper_bound + tol;
}

inline SweepRow sweep_cell(int ell, int k, const Options& opt) {
  SweepRow row;
  row.ell = ell;
  row.k = k;
  row.n_bits = ell * k;
  try {
    check_paper_params(ell, k, opt.guard_n);
    const CompletedFunction F = paper_F(ell, k);
    row.promise_count = paper_f_partial(ell, k).table.promise_count();
    const SimulationSummary sim = simulate(F.table, F.layout, opt);
    row.sim_total_queries = sim.max_total_queries;
    row.min_succ_promise = sim.min_success_promise;
    row.min_succ_nonpromise = sim.min_success_nonpromise;
    row.adeg_F = static_cast<int>(approx_degree(F.table, opt.eps, opt.guard_n, opt.tol).value);
    row.log2_specnorm_F = std::log2(approx_spectral_norm(F.table, opt.eps, opt.guard_n).value);
    const int d = static_cast<int>(approx_degree(parity(k / 2), opt.eps_degree, opt.guard_n, opt.tol).value);
    row.proof_floor = d / 10.0 * std::log2(static_cast<double>(ell));
    row.cs_upper_bound = std::log2(4.0 / 3.0) + 0.5 * row.adeg_F * std::log2(row.n_bits + 1.0);
  } catch (const ResourceLimit& e) {
    row.failure = e.what();
  } catch (const UndefinedQuantity& e) {
    row.failure = e.what();
  }
  return row;
}

inline std::vector<SweepRow> sweep(const std::vector<PaperParams>& grid, const Options& opt) {
  std::vector<SweepRow> rows;
  for (const auto& [ell, k] : grid) rows.push_back(sweep_cell(ell, k, opt));
  return rows;
}

namespace detail {

inline std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000".
  return std::string(buf) == "-0.000000" ? "0.000000" : buf;
}

}  // namespace detail

// Rows in grid order; failed cells print NA and a trailing "# l=,k=: reason" line.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader << "\n";
  for (const auto& r : rows) {
    out << r.ell << "," << r.k << "," << r.n_bits << ",";
    if (!r.ok()) {
      out << "NA,NA,NA,NA,NA,NA,NA,NA\n";
      continue;
    }
    out << r.promise_count << "," << r.sim_total_queries << "," << detail::fixed(r.min_succ_promise) << ","
        << detail::fixed(r.min_succ_nonpromise) << "," << r.adeg_F << "," << detail::fixed(r.log2_specnorm_F)
        << "," << detail::fixed(r.proof_floor) << "," << detail::fixed(r.cs_upper_bound) << "\n";
  }
  for (const auto& r : rows)
    if (!r.ok()) out << "# l=" << r.ell << ",k=" << r.k << ": " << *r.failure << "\n";
  return out.str();
}

inline std::string cmd_sweep(const std::vector<PaperParams>& grid, const Options& opt) {
  return sweep_csv(sweep(grid, opt));
}

// "2x2,2x4,4x2" -> {(2,2),(2,4),(4,2)}.
inline std::vector<PaperParams> parse_grid(const std::string& spec) {
  std::vector<PaperParams> grid;
  std::stringstream ss(spec);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    int ell = 0;
    int k = 0;
    char sep = 0;
    std::istringstream cs(cell);
    require(static_cast<bool>(cs >> ell >> sep >> k) && sep == 'x' && cs.peek() == EOF,
            "grid cells look like LxK, got \"" + cell + "\"");
    grid.push_back({ell, k});
  }
  require(!grid.empty(), "empty grid");
  return grid;
}

}  // namespace xorlift::harness
