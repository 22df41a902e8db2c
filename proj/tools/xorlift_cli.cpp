// xorlift: generate F, analyze function files, simulate the query algorithm,
// check the lifting bound and sweep (l, k) grids.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xorlift/errors.hpp"
#include "xorlift/harness.hpp"
#include "xorlift/io.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalid = 2, kResource = 3, kInvariant = 4 };

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    xorlift::io::write_text(out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace xorlift;
  CLI::App app{"XOR-lift separation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  harness::Options opt;
  std::string out;
  app.add_option("--eps", opt.eps, "approximation error")->capture_default_str();
  app.add_option("--eps-degree", opt.eps_degree, "error for the degree D in the lifting check")
      ->capture_default_str();
  app.add_option("--tol", opt.tol, "slack on eps*(d) <= eps in degree scans")->capture_default_str();
  app.add_option("--guard-n", opt.guard_n, "largest variable count for LPs and exhaustive runs")
      ->capture_default_str();
  app.add_option("--out", out, "write to this file instead of stdout");

  int ell = 2;
  int k = 2;
  auto* gen = app.add_subcommand("gen", "write F(l, k) and its layout sidecar");
  gen->add_option("l", ell)->required();
  gen->add_option("k", k)->required();

  std::string file;
  auto* analyze = app.add_subcommand("analyze", "Fourier and LP quantities of a function file");
  analyze->add_option("file", file)->required()->check(CLI::ExistingFile);

  std::string layout;
  std::optional<Point> input;
  auto* simulate = app.add_subcommand("simulate", "run the query algorithm on F exactly");
  simulate->add_option("file", file)->required()->check(CLI::ExistingFile);
  simulate->add_option("--layout", layout, "layout sidecar (default: next to the file)");
  simulate->add_option("--input", input, "single input index instead of all inputs");

  std::optional<std::string> poly;
  auto* lift = app.add_subcommand("liftcheck", "lifting bound and degree-reduction pipeline");
  lift->add_option("l", ell)->required();
  lift->add_option("k", k)->required();
  lift->add_option("--poly", poly, "polynomial JSON to run through the pipeline");

  std::string grid = "2x2,2x4,4x2";
  auto* sweep = app.add_subcommand("sweep", "CSV table over an (l, k) grid");
  sweep->add_option("--grid", grid, "cells as LxK, comma separated")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*gen) {
      require(!out.empty(), "gen needs --out");
      harness::cmd_gen(ell, k, out);
    } else if (*analyze) {
      emit(harness::cmd_analyze(file, opt), out);
    } else if (*simulate) {
      emit(harness::cmd_simulate(file, layout.empty() ? harness::layout_path(file) : layout, opt, input), out);
    } else if (*lift) {
      emit(harness::cmd_liftcheck(ell, k, opt, poly), out);
    } else if (*sweep) {
      emit(harness::cmd_sweep(harness::parse_grid(grid), opt), out);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kResource;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kInvariant;
  }
  return kOk;
}
