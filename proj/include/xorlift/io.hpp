#pragma once

// JSON files shared by the command-line tools: function tables, block layouts,
// polynomials and reports. Key order is fixed, so equal values serialize to
// equal bytes.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xorlift/approx.hpp"
#include "xorlift/boolfn.hpp"
#include "xorlift/constructions.hpp"
#include "xorlift/errors.hpp"
#include "xorlift/liftlab.hpp"
#include "xorlift/poly.hpp"
#include "xorlift/qsim.hpp"

namespace xorlift::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

struct FunctionFile {
  PartialTruthTable table;
  bool partial = false;

  TruthTable total() const {
    require(!partial, "expected a total function, file holds a partial one");
    return {table.n(), table.values()};
  }
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path);
  out << text;
}

namespace detail {

template <typename T>
T field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InvalidInput(std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace detail

// Function file: {"version", "n", "kind", "values"}, values over "+-*" in
// index order.
inline Json to_json(const PartialTruthTable& f, bool partial) {
  std::string values(f.size(), '+');
  for (Point x = 0; x < f.size(); ++x) {
    const int v = f(x);
    require(partial || v != kStar, "total function file cannot hold *");
    values[x] = v == 1 ? '+' : (v == -1 ? '-' : '*');
  }
  Json j;
  j["version"] = kFormatVersion;
  j["n"] = f.n();
  j["kind"] = partial ? "partial" : "total";
  j["values"] = values;
  return j;
}

inline Json to_json(const TruthTable& f) { return to_json(PartialTruthTable(f), false); }

inline FunctionFile function_from_json(const Json& j) {
  require(detail::field<int>(j, "version") == kFormatVersion, "unsupported function file version");
  const int n = detail::field<int>(j, "n");
  check_arity(n);
  const auto kind = detail::field<std::string>(j, "kind");
  require(kind == "total" || kind == "partial", "kind must be \"total\" or \"partial\"");
  const auto values = detail::field<std::string>(j, "values");
  require(values.size() == cube_size(n), "values string must have 2^n characters");
  std::vector<std::int8_t> v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    switch (values[i]) {
      case '+': v[i] = 1; break;
      case '-': v[i] = -1; break;
      case '*':
        require(kind == "partial", "total function file contains *");
        v[i] = kStar;
        break;
      default: throw InvalidInput("values may contain only '+', '-' and '*'");
    }
  }
  return {PartialTruthTable(n, std::move(v)), kind == "partial"};
}

inline Json to_json(const BlockLayout& layout) {
  Json j;
  j["blocks"] = layout.blocks;
  j["m"] = layout.m;
  j["k"] = layout.k;
  j["address_ids"] = layout.address_ids();
  j["target_ids"] = layout.target_ids();
  return j;
}

inline BlockLayout layout_from_json(const Json& j) {
  const BlockLayout layout{detail::field<int>(j, "blocks"), detail::field<int>(j, "m"),
                           detail::field<int>(j, "k")};
  require(layout.blocks >= 1 && layout.m >= 0 && layout.k >= 1, "layout sizes out of range");
  require(detail::field<std::vector<VarId>>(j, "address_ids") == layout.address_ids(),
          "address_ids disagree with the block layout");
  require(detail::field<std::vector<VarId>>(j, "target_ids") == layout.target_ids(),
          "target_ids disagree with the block layout");
  return layout;
}

inline Json to_json(const MultilinearPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [s, c] : p.terms()) {
    Json t;
    t["subset"] = s.ids();
    t["coeff"] = c;
    terms.push_back(std::move(t));
  }
  Json j;
  j["vars"] = p.vars().ids();
  j["terms"] = std::move(terms);
  return j;
}

inline MultilinearPolynomial polynomial_from_json(const Json& j) {
  VarSet vars;
  for (VarId id : detail::field<std::vector<VarId>>(j, "vars")) vars.insert(id);
  MultilinearPolynomial p(vars);
  require(j.at("terms").is_array(), "terms must be an array");
  for (const auto& t : j.at("terms")) {
    VarSet s;
    for (VarId id : detail::field<std::vector<VarId>>(t, "subset")) s.insert(id);
    p.add_term(s, detail::field<double>(t, "coeff"));
  }
  return p;
}

inline Json to_json(const ApproxResult& r) {
  Json profile = Json::array();
  for (const auto& [d, e] : r.profile) profile.push_back(Json::array({d, e}));
  Json j;
  j["epsilon"] = r.epsilon;
  j["value"] = r.value;
  j["witness"] = to_json(r.witness);
  j["profile"] = std::move(profile);
  return j;
}

inline Json to_json(const RunReport& r) {
  Json j;
  j["output_dist"] = {{"-1", r.p_minus}, {"+1", r.p_plus}};
  j["expected"] = r.expected;
  j["success_prob"] = r.success;
  j["queries"] = {{"bv", r.queries.bv},
                  {"grover", r.queries.grover},
                  {"classical", r.queries.classical},
                  {"total", r.queries.total}};
  return j;
}

inline Json to_json(const GroverSchedule& g) {
  Json j;
  j["size"] = g.size;
  j["iterations"] = g.iterations;
  j["repetitions"] = g.repetitions;
  j["floor"] = g.floor;
  j["queries"] = g.queries();
  return j;
}

inline Json to_json(const PipelineReport& p) {
  Json j;
  j["z_index"] = p.z_index;
  j["selected"] = p.selected;
  j["expected_mass"] = p.mass.expected;
  j["analytic_bound"] = p.mass.analytic_bound;
  j["markov_bound"] = p.mass.markov_bound;
  j["min_mass"] = p.mass.min;
  j["dropped_mass"] = p.dropped_mass;
  j["input_error"] = p.input_error;
  j["final_error"] = p.final_error;
  j["final_degree"] = p.final_degree;
  j["result"] = to_json(p.result);
  return j;
}

inline Json to_json(const LiftReport& r) {
  Json j;
  j["l"] = r.ell;
  j["k"] = r.k;
  j["D"] = r.degree;
  j["t"] = r.t;
  j["eps"] = r.eps;
  j["eps_degree"] = r.eps_degree;
  j["lp_norm"] = r.lp_norm;
  j["lp_log2_norm"] = r.lp_log2_norm;
  j["proof_floor"] = r.proof_floor;
  j["holds"] = r.holds;
  j["selection_uniform"] = r.selection_uniform;
  j["pipeline"] = to_json(r.pipeline);
  return j;
}

}  // namespace xorlift::io
