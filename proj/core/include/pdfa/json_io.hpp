#pragma once

#include <map>
#include <string>

#include "pdfa/abstraction.hpp"
#include "pdfa/cfg.hpp"
#include "pdfa/linalg.hpp"
#include "pdfa/monotone.hpp"
#include "pdfa/prob_analysis.hpp"
#include "pdfa/semantics.hpp"

namespace pdfa {

/// Round-trips a double through 12 significant digits; every number in a
/// JSON report goes through this so identical inputs give identical
/// bytes.
double json_number(double x);

/// {rows, cols, entries: [...] row-major}.
std::string matrix_to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const std::string& text);

/// Accepts the literal "uniform" or a JSON array of
/// {"state": {var: value, ...}, "p": probability} records; unlisted
/// states carry mass 0. The mass must reach 1 within 1e-6.
ProbVector load_distribution(const std::string& text_or_uniform,
                             const StateSpace& ss);

/// {"label": p_true, ...} per test label.
std::map<Label, double> load_static_probs(const std::string& text);

// Report builders for the CLI surface. Keys are emitted in a fixed
// order and all carry "schema": "pdfa/1".
std::string program_to_json(const Program& p);
std::string cfg_to_json(const FlowGraph& g);
std::string lv_to_json(const LvSolution& sol);
std::string monte_carlo_to_json(const MonteCarloReport& report);
std::string branch_info_to_json(const BranchInfo& info, double residual);
std::string plv_to_json(const PlvSolution& sol, const BranchInfo& branches);
std::string quality_table_to_json(const QualityTable& t);
std::string quality_table_to_text(const QualityTable& t);
std::string ops_to_json(const Program& p, const Abstraction& abs,
                        bool include_concrete);
std::string error_to_json(const std::string& kind, const std::string& message);

}  // namespace pdfa
