#include "pdfa/json_io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace pdfa {

using json = nlohmann::ordered_json;

double json_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

json vector_to_array(const ProbVector& v) {
  json arr = json::array();
  for (std::size_t i = 0; i < v.dim(); ++i) arr.push_back(json_number(v[i]));
  return arr;
}

json matrix_to_obj(const DenseMatrix& m) {
  json entries = json::array();
  for (double x : m.data()) entries.push_back(json_number(x));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string matrix_to_json(const DenseMatrix& m) { return dump(matrix_to_obj(m)); }

DenseMatrix matrix_from_json(const std::string& text) {
  json j = json::parse(text);
  DenseMatrix m(j.at("rows").get<std::size_t>(),
                j.at("cols").get<std::size_t>());
  const auto& entries = j.at("entries");
  if (entries.size() != m.data().size())
    throw InputError("matrix entry count does not match rows*cols");
  std::size_t i = 0;
  for (const auto& e : entries) m.data()[i++] = e.get<double>();
  return m;
}

ProbVector load_distribution(const std::string& text_or_uniform,
                             const StateSpace& ss) {
  if (text_or_uniform == "uniform") return ProbVector::uniform(ss.size());
  json j;
  try {
    j = json::parse(text_or_uniform);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad distribution JSON: ") + e.what());
  }
  if (!j.is_array()) throw InputError("distribution must be a JSON array");
  ProbVector rho(ss.size());
  for (const auto& rec : j) {
    if (!rec.contains("state") || !rec.contains("p"))
      throw InputError("distribution records need \"state\" and \"p\"");
    StateTuple s(ss.var_count(), 0);
    for (const auto& [name, value] : rec.at("state").items()) {
      std::size_t vi = ss.decls().index_of(name);
      long long v = value.get<long long>();
      if (v < 0 || v >= ss.decls().at(vi).size)
        throw InputError("state value " + std::to_string(v) +
                         " outside range of '" + name + "'");
      s[vi] = v;
    }
    double p = rec.at("p").get<double>();
    if (p < 0.0) throw InputError("negative probability in distribution");
    rho[ss.index(s)] += p;
  }
  double mass = one_norm(rho);
  if (std::abs(mass - 1.0) > 1e-6)
    throw InputError("distribution mass is " + std::to_string(mass) +
                     ", not 1");
  return rho;
}

std::map<Label, double> load_static_probs(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad static-probs JSON: ") + e.what());
  }
  if (!j.is_object())
    throw InputError("static probabilities must be a JSON object");
  std::map<Label, double> out;
  for (const auto& [key, value] : j.items()) {
    char* end = nullptr;
    long l = std::strtol(key.c_str(), &end, 10);
    if (end == key.c_str() || *end != '\0' || l <= 0)
      throw InputError("bad test label '" + key + "'");
    out[static_cast<Label>(l)] = value.get<double>();
  }
  return out;
}

namespace {

json stmt_to_obj(const Stmt& s) {
  json j;
  switch (s.kind) {
    case Stmt::Kind::Skip:
      j["kind"] = "skip";
      j["label"] = s.label;
      return j;
    case Stmt::Kind::Assign:
      j["kind"] = "assign";
      j["label"] = s.label;
      j["var"] = s.var;
      j["expr"] = pretty_print(*s.expr);
      return j;
    case Stmt::Kind::Random:
      j["kind"] = "random";
      j["label"] = s.label;
      j["var"] = s.var;
      j["dist"] = pretty_print(s.dist);
      return j;
    case Stmt::Kind::Seq:
      j["kind"] = "seq";
      j["first"] = stmt_to_obj(*s.first);
      j["second"] = stmt_to_obj(*s.second);
      return j;
    case Stmt::Kind::If:
      j["kind"] = "if";
      j["label"] = s.label;
      j["cond"] = pretty_print(*s.cond);
      j["then"] = stmt_to_obj(*s.first);
      j["else"] = stmt_to_obj(*s.second);
      return j;
    case Stmt::Kind::While:
      j["kind"] = "while";
      j["label"] = s.label;
      j["cond"] = pretty_print(*s.cond);
      j["body"] = stmt_to_obj(*s.first);
      return j;
  }
  return j;
}

const char* branch_name(BranchKind k) {
  switch (k) {
    case BranchKind::True:
      return "true";
    case BranchKind::False:
      return "false";
    default:
      return "none";
  }
}

json varset_to_array(const VarSet& s) {
  json arr = json::array();
  for (const auto& v : s) arr.push_back(v);
  return arr;
}

json branch_table(const BranchInfo& info) {
  json tests = json::object();
  for (auto& [l, out] : info.tests) {
    json rec;
    rec["true_to"] = out.true_to;
    if (out.false_to)
      rec["false_to"] = *out.false_to;
    else
      rec["false_to"] = nullptr;
    rec["p_true"] = json_number(out.p_true);
    rec["p_false"] = json_number(out.p_false);
    rec["reachable"] = out.reachable;
    tests[std::to_string(l)] = std::move(rec);
  }
  return tests;
}

json warnings_array(const BranchInfo& info) {
  json arr = json::array();
  for (const auto& w : info.warnings) arr.push_back(w);
  return arr;
}

}  // namespace

std::string program_to_json(const Program& p) {
  json j;
  j["schema"] = "pdfa/1";
  json decls = json::array();
  for (const VarDecl& d : p.decls.all())
    decls.push_back(json{{"name", d.name}, {"size", d.size}});
  j["vars"] = decls;
  j["body"] = stmt_to_obj(*p.body);
  j["pretty"] = pretty_print(p);
  return dump(j);
}

std::string cfg_to_json(const FlowGraph& g) {
  json j;
  j["schema"] = "pdfa/1";
  json blocks = json::object();
  for (auto& [l, b] : g.blocks) {
    const char* kind = "skip";
    if (b.kind == BlockKind::Assign) kind = "assign";
    if (b.kind == BlockKind::Random) kind = "random";
    if (b.kind == BlockKind::Test) kind = "test";
    blocks[std::to_string(l)] = kind;
  }
  j["blocks"] = blocks;
  j["init"] = g.init;
  json finals = json::array();
  for (Label l : g.finals) finals.push_back(l);
  j["finals"] = finals;
  json edges = json::array();
  for (const Edge& e : g.edges)
    edges.push_back(json{
        {"from", e.from}, {"to", e.to}, {"branch", branch_name(e.branch)}});
  j["edges"] = edges;
  return dump(j);
}

std::string lv_to_json(const LvSolution& sol) {
  json j;
  j["schema"] = "pdfa/1";
  j["analysis"] = "lv";
  json labels = json::object();
  for (auto& [l, entry] : sol.entry) {
    json rec;
    rec["entry"] = varset_to_array(entry);
    rec["exit"] = varset_to_array(sol.exit.at(l));
    labels[std::to_string(l)] = std::move(rec);
  }
  j["labels"] = labels;
  return dump(j);
}

std::string monte_carlo_to_json(const MonteCarloReport& report) {
  json j;
  j["schema"] = "pdfa/1";
  j["trials"] = report.trials;
  j["nonterminated"] = report.nonterminated;
  json edges = json::array();
  for (const EdgeCount& e : report.edges)
    edges.push_back(json{{"from", e.from},
                         {"to", e.to},
                         {"count", e.count},
                         {"freq", json_number(e.frequency)}});
  j["edges"] = edges;
  return dump(j);
}

std::string branch_info_to_json(const BranchInfo& info, double residual) {
  json j;
  j["schema"] = "pdfa/1";
  j["analysis"] = "branch-probs";
  j["tests"] = branch_table(info);
  j["forward_residual"] = json_number(residual);
  j["warnings"] = warnings_array(info);
  return dump(j);
}

std::string plv_to_json(const PlvSolution& sol, const BranchInfo& branches) {
  json j;
  j["schema"] = "pdfa/1";
  j["analysis"] = "plv";
  json vars = json::array();
  for (const auto& v : sol.vars) vars.push_back(v);
  j["vars"] = vars;
  j["basis"] = "per variable (dead, live); first declared variable most significant";
  json labels = json::object();
  for (auto& [l, entry] : sol.entry) {
    json rec;
    rec["entry"] = vector_to_array(entry);
    rec["exit"] = vector_to_array(sol.exit.at(l));
    json marg;
    for (const auto& v : sol.vars) {
      marg[v] = json{
          {"entry", json_number(marginal_liveness(sol, l, v, At::Entry))},
          {"exit", json_number(marginal_liveness(sol, l, v, At::Exit))}};
    }
    rec["live_marginals"] = std::move(marg);
    labels[std::to_string(l)] = std::move(rec);
  }
  j["labels"] = labels;
  j["branches"] = branch_table(branches);
  j["residual"] = json_number(sol.residual);
  j["warnings"] = warnings_array(branches);
  return dump(j);
}

namespace {

json quality_entry(const char* abstraction, const char* test,
                   const DenseMatrix& m) {
  json rounded = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(json_number(round2(m.at(r, c))));
    rounded.push_back(row);
  }
  return json{{"abstraction", abstraction},
              {"test", test},
              {"matrix", matrix_to_obj(m)},
              {"rounded", rounded}};
}

}  // namespace

std::string quality_table_to_json(const QualityTable& t) {
  json j;
  j["schema"] = "pdfa/1";
  j["n"] = t.n;
  j["tables"] = json::array({
      quality_entry("parity", "prime", t.parity_prime),
      quality_entry("parity", "not prime", t.parity_nonprime),
      quality_entry("primality", "even", t.primality_even),
      quality_entry("primality", "not even", t.primality_odd),
  });
  return dump(j);
}

std::string quality_table_to_text(const QualityTable& t) {
  std::ostringstream os;
  auto print = [&os](const char* title, const DenseMatrix& m) {
    os << title << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
      os << "  ";
      for (std::size_t c = 0; c < m.cols(); ++c) {
        os << std::fixed << std::setprecision(2) << std::setw(6)
           << round2(m.at(r, c));
      }
      os << "\n";
    }
  };
  os << "n = " << t.n << "\n";
  print("abstract prime test under parity", t.parity_prime);
  print("abstract not-prime test under parity", t.parity_nonprime);
  print("abstract even test under primality", t.primality_even);
  print("abstract not-even test under primality", t.primality_odd);
  return os.str();
}

std::string ops_to_json(const Program& p, const Abstraction& abs,
                        bool include_concrete) {
  StateSpace ss(p.decls);
  FlowGraph g = flow(p);
  json j;
  j["schema"] = "pdfa/1";
  j["abstraction"] = abs.name;
  j["concrete_dim"] = ss.size();
  j["abstract_dim"] = abs.classes();
  json labels = json::object();
  for (auto& [l, b] : g.blocks) {
    json rec;
    if (b.kind == BlockKind::Test) {
      rec["kind"] = "test";
      DenseMatrix ps = abstract_test(*b.test, abs, ss);
      rec["abstract_test"] = matrix_to_obj(ps);
      rec["abstract_test_complement"] =
          matrix_to_obj(DenseMatrix::identity(ps.rows()) - ps);
      if (include_concrete)
        rec["concrete_test"] = matrix_to_obj(test_matrix(*b.test, ss));
    } else {
      rec["kind"] = b.kind == BlockKind::Skip
                        ? "skip"
                        : (b.kind == BlockKind::Assign ? "assign" : "random");
      rec["abstract"] = matrix_to_obj(lifted_block_matrix(b, ss, abs));
      if (include_concrete)
        rec["concrete"] = matrix_to_obj(block_matrix(b, ss));
    }
    labels[std::to_string(l)] = std::move(rec);
  }
  j["labels"] = labels;
  return dump(j);
}

std::string error_to_json(const std::string& kind, const std::string& message) {
  json j;
  j["schema"] = "pdfa/1";
  j["error"] = json{{"kind", kind}, {"message", message}};
  return dump(j);
}

}  // namespace pdfa
