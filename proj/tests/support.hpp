#pragma once

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdfa/ast.hpp"
#include "pdfa/linalg.hpp"
#include "pdfa/parser.hpp"

namespace pdfa::testing {

inline std::string programs_dir() { return PDFA_PROGRAMS_DIR; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Program load_program(const std::string& name) {
  return parse_program(slurp(programs_dir() + "/" + name));
}

/// Decodes a matrix fixture written as one string per row with
/// '.' = 0, 'Q' = 1/4, 'H' = 1/2, '1' = 1.
inline DenseMatrix decode_matrix(const std::vector<std::string>& rows) {
  DenseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      switch (rows[r][c]) {
        case '.': break;
        case 'Q': m.at(r, c) = 0.25; break;
        case 'H': m.at(r, c) = 0.5; break;
        case '1': m.at(r, c) = 1.0; break;
        default: throw std::runtime_error("bad fixture character");
      }
    }
  return m;
}

// Reference abstract operators of the three-variable example program
// over the 16 joint (x, y) states, transcribed row by row.
inline DenseMatrix fixture_f1() {
  return decode_matrix({
      "H...H...........",
      ".H...H..........",
      "..H...H.........",
      "...H...H........",
      "H...H...........",
      ".H...H..........",
      "..H...H.........",
      "...H...H........",
      "H...H...........",
      ".H...H..........",
      "..H...H.........",
      "...H...H........",
      "H...H...........",
      ".H...H..........",
      "..H...H.........",
      "...H...H........",
  });
}

inline DenseMatrix fixture_f2() {
  return decode_matrix({
      "QQQQ............",
      "QQQQ............",
      "QQQQ............",
      "QQQQ............",
      "....QQQQ........",
      "....QQQQ........",
      "....QQQQ........",
      "....QQQQ........",
      "........QQQQ....",
      "........QQQQ....",
      "........QQQQ....",
      "........QQQQ....",
      "............QQQQ",
      "............QQQQ",
      "............QQQQ",
      "............QQQQ",
  });
}

inline DenseMatrix fixture_f3() {
  return decode_matrix({
      "1...............",
      ".....1..........",
      "..........1.....",
      "...............1",
      "....1...........",
      ".........1......",
      "..............1.",
      "...1............",
      "........1.......",
      ".............1..",
      "..1.............",
      ".......1........",
      "............1...",
      ".1..............",
      "......1.........",
      "...........1....",
  });
}

/// Reference projection at the branch of the example program. Its 1s
/// sit on the first twelve diagonal entries, i.e. it selects x <= 2: the
/// complement of the true-branch test x > 2.
inline DenseMatrix fixture_p4_printed() {
  DenseMatrix m(16, 16);
  for (std::size_t i = 0; i < 12; ++i) m.at(i, i) = 1.0;
  return m;
}

/// Small random programs for property tests: 1..3 variables of range
/// size 2..4, statement trees of bounded depth, total tests and
/// arithmetic that stays inside the grammar.
class ProgramGenerator {
public:
  explicit ProgramGenerator(unsigned seed) : rng_(seed) {}

  Program generate() {
    int nvars = pick(1, 3);
    std::vector<VarDecl> decls;
    const char* names[] = {"x", "y", "z"};
    for (int i = 0; i < nvars; ++i)
      decls.push_back(VarDecl{names[i], pick(2, 4)});
    Program p;
    p.decls = VarDecls(decls);
    vars_.clear();
    for (auto& d : decls) vars_.push_back(d);
    p.body = assign_labels(stmt(2));
    return p;
  }

private:
  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  const VarDecl& var() { return vars_[pick(0, (int)vars_.size() - 1)]; }

  ExprPtr expr(int depth) {
    if (depth == 0 || pick(0, 2) == 0) {
      if (pick(0, 1) == 0) return Expr::constant(pick(0, 4));
      return Expr::variable(var().name);
    }
    auto kinds = {Expr::Kind::Add, Expr::Kind::Sub, Expr::Kind::Mul,
                  Expr::Kind::Mod};
    Expr::Kind k = *(kinds.begin() + pick(0, 3));
    ExprPtr rhs = k == Expr::Kind::Mod
                      ? Expr::constant(pick(1, 4))  // keep mod total
                      : expr(depth - 1);
    return Expr::binary(k, expr(depth - 1), std::move(rhs));
  }

  BExprPtr bexpr(int depth) {
    if (depth == 0 || pick(0, 2) == 0) {
      auto ops = {BExpr::CmpOp::Lt, BExpr::CmpOp::Le, BExpr::CmpOp::Eq,
                  BExpr::CmpOp::Gt, BExpr::CmpOp::Ge};
      return BExpr::compare(*(ops.begin() + pick(0, 4)), expr(1), expr(1));
    }
    switch (pick(0, 3)) {
      case 0:
        return BExpr::negation(bexpr(depth - 1));
      case 1:
        return BExpr::conjunction(bexpr(depth - 1), bexpr(depth - 1));
      case 2:
        return BExpr::disjunction(bexpr(depth - 1), bexpr(depth - 1));
      default:
        return BExpr::prime_of(expr(1));
    }
  }

  DistLiteral dist(const VarDecl& d) {
    if (pick(0, 1) == 0) {
      std::vector<long long> values;
      for (long long v = 0; v < d.size; ++v)
        if (pick(0, 1) == 0) values.push_back(v);
      if (values.empty()) values.push_back(pick(0, (int)d.size - 1));
      return DistLiteral::uniform(std::move(values));
    }
    DistLiteral out;
    int parts = pick(1, (int)d.size);
    double left = 1.0;
    for (int i = 0; i < parts; ++i) {
      double p = i == parts - 1 ? left : left / 2.0;
      out.entries.emplace_back(i, p);
      left -= p;
    }
    return out;
  }

  StmtPtr stmt(int depth) {
    int choice = depth == 0 ? pick(0, 2) : pick(0, 5);
    switch (choice) {
      case 0:
        return Stmt::skip();
      case 1: {
        const VarDecl& d = var();
        return Stmt::assign(d.name, expr(2));
      }
      case 2: {
        const VarDecl& d = var();
        return Stmt::random(d.name, dist(d));
      }
      case 3:
        return Stmt::seq(stmt(depth - 1), stmt(depth - 1));
      case 4:
        return Stmt::if_then_else(bexpr(1), stmt(depth - 1), stmt(depth - 1));
      default:
        // Generated loops may well diverge; these programs feed parsers
        // and analyses, never the interpreter.
        return Stmt::while_do(bexpr(1), stmt(depth - 1));
    }
  }

  std::mt19937 rng_;
  std::vector<VarDecl> vars_;
};

}  // namespace pdfa::testing
