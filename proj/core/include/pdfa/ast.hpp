#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pdfa/errors.hpp"

namespace pdfa {

using Label = int;
inline constexpr Label kNoLabel = 0;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Arithmetic expressions over declared variables. Values are plain
/// integers until an assignment reduces them into the target range.
struct Expr {
  enum class Kind { Const, Var, Add, Sub, Mul, Mod };

  Kind kind;
  long long value = 0;   // Const
  std::string var;       // Var
  ExprPtr lhs, rhs;      // binary forms

  static ExprPtr constant(long long v);
  static ExprPtr variable(std::string name);
  static ExprPtr binary(Kind k, ExprPtr lhs, ExprPtr rhs);
};

struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

/// Boolean tests: comparisons, connectives, and the prime(e) predicate.
struct BExpr {
  enum class Kind { True, False, Cmp, Not, And, Or, Prime };
  enum class CmpOp { Lt, Le, Eq, Gt, Ge };

  Kind kind;
  CmpOp op = CmpOp::Eq;  // Cmp
  ExprPtr lhs, rhs;      // Cmp; Prime uses lhs
  BExprPtr a, b;         // Not uses a; And/Or use both

  static BExprPtr literal(bool v);
  static BExprPtr compare(CmpOp op, ExprPtr lhs, ExprPtr rhs);
  static BExprPtr negation(BExprPtr e);
  static BExprPtr conjunction(BExprPtr a, BExprPtr b);
  static BExprPtr disjunction(BExprPtr a, BExprPtr b);
  static BExprPtr prime_of(ExprPtr e);
};

/// Right-hand side of a random assignment: explicit (value, probability)
/// pairs. uniform_syntax remembers whether the source wrote a bare value
/// set; it does not affect meaning or equality.
struct DistLiteral {
  std::vector<std::pair<long long, double>> entries;
  bool uniform_syntax = false;

  static DistLiteral uniform(std::vector<long long> values);
  /// Probabilities must be nonnegative and sum to 1 within tol.
  void validate(double tol = 1e-9) const;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

/// Statements of the labelled language. Labels attach to elementary
/// blocks and tests; sequencing carries none.
struct Stmt {
  enum class Kind { Skip, Assign, Random, Seq, If, While };

  Kind kind;
  Label label = kNoLabel;  // unused for Seq
  std::string var;         // Assign/Random target
  ExprPtr expr;            // Assign rhs
  DistLiteral dist;        // Random rhs
  BExprPtr cond;           // If/While test
  StmtPtr first, second;   // Seq; If uses them as then/else; While uses first

  static StmtPtr skip(Label l = kNoLabel);
  static StmtPtr assign(std::string var, ExprPtr e, Label l = kNoLabel);
  static StmtPtr random(std::string var, DistLiteral d, Label l = kNoLabel);
  static StmtPtr seq(StmtPtr a, StmtPtr b);
  static StmtPtr if_then_else(BExprPtr c, StmtPtr t, StmtPtr e,
                              Label l = kNoLabel);
  static StmtPtr while_do(BExprPtr c, StmtPtr body, Label l = kNoLabel);
};

/// Declared variable with value range 0..size-1. Declaration order fixes
/// the tensor factor order of the state space.
struct VarDecl {
  std::string name;
  long long size = 0;
};

class VarDecls {
public:
  VarDecls() = default;
  explicit VarDecls(std::vector<VarDecl> decls);

  std::size_t count() const { return decls_.size(); }
  const VarDecl& at(std::size_t i) const { return decls_.at(i); }
  const std::vector<VarDecl>& all() const { return decls_; }

  bool declared(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;

private:
  std::vector<VarDecl> decls_;
};

struct Program {
  VarDecls decls;
  StmtPtr body;
};

bool equal(const Expr& a, const Expr& b);
bool equal(const BExpr& a, const BExpr& b);
bool equal(const DistLiteral& a, const DistLiteral& b);
bool equal(const Stmt& a, const Stmt& b);

std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const BExpr& b);

/// Labels of all blocks in program-text order.
std::vector<Label> collect_labels(const Stmt& s);

/// Gives every unlabelled block the smallest unused positive label, in
/// program-text order. Throws InputError on duplicate existing labels.
StmtPtr assign_labels(const StmtPtr& s);

std::string pretty_print(const Expr& e);
std::string pretty_print(const BExpr& b);
std::string pretty_print(const DistLiteral& d);
std::string pretty_print(const Stmt& s, int indent = 0);
std::string pretty_print(const Program& p);

/// Checks variable declarations, label uniqueness/positivity, and
/// distribution literals (sum, range). Throws InputError.
void validate_program(const Program& p);

}  // namespace pdfa
