#include "pdfa/ast.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace pdfa {

ExprPtr Expr::constant(long long v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->value = v;
  return e;
}

ExprPtr Expr::variable(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->var = std::move(name);
  return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

BExprPtr BExpr::literal(bool v) {
  auto b = std::make_shared<BExpr>();
  b->kind = v ? Kind::True : Kind::False;
  return b;
}

BExprPtr BExpr::compare(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  auto b = std::make_shared<BExpr>();
  b->kind = Kind::Cmp;
  b->op = op;
  b->lhs = std::move(lhs);
  b->rhs = std::move(rhs);
  return b;
}

BExprPtr BExpr::negation(BExprPtr e) {
  auto b = std::make_shared<BExpr>();
  b->kind = Kind::Not;
  b->a = std::move(e);
  return b;
}

BExprPtr BExpr::conjunction(BExprPtr x, BExprPtr y) {
  auto b = std::make_shared<BExpr>();
  b->kind = Kind::And;
  b->a = std::move(x);
  b->b = std::move(y);
  return b;
}

BExprPtr BExpr::disjunction(BExprPtr x, BExprPtr y) {
  auto b = std::make_shared<BExpr>();
  b->kind = Kind::Or;
  b->a = std::move(x);
  b->b = std::move(y);
  return b;
}

BExprPtr BExpr::prime_of(ExprPtr e) {
  auto b = std::make_shared<BExpr>();
  b->kind = Kind::Prime;
  b->lhs = std::move(e);
  return b;
}

DistLiteral DistLiteral::uniform(std::vector<long long> values) {
  DistLiteral d;
  d.uniform_syntax = true;
  double p = 1.0 / static_cast<double>(values.size());
  for (long long v : values) d.entries.emplace_back(v, p);
  return d;
}

void DistLiteral::validate(double tol) const {
  if (entries.empty()) throw InputError("empty distribution literal");
  double sum = 0.0;
  for (auto& [v, p] : entries) {
    if (p < 0.0 || p > 1.0)
      throw InputError("distribution probability " + std::to_string(p) +
                       " outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    throw InputError("distribution probabilities sum to " +
                     std::to_string(sum) + ", not 1");
}

StmtPtr Stmt::skip(Label l) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Skip;
  s->label = l;
  return s;
}

StmtPtr Stmt::assign(std::string var, ExprPtr e, Label l) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Assign;
  s->label = l;
  s->var = std::move(var);
  s->expr = std::move(e);
  return s;
}

StmtPtr Stmt::random(std::string var, DistLiteral d, Label l) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Random;
  s->label = l;
  s->var = std::move(var);
  s->dist = std::move(d);
  return s;
}

StmtPtr Stmt::seq(StmtPtr a, StmtPtr b) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Seq;
  s->first = std::move(a);
  s->second = std::move(b);
  return s;
}

StmtPtr Stmt::if_then_else(BExprPtr c, StmtPtr t, StmtPtr e, Label l) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::If;
  s->label = l;
  s->cond = std::move(c);
  s->first = std::move(t);
  s->second = std::move(e);
  return s;
}

StmtPtr Stmt::while_do(BExprPtr c, StmtPtr body, Label l) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::While;
  s->label = l;
  s->cond = std::move(c);
  s->first = std::move(body);
  return s;
}

VarDecls::VarDecls(std::vector<VarDecl> decls) : decls_(std::move(decls)) {
  for (std::size_t i = 0; i < decls_.size(); ++i) {
    if (decls_[i].size < 1)
      throw InputError("variable '" + decls_[i].name + "' has an empty range");
    for (std::size_t j = 0; j < i; ++j)
      if (decls_[j].name == decls_[i].name)
        throw InputError("variable '" + decls_[i].name + "' declared twice");
  }
}

bool VarDecls::declared(const std::string& name) const {
  return std::any_of(decls_.begin(), decls_.end(),
                     [&](const VarDecl& d) { return d.name == name; });
}

std::size_t VarDecls::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < decls_.size(); ++i)
    if (decls_[i].name == name) return i;
  throw InputError("variable '" + name + "' not declared");
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const:
      return a.value == b.value;
    case Expr::Kind::Var:
      return a.var == b.var;
    default:
      return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

bool equal(const BExpr& a, const BExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BExpr::Kind::True:
    case BExpr::Kind::False:
      return true;
    case BExpr::Kind::Cmp:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case BExpr::Kind::Not:
      return equal(*a.a, *b.a);
    case BExpr::Kind::Prime:
      return equal(*a.lhs, *b.lhs);
    default:
      return equal(*a.a, *b.a) && equal(*a.b, *b.b);
  }
}

bool equal(const DistLiteral& a, const DistLiteral& b) {
  return a.entries == b.entries;
}

bool equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.label != b.label) return false;
  switch (a.kind) {
    case Stmt::Kind::Skip:
      return true;
    case Stmt::Kind::Assign:
      return a.var == b.var && equal(*a.expr, *b.expr);
    case Stmt::Kind::Random:
      return a.var == b.var && equal(a.dist, b.dist);
    case Stmt::Kind::Seq:
      return equal(*a.first, *b.first) && equal(*a.second, *b.second);
    case Stmt::Kind::If:
      return equal(*a.cond, *b.cond) && equal(*a.first, *b.first) &&
             equal(*a.second, *b.second);
    case Stmt::Kind::While:
      return equal(*a.cond, *b.cond) && equal(*a.first, *b.first);
  }
  return false;
}

namespace {

void collect_free_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return;
    case Expr::Kind::Var:
      out.insert(e.var);
      return;
    default:
      collect_free_vars(*e.lhs, out);
      collect_free_vars(*e.rhs, out);
  }
}

void collect_free_vars(const BExpr& b, std::set<std::string>& out) {
  switch (b.kind) {
    case BExpr::Kind::True:
    case BExpr::Kind::False:
      return;
    case BExpr::Kind::Cmp:
      collect_free_vars(*b.lhs, out);
      collect_free_vars(*b.rhs, out);
      return;
    case BExpr::Kind::Prime:
      collect_free_vars(*b.lhs, out);
      return;
    case BExpr::Kind::Not:
      collect_free_vars(*b.a, out);
      return;
    default:
      collect_free_vars(*b.a, out);
      collect_free_vars(*b.b, out);
  }
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_free_vars(e, out);
  return out;
}

std::set<std::string> free_vars(const BExpr& b) {
  std::set<std::string> out;
  collect_free_vars(b, out);
  return out;
}

std::vector<Label> collect_labels(const Stmt& s) {
  std::vector<Label> out;
  if (s.kind == Stmt::Kind::Seq) {
    auto a = collect_labels(*s.first);
    auto b = collect_labels(*s.second);
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  out.push_back(s.label);
  if (s.kind == Stmt::Kind::If) {
    auto a = collect_labels(*s.first);
    auto b = collect_labels(*s.second);
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
  } else if (s.kind == Stmt::Kind::While) {
    auto a = collect_labels(*s.first);
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

namespace {

StmtPtr relabel(const Stmt& s, std::set<Label>& used, Label& next) {
  auto fresh = [&]() {
    while (used.count(next)) ++next;
    used.insert(next);
    return next;
  };
  Label l = s.label;
  if (s.kind != Stmt::Kind::Seq && l == kNoLabel) l = fresh();
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return Stmt::skip(l);
    case Stmt::Kind::Assign:
      return Stmt::assign(s.var, s.expr, l);
    case Stmt::Kind::Random:
      return Stmt::random(s.var, s.dist, l);
    case Stmt::Kind::Seq: {
      auto a = relabel(*s.first, used, next);
      auto b = relabel(*s.second, used, next);
      return Stmt::seq(std::move(a), std::move(b));
    }
    case Stmt::Kind::If: {
      auto t = relabel(*s.first, used, next);
      auto e = relabel(*s.second, used, next);
      return Stmt::if_then_else(s.cond, std::move(t), std::move(e), l);
    }
    case Stmt::Kind::While: {
      auto b = relabel(*s.first, used, next);
      return Stmt::while_do(s.cond, std::move(b), l);
    }
  }
  throw InputError("unreachable statement kind");
}

}  // namespace

StmtPtr assign_labels(const StmtPtr& s) {
  std::set<Label> used;
  for (Label l : collect_labels(*s)) {
    if (l == kNoLabel) continue;
    if (l < 0) throw InputError("labels must be positive");
    if (!used.insert(l).second)
      throw InputError("duplicate label " + std::to_string(l));
  }
  Label next = 1;
  return relabel(*s, used, next);
}

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Mod:
      return 2;
    default:
      return 3;
  }
}

const char* op_text(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
      return " + ";
    case Expr::Kind::Sub:
      return " - ";
    case Expr::Kind::Mul:
      return " * ";
    case Expr::Kind::Mod:
      return " mod ";
    default:
      return "";
  }
}

void print_expr(const Expr& e, std::ostringstream& os, int parent_prec,
                bool is_rhs) {
  int prec = precedence(e.kind);
  switch (e.kind) {
    case Expr::Kind::Const:
      os << e.value;
      return;
    case Expr::Kind::Var:
      os << e.var;
      return;
    default: {
      // All binary operators are left associative, so a right child of
      // equal precedence needs parentheses to survive a reparse.
      bool parens = prec < parent_prec || (prec == parent_prec && is_rhs);
      if (parens) os << "(";
      print_expr(*e.lhs, os, prec, false);
      os << op_text(e.kind);
      print_expr(*e.rhs, os, prec + 0, true);
      if (parens) os << ")";
    }
  }
}

const char* cmp_text(BExpr::CmpOp op) {
  switch (op) {
    case BExpr::CmpOp::Lt:
      return " < ";
    case BExpr::CmpOp::Le:
      return " <= ";
    case BExpr::CmpOp::Eq:
      return " = ";
    case BExpr::CmpOp::Gt:
      return " > ";
    case BExpr::CmpOp::Ge:
      return " >= ";
  }
  return "";
}

int bprecedence(BExpr::Kind k) {
  switch (k) {
    case BExpr::Kind::Or:
      return 1;
    case BExpr::Kind::And:
      return 2;
    case BExpr::Kind::Not:
      return 3;
    default:
      return 4;
  }
}

void print_bexpr(const BExpr& b, std::ostringstream& os, int parent_prec) {
  int prec = bprecedence(b.kind);
  bool parens = prec < parent_prec;
  switch (b.kind) {
    case BExpr::Kind::True:
      os << "true";
      return;
    case BExpr::Kind::False:
      os << "false";
      return;
    case BExpr::Kind::Cmp:
      if (parens) os << "(";
      print_expr(*b.lhs, os, 0, false);
      os << cmp_text(b.op);
      print_expr(*b.rhs, os, 0, false);
      if (parens) os << ")";
      return;
    case BExpr::Kind::Prime:
      os << "prime(";
      print_expr(*b.lhs, os, 0, false);
      os << ")";
      return;
    case BExpr::Kind::Not:
      os << "not ";
      print_bexpr(*b.a, os, prec);
      return;
    case BExpr::Kind::And:
      if (parens) os << "(";
      print_bexpr(*b.a, os, prec);
      os << " and ";
      print_bexpr(*b.b, os, prec + 1);
      if (parens) os << ")";
      return;
    case BExpr::Kind::Or:
      if (parens) os << "(";
      print_bexpr(*b.a, os, prec);
      os << " or ";
      print_bexpr(*b.b, os, prec + 1);
      if (parens) os << ")";
      return;
  }
}

std::string format_probability(double p) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, end);
}

void print_stmt(const Stmt& s, std::ostringstream& os, int indent);

void print_indent(std::ostringstream& os, int indent) {
  for (int i = 0; i < indent; ++i) os << "  ";
}

void print_block(const char* text, Label l, std::ostringstream& os,
                 int indent) {
  print_indent(os, indent);
  if (l != kNoLabel)
    os << "[" << text << "]^" << l;
  else
    os << text;
}

void print_stmt(const Stmt& s, std::ostringstream& os, int indent) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      print_block("skip", s.label, os, indent);
      return;
    case Stmt::Kind::Assign: {
      std::ostringstream inner;
      print_expr(*s.expr, inner, 0, false);
      print_block((s.var + " := " + inner.str()).c_str(), s.label, os, indent);
      return;
    }
    case Stmt::Kind::Random: {
      print_block((s.var + " ?= " + pretty_print(s.dist)).c_str(), s.label, os,
                  indent);
      return;
    }
    case Stmt::Kind::Seq:
      print_stmt(*s.first, os, indent);
      os << ";\n";
      print_stmt(*s.second, os, indent);
      return;
    case Stmt::Kind::If: {
      print_indent(os, indent);
      os << "if ";
      print_bexpr(*s.cond, os, 0);
      os << " then\n";
      print_stmt(*s.first, os, indent + 1);
      os << "\n";
      print_indent(os, indent);
      os << "else\n";
      print_stmt(*s.second, os, indent + 1);
      os << "\n";
      print_indent(os, indent);
      os << "fi";
      if (s.label != kNoLabel) os << "^" << s.label;
      return;
    }
    case Stmt::Kind::While: {
      print_indent(os, indent);
      os << "while ";
      print_bexpr(*s.cond, os, 0);
      os << " do\n";
      print_stmt(*s.first, os, indent + 1);
      os << "\n";
      print_indent(os, indent);
      os << "od";
      if (s.label != kNoLabel) os << "^" << s.label;
      return;
    }
  }
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  print_expr(e, os, 0, false);
  return os.str();
}

std::string pretty_print(const BExpr& b) {
  std::ostringstream os;
  print_bexpr(b, os, 0);
  return os.str();
}

std::string pretty_print(const DistLiteral& d) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (auto& [v, p] : d.entries) {
    if (!first) os << ", ";
    first = false;
    if (d.uniform_syntax)
      os << v;
    else
      os << "(" << v << ", " << format_probability(p) << ")";
  }
  os << "}";
  return os.str();
}

std::string pretty_print(const Stmt& s, int indent) {
  std::ostringstream os;
  print_stmt(s, os, indent);
  return os.str();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  for (const VarDecl& d : p.decls.all())
    os << "var " << d.name << " : 0.." << (d.size - 1) << ";\n";
  os << "\n" << pretty_print(*p.body, 0) << "\n";
  return os.str();
}

namespace {

void validate_expr(const Expr& e, const VarDecls& decls) {
  for (const auto& v : free_vars(e))
    if (!decls.declared(v))
      throw InputError("undeclared variable '" + v + "'");
}

void validate_bexpr(const BExpr& b, const VarDecls& decls) {
  for (const auto& v : free_vars(b))
    if (!decls.declared(v))
      throw InputError("undeclared variable '" + v + "'");
}

void validate_stmt(const Stmt& s, const VarDecls& decls) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return;
    case Stmt::Kind::Assign:
      if (!decls.declared(s.var))
        throw InputError("undeclared variable '" + s.var + "'");
      validate_expr(*s.expr, decls);
      return;
    case Stmt::Kind::Random: {
      if (!decls.declared(s.var))
        throw InputError("undeclared variable '" + s.var + "'");
      s.dist.validate();
      long long size = decls.at(decls.index_of(s.var)).size;
      for (auto& [v, p] : s.dist.entries)
        if (v < 0 || v >= size)
          throw InputError("distribution value " + std::to_string(v) +
                           " outside range of '" + s.var + "'");
      return;
    }
    case Stmt::Kind::Seq:
      validate_stmt(*s.first, decls);
      validate_stmt(*s.second, decls);
      return;
    case Stmt::Kind::If:
      validate_bexpr(*s.cond, decls);
      validate_stmt(*s.first, decls);
      validate_stmt(*s.second, decls);
      return;
    case Stmt::Kind::While:
      validate_bexpr(*s.cond, decls);
      validate_stmt(*s.first, decls);
      return;
  }
}

}  // namespace

void validate_program(const Program& p) {
  if (p.decls.count() == 0) throw InputError("program declares no variables");
  if (!p.body) throw InputError("program has no body");
  validate_stmt(*p.body, p.decls);
  std::set<Label> seen;
  for (Label l : collect_labels(*p.body)) {
    if (l == kNoLabel) continue;
    if (l < 0) throw InputError("labels must be positive");
    if (!seen.insert(l).second)
      throw InputError("duplicate label " + std::to_string(l));
  }
}

}  // namespace pdfa
