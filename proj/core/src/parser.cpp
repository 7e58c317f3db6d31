#include "pdfa/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace pdfa {

namespace {

enum class Tok {
  End,
  Int,
  Ident,
  Number,   // decimal probability literal, e.g. 0.5
  KwVar,
  KwSkip,
  KwIf,
  KwThen,
  KwElse,
  KwFi,
  KwWhile,
  KwDo,
  KwOd,
  KwNot,
  KwAnd,
  KwOr,
  KwTrue,
  KwFalse,
  KwMod,
  KwPrime,
  Assign,        // :=
  RandomAssign,  // ?=
  Semi,
  Colon,
  DotDot,
  Comma,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Caret,
  Plus,
  Minus,
  Star,
  Slash,
  Lt,
  Le,
  Eq,
  Gt,
  Ge,
};

struct Token {
  Tok kind;
  std::string text;
  long long int_value = 0;
  double num_value = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

private:
  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      t.text = "<end of input>";
      return t;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return lex_word(t);
    return lex_symbol(t);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++column_;
        ++pos_;
      } else if (c == '#') {  // line comment
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void bump(std::size_t n = 1) {
    pos_ += n;
    column_ += static_cast<int>(n);
  }

  Token lex_number(Token t) {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      bump();
    // A dot followed by a digit is a decimal literal; ".." is the range
    // operator and is left for the parser.
    bool decimal = pos_ + 1 < text_.size() && text_[pos_] == '.' &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    if (decimal) {
      bump();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        bump();
      t.kind = Tok::Number;
      t.text = std::string(text_.substr(start, pos_ - start));
      t.num_value = std::stod(t.text);
      return t;
    }
    t.kind = Tok::Int;
    t.text = std::string(text_.substr(start, pos_ - start));
    t.int_value = std::stoll(t.text);
    return t;
  }

  Token lex_word(Token t) {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      bump();
    t.text = std::string(text_.substr(start, pos_ - start));
    const std::string& w = t.text;
    if (w == "var") t.kind = Tok::KwVar;
    else if (w == "skip") t.kind = Tok::KwSkip;
    else if (w == "if") t.kind = Tok::KwIf;
    else if (w == "then") t.kind = Tok::KwThen;
    else if (w == "else") t.kind = Tok::KwElse;
    else if (w == "fi") t.kind = Tok::KwFi;
    else if (w == "while") t.kind = Tok::KwWhile;
    else if (w == "do") t.kind = Tok::KwDo;
    else if (w == "od") t.kind = Tok::KwOd;
    else if (w == "not") t.kind = Tok::KwNot;
    else if (w == "and") t.kind = Tok::KwAnd;
    else if (w == "or") t.kind = Tok::KwOr;
    else if (w == "true") t.kind = Tok::KwTrue;
    else if (w == "false") t.kind = Tok::KwFalse;
    else if (w == "mod") t.kind = Tok::KwMod;
    else if (w == "prime") t.kind = Tok::KwPrime;
    else t.kind = Tok::Ident;
    return t;
  }

  Token lex_symbol(Token t) {
    auto two = [&](char a, char b) {
      return text_[pos_] == a && pos_ + 1 < text_.size() &&
             text_[pos_ + 1] == b;
    };
    auto make2 = [&](Tok k, const char* s) {
      t.kind = k;
      t.text = s;
      bump(2);
      return t;
    };
    if (two(':', '=')) return make2(Tok::Assign, ":=");
    if (two('?', '=')) return make2(Tok::RandomAssign, "?=");
    if (two('.', '.')) return make2(Tok::DotDot, "..");
    if (two('<', '=')) return make2(Tok::Le, "<=");
    if (two('>', '=')) return make2(Tok::Ge, ">=");
    char c = text_[pos_];
    t.text = std::string(1, c);
    switch (c) {
      case ';': t.kind = Tok::Semi; break;
      case ':': t.kind = Tok::Colon; break;
      case ',': t.kind = Tok::Comma; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case '^': t.kind = Tok::Caret; break;
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '<': t.kind = Tok::Lt; break;
      case '=': t.kind = Tok::Eq; break;
      case '>': t.kind = Tok::Gt; break;
      default:
        throw ParseError(line_, column_,
                         std::string("unexpected character '") + c + "'");
    }
    bump();
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Program parse() {
    std::vector<VarDecl> decls;
    while (at(Tok::KwVar)) decls.push_back(parse_decl());
    if (decls.empty()) fail("expected at least one 'var' declaration");
    Program p;
    p.decls = VarDecls(std::move(decls));
    p.body = parse_stmt();
    expect(Tok::End, "extra input after the program");
    validate_program(p);
    return p;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }

  Token take() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = peek();
    throw ParseError(t.line, t.column, msg + " (got '" + t.text + "')");
  }

  bool at(Tok k) const { return peek().kind == k; }

  Token expect(Tok k, const std::string& msg) {
    if (!at(k)) fail(msg);
    return take();
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  VarDecl parse_decl() {
    expect(Tok::KwVar, "expected 'var'");
    Token name = expect(Tok::Ident, "expected variable name");
    expect(Tok::Colon, "expected ':' after variable name");
    Token lo = expect(Tok::Int, "expected range lower bound");
    if (lo.int_value != 0)
      throw ParseError(lo.line, lo.column, "variable ranges must start at 0");
    expect(Tok::DotDot, "expected '..' in range");
    Token hi = expect(Tok::Int, "expected range upper bound");
    if (hi.int_value < 0)
      throw ParseError(hi.line, hi.column, "empty variable range");
    expect(Tok::Semi, "expected ';' after declaration");
    return VarDecl{name.text, hi.int_value + 1};
  }

  StmtPtr parse_stmt() {
    StmtPtr s = parse_labeled();
    while (accept(Tok::Semi)) {
      StmtPtr rhs = parse_labeled();
      s = Stmt::seq(std::move(s), std::move(rhs));
    }
    return s;
  }

  Label parse_label_suffix() {
    if (!accept(Tok::Caret)) return kNoLabel;
    Token t = expect(Tok::Int, "expected label after '^'");
    if (t.int_value <= 0)
      throw ParseError(t.line, t.column, "labels must be positive");
    return static_cast<Label>(t.int_value);
  }

  StmtPtr parse_labeled() {
    if (accept(Tok::LBracket)) {
      StmtPtr inner = parse_simple();
      expect(Tok::RBracket, "expected ']' closing the block");
      expect(Tok::Caret, "expected '^label' after ']'");
      Token t = expect(Tok::Int, "expected label after '^'");
      if (t.int_value <= 0)
        throw ParseError(t.line, t.column, "labels must be positive");
      auto relabeled = std::make_shared<Stmt>(*inner);
      relabeled->label = static_cast<Label>(t.int_value);
      return relabeled;
    }
    return parse_simple();
  }

  StmtPtr parse_simple() {
    if (accept(Tok::KwSkip)) return Stmt::skip(parse_label_suffix());
    if (at(Tok::KwIf)) return parse_if();
    if (at(Tok::KwWhile)) return parse_while();
    if (at(Tok::Ident)) {
      Token name = take();
      if (accept(Tok::Assign)) return Stmt::assign(name.text, parse_expr());
      if (accept(Tok::RandomAssign))
        return Stmt::random(name.text, parse_dist());
      fail("expected ':=' or '?=' after variable");
    }
    fail("expected a statement");
  }

  StmtPtr parse_if() {
    expect(Tok::KwIf, "expected 'if'");
    BExprPtr cond = parse_bexpr();
    expect(Tok::KwThen, "expected 'then'");
    StmtPtr then_branch = parse_stmt();
    expect(Tok::KwElse, "expected 'else'");
    StmtPtr else_branch = parse_stmt();
    expect(Tok::KwFi, "expected 'fi'");
    Label l = parse_label_suffix();
    return Stmt::if_then_else(std::move(cond), std::move(then_branch),
                              std::move(else_branch), l);
  }

  StmtPtr parse_while() {
    expect(Tok::KwWhile, "expected 'while'");
    BExprPtr cond = parse_bexpr();
    expect(Tok::KwDo, "expected 'do'");
    StmtPtr body = parse_stmt();
    expect(Tok::KwOd, "expected 'od'");
    Label l = parse_label_suffix();
    return Stmt::while_do(std::move(cond), std::move(body), l);
  }

  DistLiteral parse_dist() {
    expect(Tok::LBrace, "expected '{' opening a distribution");
    DistLiteral d;
    bool explicit_pairs = at(Tok::LParen);
    std::vector<long long> uniform_values;
    while (true) {
      if (explicit_pairs) {
        expect(Tok::LParen, "expected '(value, probability)'");
        Token v = expect(Tok::Int, "expected a value");
        expect(Tok::Comma, "expected ',' inside the pair");
        double p = parse_probability();
        expect(Tok::RParen, "expected ')' closing the pair");
        d.entries.emplace_back(v.int_value, p);
      } else {
        Token v = expect(Tok::Int, "expected a value");
        uniform_values.push_back(v.int_value);
      }
      if (!accept(Tok::Comma)) break;
    }
    expect(Tok::RBrace, "expected '}' closing the distribution");
    if (!explicit_pairs) d = DistLiteral::uniform(std::move(uniform_values));
    return d;
  }

  double parse_probability() {
    if (at(Tok::Number)) return take().num_value;
    if (at(Tok::Int)) {
      Token n = take();
      if (accept(Tok::Slash)) {
        Token m = expect(Tok::Int, "expected a denominator");
        if (m.int_value == 0)
          throw ParseError(m.line, m.column, "zero denominator");
        return static_cast<double>(n.int_value) /
               static_cast<double>(m.int_value);
      }
      return static_cast<double>(n.int_value);
    }
    fail("expected a probability");
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      auto k = take().kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub;
      e = Expr::binary(k, std::move(e), parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (at(Tok::Star) || at(Tok::KwMod)) {
      auto k = take().kind == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Mod;
      e = Expr::binary(k, std::move(e), parse_factor());
    }
    return e;
  }

  ExprPtr parse_factor() {
    if (at(Tok::Int)) return Expr::constant(take().int_value);
    if (at(Tok::Ident)) return Expr::variable(take().text);
    if (accept(Tok::LParen)) {
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "expected ')'");
      return e;
    }
    fail("expected an expression");
  }

  BExprPtr parse_bexpr() {
    BExprPtr e = parse_bterm();
    while (accept(Tok::KwOr))
      e = BExpr::disjunction(std::move(e), parse_bterm());
    return e;
  }

  BExprPtr parse_bterm() {
    BExprPtr e = parse_bfactor();
    while (accept(Tok::KwAnd))
      e = BExpr::conjunction(std::move(e), parse_bfactor());
    return e;
  }

  BExprPtr parse_bfactor() {
    if (accept(Tok::KwNot)) return BExpr::negation(parse_bfactor());
    if (accept(Tok::KwTrue)) return BExpr::literal(true);
    if (accept(Tok::KwFalse)) return BExpr::literal(false);
    if (accept(Tok::KwPrime)) {
      expect(Tok::LParen, "expected '(' after 'prime'");
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "expected ')'");
      return BExpr::prime_of(std::move(e));
    }
    if (at(Tok::LParen)) {
      // '(' is ambiguous between a parenthesised test and a parenthesised
      // arithmetic operand of a comparison; try the test and backtrack.
      std::size_t save = pos_;
      take();
      try {
        BExprPtr b = parse_bexpr();
        expect(Tok::RParen, "expected ')'");
        if (!at_comparison_op()) return b;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return parse_comparison();
  }

  bool at_comparison_op() const {
    switch (peek().kind) {
      case Tok::Lt:
      case Tok::Le:
      case Tok::Eq:
      case Tok::Gt:
      case Tok::Ge:
      case Tok::Plus:
      case Tok::Minus:
      case Tok::Star:
      case Tok::KwMod:
        return true;
      default:
        return false;
    }
  }

  BExprPtr parse_comparison() {
    ExprPtr lhs = parse_expr();
    BExpr::CmpOp op;
    if (accept(Tok::Lt)) op = BExpr::CmpOp::Lt;
    else if (accept(Tok::Le)) op = BExpr::CmpOp::Le;
    else if (accept(Tok::Eq)) op = BExpr::CmpOp::Eq;
    else if (accept(Tok::Gt)) op = BExpr::CmpOp::Gt;
    else if (accept(Tok::Ge)) op = BExpr::CmpOp::Ge;
    else fail("expected a comparison operator");
    return BExpr::compare(op, std::move(lhs), parse_expr());
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_program_raw(std::string_view text) {
  return Parser(text).parse();
}

Program parse_program(std::string_view text) {
  Program p = parse_program_raw(text);
  p.body = assign_labels(p.body);
  return p;
}

}  // namespace pdfa
