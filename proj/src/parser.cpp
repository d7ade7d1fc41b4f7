#include <cctype>
#include <set>

#include "lp3/program.hpp"

namespace lp3 {

namespace {

enum class Tok { Var, Atom, Int, Punct, Symbol, End, Dot, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::int64_t value = 0;
  SourcePos pos;
  bool space_before = false;
  bool quoted = false;
};

constexpr std::string_view kSymbolChars = "+-*/\\^<>=~:?@#&$";

bool is_layout_or_end(std::string_view s, std::size_t i) {
  return i >= s.size() || std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '%';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      bool space = skip_layout();
      Token t = next();
      t.space_before = space;
      out.push_back(t);
      if (t.kind == Tok::Eof) break;
    }
    return out;
  }

 private:
  SourcePos here() const { return SourcePos{line_, col_}; }

  char peek(std::size_t k = 0) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  bool skip_layout() {
    bool skipped = false;
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        skipped = true;
      } else if (c == '%') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
        skipped = true;
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start = here();
        advance();
        advance();
        while (i_ < text_.size() && !(text_[i_] == '*' && peek(1) == '/')) advance();
        if (i_ >= text_.size()) throw ParseError(start, "unterminated block comment");
        advance();
        advance();
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  Token next() {
    Token t;
    t.pos = here();
    if (i_ >= text_.size()) {
      t.kind = Tok::Eof;
      return t;
    }
    char c = text_[i_];
    auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc) || c == '_') {
      std::string name;
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) {
        name += text_[i_];
        advance();
      }
      t.kind = (std::isupper(uc) || c == '_') ? Tok::Var : Tok::Atom;
      t.text = std::move(name);
      return t;
    }
    if (std::isdigit(uc)) {
      std::string digits;
      while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        digits += text_[i_];
        advance();
      }
      t.kind = Tok::Int;
      t.text = digits;
      try {
        t.value = std::stoll(digits);
      } catch (...) {
        throw ParseError(t.pos, "integer out of range: " + digits);
      }
      return t;
    }
    if (c == '\'') {
      advance();
      std::string name;
      while (true) {
        if (i_ >= text_.size()) throw ParseError(t.pos, "unterminated quoted atom");
        if (text_[i_] == '\'') {
          if (peek(1) == '\'') {
            name += '\'';
            advance();
            advance();
            continue;
          }
          advance();
          break;
        }
        name += text_[i_];
        advance();
      }
      t.kind = Tok::Atom;
      t.text = std::move(name);
      t.quoted = true;
      return t;
    }
    if (c == '.') {
      bool end = is_layout_or_end(text_, i_ + 1);
      advance();
      t.kind = end ? Tok::End : Tok::Dot;
      t.text = ".";
      return t;
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == '|' || c == ',' || c == '!' || c == ';' ||
        c == '{' || c == '}') {
      advance();
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      return t;
    }
    if (kSymbolChars.find(c) != std::string_view::npos) {
      std::string sym;
      while (i_ < text_.size() && kSymbolChars.find(text_[i_]) != std::string_view::npos) {
        sym += text_[i_];
        advance();
      }
      t.kind = Tok::Symbol;
      t.text = std::move(sym);
      return t;
    }
    throw ParseError(t.pos, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string>& impure_names() {
  static const std::set<std::string> names = {
      "!",        "var",    "nonvar",  "assert", "asserta", "assertz", "retract", "retractall",
      "call",     "findall", "bagof",  "setof",  "copy_term", "functor", "arg",    "atom",
      "atomic",   "number", "integer", "write",  "read",    "nl",      "halt",    "fail",
      "true"};
  return names;
}

const std::set<std::string>& unsupported_operators() {
  static const std::set<std::string> ops = {"is", "<", ">=", "==", "\\==", "\\=", "=:=", "=\\=", "->", "=.."};
  return ops;
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t* anon_counter)
      : tokens_(Lexer(text).run()), anon_(anon_counter) {}

  ClausalProgram program() {
    ClausalProgram p;
    while (peek().kind != Tok::Eof) {
      Clause c = clause(p.warnings);
      p.clauses.push_back(std::move(c));
    }
    return p;
  }

  std::vector<Literal> goal(std::vector<std::string>& warnings) {
    std::vector<Literal> lits = body(warnings);
    if (peek().kind == Tok::End) take();
    if (peek().kind != Tok::Eof) fail(peek(), "unexpected '" + peek().text + "' after goal");
    return lits;
  }

  Term single_term() {
    Term t = term();
    if (peek().kind == Tok::End) take();
    if (peek().kind != Tok::Eof) fail(peek(), "unexpected '" + peek().text + "' after term");
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    std::size_t j = std::min(pos_ + k, tokens_.size() - 1);
    return tokens_[j];
  }
  Token take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.pos, msg); }

  bool is_punct(const Token& t, char c) const { return t.kind == Tok::Punct && t.text.size() == 1 && t.text[0] == c; }
  bool is_symbol(const Token& t, std::string_view s) const { return t.kind == Tok::Symbol && t.text == s; }

  void expect_punct(char c) {
    if (!is_punct(peek(), c)) fail(peek(), std::string("expected '") + c + "'");
    take();
  }

  void check_punct_usage(const Token& t) const {
    if (is_punct(t, '!')) fail(t, "cut is not pure Prolog");
    if (is_punct(t, ';')) fail(t, "disjunction ';' is not supported; use separate clauses");
    if (is_punct(t, '{') || is_punct(t, '}')) fail(t, "curly terms are not supported");
  }

  Clause clause(std::vector<std::string>& warnings) {
    const Token& start = peek();
    check_punct_usage(start);
    Term head = term();
    if (head.is_var()) fail(start, "clause head must be an atom, not a variable");
    if (head.is_int()) fail(start, "clause head must be an atom, not an integer");
    if (head.is_cons() || head.is_nil()) fail(start, "clause head must be an atom, not a list");
    if (is_builtin_name(head.name(), head.arity())) fail(start, "cannot redefine builtin " + head.name() + "/2");
    if (head.name() == "not" || impure_names().count(head.name()))
      fail(start, "cannot define reserved predicate " + head.name());
    Clause c;
    c.head = head;
    c.pos = start.pos;
    if (is_symbol(peek(), ":-")) {
      take();
      c.body = body(warnings);
    }
    if (peek().kind != Tok::End) {
      check_punct_usage(peek());
      fail(peek(), "expected '.' at end of clause, got '" + peek().text + "'");
    }
    take();
    return c;
  }

  std::vector<Literal> body(std::vector<std::string>& warnings) {
    std::vector<Literal> lits;
    lits.push_back(literal(warnings));
    while (is_punct(peek(), ',')) {
      take();
      lits.push_back(literal(warnings));
    }
    return lits;
  }

  Literal literal(std::vector<std::string>& warnings) {
    const Token& start = peek();
    check_punct_usage(start);
    bool negated = false;
    if ((start.kind == Tok::Atom && start.text == "not" && !start.quoted) || is_symbol(start, "\\+")) {
      // `not` followed by a term; `not(...)` with adjacent parenthesis is the same.
      const Token& after = peek(1);
      if (after.kind != Tok::Punct || is_punct(after, '(') || is_punct(after, '[')) {
        take();
        negated = true;
      }
    }
    SourcePos pos = start.pos;
    bool parenthesised = false;
    if (negated && is_punct(peek(), '(')) {
      take();
      parenthesised = true;
    }
    const Token& lit_start = peek();
    Literal lit = core_literal(lit_start);
    if (parenthesised) expect_punct(')');
    lit.pos = pos;
    if (negated) {
      if (lit.kind == LiteralKind::Equality) fail(start, "negation applies only to user-defined atoms, not '='");
      if (lit.negated) fail(start, "double negation is not supported");
      lit.negated = true;
      if (lit.kind == LiteralKind::Builtin)
        warnings.push_back(pos.to_string() + ": negated builtin comparison '" + lit.atom.to_string() + "'");
    }
    return lit;
  }

  Literal core_literal(const Token& start) {
    Term t = term();
    const Token& op = peek();
    if (op.kind == Tok::Symbol && (op.text == "=" || op.text == "=<" || op.text == ">")) {
      std::string name = op.text;
      take();
      Term rhs = term();
      if (name == "=") return Literal::equality(t, rhs);
      return Literal::builtin(name, t, rhs);
    }
    if (op.kind == Tok::Symbol && unsupported_operators().count(op.text)) fail(op, "unsupported builtin '" + op.text + "'");
    if (op.kind == Tok::Atom && op.text == "is") fail(op, "unsupported builtin 'is'");
    if (t.is_var()) fail(start, "variable used as a goal is not pure Prolog");
    if (t.is_int() || t.is_cons() || t.is_nil()) fail(start, "goal must be an atom");
    if (impure_names().count(t.name())) fail(start, "impure builtin '" + t.name() + "' is not allowed");
    if (t.name() == "not") fail(start, "malformed negation");
    return Literal::positive(t);
  }

  // term := primary { '.' primary }, right associative.
  Term term() {
    Term head = primary();
    if (peek().kind == Tok::Dot) {
      take();
      Term tail = term();
      return Term::cons(head, tail);
    }
    return head;
  }

  Term primary() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Var: {
        take();
        if (t.text == "_") return Term::var("_" + std::to_string(++*anon_));
        return Term::var(t.text);
      }
      case Tok::Int:
        take();
        return Term::integer(t.value);
      case Tok::Symbol:
        if (t.text == "-" && peek(1).kind == Tok::Int && !peek(1).space_before) {
          take();
          Token n = take();
          return Term::integer(-n.value);
        }
        fail(t, "unexpected operator '" + t.text + "'");
      case Tok::Atom: {
        take();
        if (is_punct(peek(), '(') && !peek().space_before) {
          take();
          std::vector<Term> args = arguments();
          expect_punct(')');
          return Term::compound(t.text, std::move(args));
        }
        return Term::constant(t.text);
      }
      case Tok::Punct:
        if (is_punct(t, '[')) {
          take();
          if (is_punct(peek(), ']')) {
            take();
            return Term::nil();
          }
          std::vector<Term> items = arguments();
          Term tail = Term::nil();
          if (is_punct(peek(), '|')) {
            take();
            tail = term();
          }
          expect_punct(']');
          return Term::list(items, tail);
        }
        if (is_punct(t, '(')) {
          take();
          Term inner = term();
          expect_punct(')');
          return inner;
        }
        check_punct_usage(t);
        fail(t, "unexpected '" + t.text + "'");
      case Tok::End:
      case Tok::Dot:
        fail(t, "unexpected '.'");
      case Tok::Eof:
        fail(t, "unexpected end of input");
    }
    fail(t, "unexpected token");
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    args.push_back(term());
    while (is_punct(peek(), ',')) {
      take();
      args.push_back(term());
    }
    return args;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t* anon_;
};

}  // namespace

ClausalProgram parse_program(std::string_view text) {
  std::size_t anon = 0;
  return Parser(text, &anon).program();
}

std::vector<Literal> parse_goal(std::string_view text) {
  std::size_t anon = 0;
  std::vector<std::string> warnings;
  return Parser(text, &anon).goal(warnings);
}

Term parse_term(std::string_view text) {
  std::size_t anon = 0;
  return Parser(text, &anon).single_term();
}

}  // namespace lp3
