#pragma once

// Surface language of HEX programs.
//
//   fact.                 p(c).
//   rule                  h1 v h2 :- b1, not b2, &g[in1,in2](O), X != Y.
//   constraint            :- body.
//
// Identifiers and numbers are constants, capitalised names are variables,
// "|" may replace "v", and "%" starts a line comment.

#include <cctype>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hexcdnl/source.hpp"

namespace hexcdnl {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

namespace ast {

struct Term {
  std::string text;
  bool variable = false;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
};

/// Input kinds are taken from the registered source signature.
struct ExternalAtom {
  std::string source;
  std::vector<Term> inputs;
  std::vector<InputKind> kinds;
  std::vector<Term> outputs;
};

struct Builtin {
  Term lhs;
  bool equal = false;  // "=" when true, "!=" otherwise
  Term rhs;
};

struct BodyElement {
  std::variant<Atom, ExternalAtom, Builtin> expr;
  bool negated = false;
};

struct Location {
  std::size_t line = 1, column = 1;
};

struct Rule {
  std::vector<Atom> head;
  std::vector<BodyElement> body;
  Location location;

  bool is_constraint() const { return head.empty(); }
  bool is_fact() const { return head.size() == 1 && body.empty(); }
};

struct Program {
  std::vector<Rule> statements;

  std::size_t fact_count() const {
    return static_cast<std::size_t>(
        std::count_if(statements.begin(), statements.end(), [](const Rule& r) { return r.is_fact(); }));
  }
};

}  // namespace ast

namespace detail {

class Lexer {
 public:
  enum class Kind { Ident, Variable, External, LParen, RParen, LBracket, RBracket, Comma, Dot,
                    If, Bar, Neq, Eq, End };
  struct Token {
    Kind kind;
    std::string text;
    std::size_t line, column;
  };

  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t{Kind::End, "", line_, column_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    auto ident_char = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    };
    if (std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Kind::Ident;
      while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += advance();
      return t;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Kind::Variable;
      while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += advance();
      return t;
    }
    if (c == '&') {
      advance();
      t.kind = Kind::External;
      while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += advance();
      if (t.text.empty()) throw ParseError(t.line, t.column, "expected source name after '&'");
      return t;
    }
    advance();
    switch (c) {
      case '(': t.kind = Kind::LParen; break;
      case ')': t.kind = Kind::RParen; break;
      case '[': t.kind = Kind::LBracket; break;
      case ']': t.kind = Kind::RBracket; break;
      case ',': t.kind = Kind::Comma; break;
      case '.': t.kind = Kind::Dot; break;
      case '|': t.kind = Kind::Bar; break;
      case '=': t.kind = Kind::Eq; break;
      case ':':
        if (pos_ < text_.size() && text_[pos_] == '-') {
          advance();
          t.kind = Kind::If;
          break;
        }
        throw ParseError(t.line, t.column, "expected ':-'");
      case '!':
        if (pos_ < text_.size() && text_[pos_] == '=') {
          advance();
          t.kind = Kind::Neq;
          break;
        }
        throw ParseError(t.line, t.column, "expected '!='");
      default:
        throw ParseError(t.line, t.column, std::string("unexpected character '") + c + "'");
    }
    return t;
  }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, column_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, const SourceRegistry& registry) : lex_(text), registry_(registry) {
    shift();
  }

  ast::Program parse() {
    ast::Program p;
    while (tok_.kind != Lexer::Kind::End) p.statements.push_back(statement());
    return p;
  }

 private:
  using Kind = Lexer::Kind;

  void shift() {
    tok_ = peeked_ ? *std::exchange(peeked_, std::nullopt) : lex_.next();
  }
  const Lexer::Token& peek() {
    if (!peeked_) peeked_ = lex_.next();
    return *peeked_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.line, tok_.column, msg);
  }

  void expect(Kind k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what);
    shift();
  }

  ast::Rule statement() {
    ast::Rule r;
    r.location = {tok_.line, tok_.column};
    if (tok_.kind != Kind::If) {
      r.head.push_back(atom());
      // "v" separates head atoms; it is an ordinary identifier elsewhere.
      while (tok_.kind == Kind::Bar || (tok_.kind == Kind::Ident && tok_.text == "v" &&
                                        peek().kind == Kind::Ident)) {
        shift();
        r.head.push_back(atom());
      }
    }
    if (tok_.kind == Kind::If) {
      shift();
      if (tok_.kind != Kind::Dot) {
        r.body.push_back(body_element());
        while (tok_.kind == Kind::Comma) {
          shift();
          r.body.push_back(body_element());
        }
      }
    }
    if (r.head.empty() && r.body.empty()) fail("empty constraint");
    expect(Kind::Dot, "'.'");
    return r;
  }

  ast::Term term() {
    if (tok_.kind != Kind::Ident && tok_.kind != Kind::Variable) fail("expected a term");
    ast::Term t{tok_.text, tok_.kind == Kind::Variable};
    shift();
    return t;
  }

  std::vector<ast::Term> term_list(Kind close, const char* what) {
    std::vector<ast::Term> out;
    if (tok_.kind == close) {
      shift();
      return out;
    }
    out.push_back(term());
    while (tok_.kind == Kind::Comma) {
      shift();
      out.push_back(term());
    }
    expect(close, what);
    return out;
  }

  ast::Atom atom() {
    if (tok_.kind != Kind::Ident) fail("expected an atom");
    if (std::isdigit(static_cast<unsigned char>(tok_.text[0]))) fail("predicate names must start with a letter");
    ast::Atom a{tok_.text, {}};
    shift();
    if (tok_.kind == Kind::LParen) {
      shift();
      a.args = term_list(Kind::RParen, "')'");
    }
    return a;
  }

  ast::BodyElement body_element() {
    ast::BodyElement e;
    if (tok_.kind == Kind::Ident && tok_.text == "not" &&
        (peek().kind == Kind::Ident || peek().kind == Kind::External)) {
      e.negated = true;
      shift();
    }
    if (tok_.kind == Kind::External) {
      e.expr = external();
      return e;
    }
    if (!e.negated && (tok_.kind == Kind::Variable ||
                       (tok_.kind == Kind::Ident && (peek().kind == Kind::Neq || peek().kind == Kind::Eq)))) {
      ast::Builtin b;
      b.lhs = term();
      if (tok_.kind != Kind::Neq && tok_.kind != Kind::Eq) fail("expected '!=' or '='");
      b.equal = tok_.kind == Kind::Eq;
      shift();
      b.rhs = term();
      e.expr = std::move(b);
      return e;
    }
    e.expr = atom();
    return e;
  }

  ast::ExternalAtom external() {
    auto line = tok_.line, column = tok_.column;
    ast::ExternalAtom x;
    x.source = tok_.text;
    const auto* src = registry_.find(x.source);
    if (!src) throw ParseError(line, column, "unknown external source '&" + x.source + "'");
    shift();
    expect(Kind::LBracket, "'['");
    x.inputs = term_list(Kind::RBracket, "']'");
    if (tok_.kind == Kind::LParen) {
      shift();
      x.outputs = term_list(Kind::RParen, "')'");
    }
    if (x.inputs.size() != src->inputs.size())
      throw ParseError(line, column,
                       "&" + x.source + " expects " + std::to_string(src->inputs.size()) +
                           " inputs, got " + std::to_string(x.inputs.size()));
    if (x.outputs.size() != src->output_arity)
      throw ParseError(line, column,
                       "&" + x.source + " expects " + std::to_string(src->output_arity) +
                           " outputs, got " + std::to_string(x.outputs.size()));
    x.kinds = src->inputs;
    for (std::size_t i = 0; i < x.inputs.size(); ++i)
      if (x.kinds[i] == InputKind::Predicate && x.inputs[i].variable)
        throw ParseError(line, column, "predicate input of &" + x.source + " cannot be a variable");
    return x;
  }

  Lexer lex_;
  const SourceRegistry& registry_;
  Lexer::Token tok_{};
  std::optional<Lexer::Token> peeked_;
};

}  // namespace detail

inline ast::Program parse(std::string_view text, const SourceRegistry& registry) {
  return detail::Parser(text, registry).parse();
}

}  // namespace hexcdnl
