#pragma once

// Polynomial text grammar (whitespace, including newlines, is ignored):
//
//   expr    := term { ('+' | '-') term }
//   term    := factor { '*' factor }
//   factor  := ('+' | '-') factor | power
//   power   := atom [ '^' integer ]
//   atom    := number | identifier | '(' expr ')'
//   number  := integer [ '/' integer ]
//   identifier := [A-Za-z_][A-Za-z0-9_]*
//
// `a/b` is only a rational literal, never division. Printing with
// Polynomial::to_string yields text this grammar reads back unchanged.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/polynomial.hpp"

namespace dcx {

namespace detail {

struct Token {
  enum Kind { kNumber, kIdent, kPlus, kMinus, kStar, kCaret, kSlash, kLParen, kRParen, kEnd } kind;
  std::string text;
  int line;
  int column;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Token::kEnd, {}, line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::kNumber;
      t.text = std::string(s.substr(i, j - i));
      out.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::kIdent;
      t.text = std::string(s.substr(i, j - i));
      out.push_back(t);
      advance(j - i);
      continue;
    }
    switch (c) {
      case '+': t.kind = Token::kPlus; break;
      case '-': t.kind = Token::kMinus; break;
      case '*': t.kind = Token::kStar; break;
      case '^': t.kind = Token::kCaret; break;
      case '/': t.kind = Token::kSlash; break;
      case '(': t.kind = Token::kLParen; break;
      case ')': t.kind = Token::kRParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = std::string(1, c);
    out.push_back(t);
    advance(1);
  }
  out.push_back({Token::kEnd, {}, line, col});
  return out;
}

template <Field F>
class Parser {
 public:
  Parser(std::vector<Token> toks, VarSetPtr vars, F field)
      : toks_(std::move(toks)), vars_(std::move(vars)), field_(std::move(field)) {}

  Polynomial<F> parse() {
    Polynomial<F> p = expr();
    if (peek().kind != Token::kEnd) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }

  Polynomial<F> expr() {
    Polynomial<F> acc = term();
    while (peek().kind == Token::kPlus || peek().kind == Token::kMinus) {
      bool minus = next().kind == Token::kMinus;
      Polynomial<F> t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  Polynomial<F> term() {
    Polynomial<F> acc = factor();
    while (peek().kind == Token::kStar) {
      next();
      acc = acc * factor();
    }
    return acc;
  }

  Polynomial<F> factor() {
    if (peek().kind == Token::kMinus) {
      next();
      return -factor();
    }
    if (peek().kind == Token::kPlus) {
      next();
      return factor();
    }
    return power();
  }

  Polynomial<F> power() {
    Polynomial<F> base = atom();
    if (peek().kind == Token::kCaret) {
      next();
      if (peek().kind != Token::kNumber) fail("expected integer exponent");
      const Token& t = next();
      if (t.text.size() > 3 || std::stoul(t.text) > Monomial::kMaxExponent)
        throw ParseError("exponent too large", t.line, t.column);
      return base.pow(static_cast<unsigned>(std::stoul(t.text)));
    }
    return base;
  }

  Polynomial<F> atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::kNumber: {
        next();
        mpz_class num(t.text), den(1);
        if (peek().kind == Token::kSlash) {
          next();
          if (peek().kind != Token::kNumber) fail("expected denominator");
          const Token& d = next();
          den = mpz_class(d.text);
          if (den == 0) throw ParseError("zero denominator", d.line, d.column);
        }
        try {
          return Polynomial<F>::constant(vars_, field_, field_.from_rational(num, den));
        } catch (const ArgumentError& e) {
          throw ParseError(e.what(), t.line, t.column);
        }
      }
      case Token::kIdent: {
        next();
        long i = vars_->find(t.text);
        if (i < 0) throw ParseError("unknown variable '" + t.text + "'", t.line, t.column);
        return Polynomial<F>::variable(vars_, field_, static_cast<std::size_t>(i));
      }
      case Token::kLParen: {
        next();
        Polynomial<F> inner = expr();
        if (peek().kind != Token::kRParen) fail("expected ')'");
        next();
        return inner;
      }
      case Token::kEnd:
        fail("unexpected end of input");
      default:
        fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  VarSetPtr vars_;
  F field_;
};

}  // namespace detail

/// Parses `text` over an existing variable set.
template <Field F>
Polynomial<F> parse_polynomial(std::string_view text, const VarSetPtr& vars, const F& field) {
  return detail::Parser<F>(detail::tokenize(text), vars, field).parse();
}

/// Identifiers of `text` in order of first appearance.
inline std::vector<std::string> collect_variables(std::string_view text) {
  std::vector<std::string> names;
  for (const auto& t : detail::tokenize(text)) {
    if (t.kind == detail::Token::kIdent &&
        std::find(names.begin(), names.end(), t.text) == names.end())
      names.push_back(t.text);
  }
  return names;
}

/// Parses `text`, creating the variable set from identifiers in order of
/// first appearance.
template <Field F>
Polynomial<F> parse_polynomial(std::string_view text, const F& field) {
  return parse_polynomial(text, make_varset(collect_variables(text)), field);
}

}  // namespace dcx
