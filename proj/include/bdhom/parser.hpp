// Recursive-descent parser for the ASCII formula grammar.
//
//   atom     := identifier | T | F | pi | '(' formula ')'
//   unary    := ('!' | <B> | [B] | <D> | [D] | <A> | [A] | <G> | [G])* atom
//   conj     := unary ('&' unary)*
//   disj     := conj ('|' conj)*
//   impl     := disj ['->' impl]            (right associative)
//   formula  := impl ['<->' formula]        (right associative)
//
// <A>, [A], <G>, [G] are rejected outside ABD mode.

#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "bdhom/formula.hpp"

namespace bdhom {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) +
                           ", column " + std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

namespace detail {

class FormulaParser {
 public:
  FormulaParser(const std::string& text, Dialect dialect)
      : text_(text), dialect_(dialect) {}

  Formula parse() {
    skip_ws();
    Formula f = parse_iff();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, static_cast<int>(pos_ - line_start_ + 1));
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        line_start_ = pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {  // line comment
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool consume(const std::string& tok) {
    skip_ws();
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      // Don't let an identifier swallow a keyword prefix.
      if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        size_t end = pos_ + tok.size();
        if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                   text_[end] == '_'))
          return false;
      }
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  bool peek(const std::string& tok) {
    skip_ws();
    return text_.compare(pos_, tok.size(), tok) == 0;
  }

  void require_abd(const std::string& op) {
    if (dialect_ != Dialect::ABD) fail("'" + op + "' requires ABD mode");
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (consume("<->")) return iff(lhs, parse_iff());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (consume("->")) return implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '|') {
        ++pos_;
        f = or_(f, parse_and());
      } else {
        break;
      }
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (consume("&")) f = and_(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    skip_ws();
    if (consume("!")) return not_(parse_unary());
    if (peek("<B>") || peek("<D>") || peek("<A>") || peek("<G>")) {
      char m = text_[pos_ + 1];
      pos_ += 3;
      Formula c = parse_unary();
      switch (m) {
        case 'B': return diamond_b(c);
        case 'D': return diamond_d(c);
        case 'A': require_abd("<A>"); return diamond_a(c);
        default:  require_abd("<G>"); return diamond_g(c);
      }
    }
    if (peek("[B]") || peek("[D]") || peek("[A]") || peek("[G]")) {
      char m = text_[pos_ + 1];
      pos_ += 3;
      Formula c = parse_unary();
      switch (m) {
        case 'B': return box_b(c);
        case 'D': return box_d(c);
        case 'A': require_abd("[A]"); return box_a(c);
        default:  require_abd("[G]"); return box_g(c);
      }
    }
    return parse_atom();
  }

  Formula parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (consume("(")) {
      Formula f = parse_iff();
      if (!consume(")")) fail("expected ')'");
      return f;
    }
    if (consume("T")) return top();
    if (consume("F")) return bottom();
    if (consume("pi")) return pi();
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      return prop(text_.substr(start, pos_ - start));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  Dialect dialect_;
  size_t pos_ = 0;
  size_t line_start_ = 0;
  int line_ = 1;
};

}  // namespace detail

inline Formula parse_formula(const std::string& text,
                             Dialect dialect = Dialect::ABD) {
  return detail::FormulaParser(text, dialect).parse();
}

}  // namespace bdhom
