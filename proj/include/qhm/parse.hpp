#pragma once

// Expression grammar for exact inputs:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := rational | 'sqrt' '(' expr ')' | 'root' '(' intpoly ';' rational ',' rational ')'
//           | '(' expr ')' | '-' factor

#include <qhm/algebraic.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qhm {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  AlgebraicReal parse() {
    AlgebraicReal v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax error at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool accept_word(std::string_view w) {
    skip();
    if (text_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
    pos_ = end;
    return true;
  }

  bool at_digit() {
    skip();
    return pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
  }

  Rational number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (start == pos_) fail("expected a number");
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const std::invalid_argument&) {
      fail("malformed number");
    }
  }

  /// Signed literal "p", "p/q" or decimal, used for interval endpoints.
  Rational signed_rational() {
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    Rational v = number();
    if (accept('/')) {
      Rational d = number();
      if (d == 0) throw std::domain_error("division by zero");
      v /= d;
    }
    return negative ? Rational(-v) : v;
  }

  AlgebraicReal expr() {
    AlgebraicReal v = term();
    while (true) {
      if (accept('+')) {
        v = v + term();
      } else if (accept('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  AlgebraicReal term() {
    AlgebraicReal v = factor();
    while (true) {
      if (accept('*')) {
        v = v * factor();
      } else if (accept('/')) {
        AlgebraicReal d = factor();
        if (d.is_zero()) throw std::domain_error("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }

  AlgebraicReal factor() {
    if (accept('-')) return -factor();
    if (accept('(')) {
      AlgebraicReal v = expr();
      expect(')');
      return v;
    }
    if (accept_word("sqrt")) {
      expect('(');
      AlgebraicReal v = expr();
      expect(')');
      return qhm::sqrt(v);
    }
    if (accept_word("root")) {
      expect('(');
      IntPoly p = polynomial();
      expect(';');
      Rational lo = signed_rational();
      expect(',');
      Rational hi = signed_rational();
      expect(')');
      return AlgebraicReal::from_root(p, lo, hi);
    }
    if (at_digit()) return AlgebraicReal(number());
    if (pos_ >= text_.size()) fail("unexpected end of input");
    fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  // intpoly := ['-'] monomial (('+'|'-') monomial)*, monomial := [int ['*']] ['x' ['^' int]]
  IntPoly polynomial() {
    IntPoly acc;
    bool first = true;
    while (true) {
      Integer s = 1;
      if (accept('-')) {
        s = -1;
      } else if (!accept('+') && !first) {
        return acc;
      }
      first = false;
      acc += monomial() * s;
    }
  }

  IntPoly monomial() {
    Integer coeff = 1;
    bool have_coeff = false;
    if (at_digit()) {
      Rational c = number();
      if (c.get_den() != 1) fail("polynomial coefficients must be integers");
      coeff = c.get_num();
      have_coeff = true;
      accept('*');
    }
    if (accept('x')) {
      std::size_t exp = 1;
      if (accept('^')) {
        Rational e = number();
        if (e.get_den() != 1 || e > 4096) fail("bad exponent");
        exp = e.get_num().get_ui();
      }
      return IntPoly::monomial(coeff, exp);
    }
    if (!have_coeff) fail("expected a polynomial term");
    return IntPoly::constant(coeff);
  }
};

}  // namespace detail

/// Parses an exact real expression; throws ParseError, std::domain_error
/// (division by zero, negative sqrt) or std::invalid_argument (bad root()).
inline AlgebraicReal parse_algebraic(std::string_view text) { return detail::ExprParser(text).parse(); }

}  // namespace qhm
