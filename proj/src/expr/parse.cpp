#include "expr/ast.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace spc {
namespace {

struct Parser {
  const std::string& src;
  int n;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ExprError("parse error at position " + std::to_string(at) + ": " +
                    msg);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'", pos);
  }

  bool keyword(const char* kw) {
    skip_ws();
    std::size_t len = std::strlen(kw);
    if (src.compare(pos, len, kw) == 0) {
      pos += len;
      return true;
    }
    return false;
  }

  int parse_uint() {
    skip_ws();
    std::size_t at = pos;
    if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
      fail("expected integer", at);
    long v = 0;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      v = v * 10 + (src[pos] - '0');
      if (v > 1000000) fail("integer too large", at);
      ++pos;
    }
    return static_cast<int>(v);
  }

  double parse_number() {
    skip_ws();
    std::size_t at = pos;
    const char* begin = src.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected number", at);
    pos += static_cast<std::size_t>(end - begin);
    return v;
  }

  ExprPtr coordinate(int j, bool is_y, std::size_t at) {
    if (j < 1 || j > n)
      fail("coordinate index " + std::to_string(j) + " out of range for n=" +
               std::to_string(n),
           at);
    auto e = std::const_pointer_cast<Expr>(Expr::variable(j, is_y, n));
    e->srcpos = static_cast<int>(at);
    return e;
  }

  ExprPtr atom() {
    skip_ws();
    std::size_t at = pos;
    char c = peek();
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        (c == '-' && pos + 1 < src.size() &&
         (std::isdigit(static_cast<unsigned char>(src[pos + 1])) ||
          src[pos + 1] == '.'))) {
      auto e = std::const_pointer_cast<Expr>(Expr::constant(parse_number()));
      e->srcpos = static_cast<int>(at);
      return e;
    }
    if (c == 'x' || c == 'y') {
      ++pos;
      return coordinate(parse_uint(), c == 'y', at);
    }
    if (keyword("re(z")) {
      int j = parse_uint();
      expect(')');
      return coordinate(j, false, at);
    }
    if (keyword("im(z")) {
      int j = parse_uint();
      expect(')');
      return coordinate(j, true, at);
    }
    if (keyword("abs2(z")) {
      int j = parse_uint();
      expect(')');
      ExprPtr xx = Expr::pow(coordinate(j, false, at), 2);
      ExprPtr yy = Expr::pow(coordinate(j, true, at), 2);
      auto e = std::const_pointer_cast<Expr>(
          Expr::binary(Expr::Kind::Add, xx, yy));
      e->srcpos = static_cast<int>(at);
      return e;
    }
    if (keyword("bump(")) {
      ExprPtr child = expr();
      expect(',');
      std::size_t dat = pos;
      double delta = parse_number();
      if (!(delta > 0.0)) fail("bump delta must be > 0", dat);
      expect(')');
      auto e = std::const_pointer_cast<Expr>(Expr::bump(child, delta));
      e->srcpos = static_cast<int>(at);
      return e;
    }
    fail("expected number, coordinate, bump(, or (", at);
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (eat('^')) {
      std::size_t at = pos;
      int k = parse_uint();
      if (pos < src.size() && src[pos] == '.') fail("non-integer exponent", at);
      if (k < 1) fail("exponent must be >= 1", at);
      return Expr::pow(base, k);
    }
    return base;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      std::size_t at = pos;
      if (eat('*')) {
        auto node = std::const_pointer_cast<Expr>(
            Expr::binary(Expr::Kind::Mul, e, factor()));
        node->srcpos = static_cast<int>(at);
        e = node;
      } else if (eat('/')) {
        auto node = std::const_pointer_cast<Expr>(
            Expr::binary(Expr::Kind::Div, e, factor()));
        node->srcpos = static_cast<int>(at);
        e = node;
      } else {
        return e;
      }
    }
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      std::size_t at = pos;
      if (eat('+')) {
        auto node = std::const_pointer_cast<Expr>(
            Expr::binary(Expr::Kind::Add, e, term()));
        node->srcpos = static_cast<int>(at);
        e = node;
      } else if (eat('-')) {
        auto node = std::const_pointer_cast<Expr>(
            Expr::binary(Expr::Kind::Sub, e, term()));
        node->srcpos = static_cast<int>(at);
        e = node;
      } else {
        return e;
      }
    }
  }
};

void print_rec(const Expr& e, std::string& out) {
  char buf[64];
  switch (e.kind) {
    case Expr::Kind::Constant:
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      out += buf;
      return;
    case Expr::Kind::Var:
      out += e.is_y ? 'y' : 'x';
      out += std::to_string(e.j);
      return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
      char op = e.kind == Expr::Kind::Add   ? '+'
                : e.kind == Expr::Kind::Sub ? '-'
                : e.kind == Expr::Kind::Mul ? '*'
                                            : '/';
      out += '(';
      print_rec(*e.a, out);
      out += op;
      print_rec(*e.b, out);
      out += ')';
      return;
    }
    case Expr::Kind::Pow:
      out += '(';
      print_rec(*e.a, out);
      out += '^';
      out += std::to_string(e.exponent);
      out += ')';
      return;
    case Expr::Kind::Bump:
      out += "bump(";
      print_rec(*e.a, out);
      out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", e.delta);
      out += buf;
      out += ')';
      return;
  }
}

}  // namespace

ExprPtr parse(const std::string& source, int n) {
  if (n < 1) throw ExprError("dimension must be >= 1");
  Parser p{source, n};
  ExprPtr e = p.expr();
  p.skip_ws();
  if (p.pos != source.size()) p.fail("unexpected trailing input", p.pos);
  return e;
}

std::string pretty_print(const Expr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

}  // namespace spc
