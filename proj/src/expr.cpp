// Copyright 2026 the dirval authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dirval/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>

namespace dirval {

namespace {

bool is_const(const ExprPtr& e, double v) {
  return e->op == ExprOp::Const && e->value == v;
}

ExprPtr node(ExprOp op, double value, int index, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->value = value;
  e->index = index;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

}  // namespace

ExprPtr make_const(double v) { return node(ExprOp::Const, v, 0, nullptr, nullptr); }

ExprPtr make_var(char group, int index0) {
  if (group != 'x' && group != 'y') throw std::invalid_argument("variable group must be 'x' or 'y'");
  return node(group == 'x' ? ExprOp::VarX : ExprOp::VarY, 0.0, index0, nullptr, nullptr);
}

ExprPtr make_unary(ExprOp op, ExprPtr a) {
  if (a->op == ExprOp::Const) {
    switch (op) {
      case ExprOp::Neg: return make_const(-a->value);
      // Fold the safe transcendental constants; domain failures stay
      // symbolic so evaluate() can report the offending subtree.
      case ExprOp::Sin: return make_const(std::sin(a->value));
      case ExprOp::Cos: return make_const(std::cos(a->value));
      case ExprOp::Exp: return make_const(std::exp(a->value));
      case ExprOp::Log:
        if (a->value > 0.0) return make_const(std::log(a->value));
        break;
      case ExprOp::Sqrt:
        if (a->value >= 0.0) return make_const(std::sqrt(a->value));
        break;
      default: break;
    }
  }
  return node(op, 0.0, 0, std::move(a), nullptr);
}

ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b) {
  const bool ca = a->op == ExprOp::Const;
  const bool cb = b->op == ExprOp::Const;
  switch (op) {
    case ExprOp::Add:
      if (ca && cb) return make_const(a->value + b->value);
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case ExprOp::Sub:
      if (ca && cb) return make_const(a->value - b->value);
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return make_unary(ExprOp::Neg, std::move(b));
      break;
    case ExprOp::Mul:
      if (ca && cb) return make_const(a->value * b->value);
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case ExprOp::Div:
      if (ca && cb && b->value != 0.0) return make_const(a->value / b->value);
      if (is_const(b, 1.0)) return a;
      break;
    default:
      throw std::invalid_argument("make_binary expects Add/Sub/Mul/Div");
  }
  return node(op, 0.0, 0, std::move(a), std::move(b));
}

ExprPtr make_pow(ExprPtr base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("pow exponent must be a nonnegative integer");
  if (exponent == 0) return make_const(1.0);
  if (exponent == 1) return base;
  if (base->op == ExprOp::Const) return make_const(std::pow(base->value, exponent));
  return node(ExprOp::Pow, 0.0, exponent, std::move(base), nullptr);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
  enum class Tok { Number, Ident, Func, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

  explicit Lexer(const std::string& s) : text(s) { advance(); }

  const std::string& text;
  std::size_t pos = 0;        // start of current token
  std::size_t next = 0;       // scan cursor
  Tok tok = Tok::End;
  double number = 0.0;
  char group = 0;             // Ident: 'x' or 'y'
  long ident_index = 0;       // Ident: 1-based index as written
  std::string word;           // Func name

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos); }

  void advance() {
    while (next < text.size() && std::isspace(static_cast<unsigned char>(text[next]))) ++next;
    pos = next;
    if (next >= text.size()) { tok = Tok::End; return; }
    const char c = text[next];
    switch (c) {
      case '+': tok = Tok::Plus; ++next; return;
      case '-': tok = Tok::Minus; ++next; return;
      case '*': tok = Tok::Star; ++next; return;
      case '/': tok = Tok::Slash; ++next; return;
      case '^': tok = Tok::Caret; ++next; return;
      case '(': tok = Tok::LParen; ++next; return;
      case ')': tok = Tok::RParen; ++next; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = next;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      if (end < text.size() && text[end] == '.') {
        ++end;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      }
      if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
        std::size_t ex = end + 1;
        if (ex < text.size() && (text[ex] == '+' || text[ex] == '-')) ++ex;
        if (ex < text.size() && std::isdigit(static_cast<unsigned char>(text[ex]))) {
          while (ex < text.size() && std::isdigit(static_cast<unsigned char>(text[ex]))) ++ex;
          end = ex;
        }
      }
      number = std::strtod(text.substr(next, end - next).c_str(), nullptr);
      tok = Tok::Number;
      next = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = next;
      while (end < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[end])))) ++end;
      word = text.substr(next, end - next);
      if (word == "sin" || word == "cos" || word == "exp" || word == "log" || word == "sqrt") {
        tok = Tok::Func;
        next = end;
        return;
      }
      if ((word[0] == 'x' || word[0] == 'y') && word.size() > 1) {
        bool digits = true;
        for (std::size_t i = 1; i < word.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(word[i]))) { digits = false; break; }
        if (digits) {
          group = word[0];
          ident_index = std::strtol(word.c_str() + 1, nullptr, 10);
          tok = Tok::Ident;
          next = end;
          return;
        }
      }
      fail("unknown identifier '" + word + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

class Parser {
 public:
  Parser(const std::string& text, int n, int m) : lex(text), n(n), m(m) {}

  ExprPtr run() {
    ExprPtr e = expr();
    if (lex.tok != Lexer::Tok::End) lex.fail("trailing input after expression");
    return e;
  }

 private:
  Lexer lex;
  int n, m;

  ExprPtr expr() {
    ExprPtr e = term();
    while (lex.tok == Lexer::Tok::Plus || lex.tok == Lexer::Tok::Minus) {
      const ExprOp op = lex.tok == Lexer::Tok::Plus ? ExprOp::Add : ExprOp::Sub;
      lex.advance();
      e = node_binary(op, e, term());
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (lex.tok == Lexer::Tok::Star || lex.tok == Lexer::Tok::Slash) {
      const ExprOp op = lex.tok == Lexer::Tok::Star ? ExprOp::Mul : ExprOp::Div;
      lex.advance();
      e = node_binary(op, e, factor());
    }
    return e;
  }

  ExprPtr factor() {
    ExprPtr e = base();
    if (lex.tok == Lexer::Tok::Caret) {
      lex.advance();
      if (lex.tok != Lexer::Tok::Number) lex.fail("expected integer exponent after '^'");
      const double v = lex.number;
      const long k = std::lround(v);
      if (v != static_cast<double>(k) || k < 0) lex.fail("exponent must be a nonnegative integer");
      lex.advance();
      return node_pow(e, static_cast<int>(k));
    }
    return e;
  }

  ExprPtr base() {
    switch (lex.tok) {
      case Lexer::Tok::Number: {
        const double v = lex.number;
        lex.advance();
        return make_const(v);
      }
      case Lexer::Tok::Ident: {
        const char g = lex.group;
        const long idx = lex.ident_index;
        const long limit = g == 'x' ? n : m;
        if (idx < 1 || idx > limit)
          lex.fail(std::string(1, g) + std::to_string(idx) + " is out of range (have " +
                   std::to_string(limit) + ")");
        lex.advance();
        return make_var(g, static_cast<int>(idx - 1));
      }
      case Lexer::Tok::LParen: {
        lex.advance();
        ExprPtr e = expr();
        if (lex.tok != Lexer::Tok::RParen) lex.fail("expected ')'");
        lex.advance();
        return e;
      }
      case Lexer::Tok::Func: {
        const std::string name = lex.word;
        lex.advance();
        if (lex.tok != Lexer::Tok::LParen) lex.fail("expected '(' after " + name);
        lex.advance();
        ExprPtr arg = expr();
        if (lex.tok != Lexer::Tok::RParen) lex.fail("expected ')'");
        lex.advance();
        ExprOp op = ExprOp::Sin;
        if (name == "cos") op = ExprOp::Cos;
        else if (name == "exp") op = ExprOp::Exp;
        else if (name == "log") op = ExprOp::Log;
        else if (name == "sqrt") op = ExprOp::Sqrt;
        return node_unary(op, arg);
      }
      case Lexer::Tok::Minus: {
        lex.advance();
        ExprPtr e = base();
        // Fold "-literal" so negative constants print/reparse cleanly.
        if (e->op == ExprOp::Const) return make_const(-e->value);
        return node_unary(ExprOp::Neg, e);
      }
      default:
        lex.fail("expected a number, variable, function, '(' or '-'");
    }
  }

  // The parser records structure verbatim: no folding except the
  // unary-minus-on-literal case, so print/parse round-trips are exact.
  static ExprPtr node_unary(ExprOp op, ExprPtr a) { return node_raw(op, 0.0, 0, std::move(a), nullptr); }
  static ExprPtr node_binary(ExprOp op, ExprPtr a, ExprPtr b) { return node_raw(op, 0.0, 0, std::move(a), std::move(b)); }
  static ExprPtr node_pow(ExprPtr a, int k) { return node_raw(ExprOp::Pow, 0.0, k, std::move(a), nullptr); }
  static ExprPtr node_raw(ExprOp op, double value, int index, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->value = value;
    e->index = index;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
  }
};

}  // namespace

ExprPtr parse_expression(const std::string& text, int n, int m) {
  return Parser(text, n, m).run();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double evaluate(const ExprPtr& e, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  switch (e->op) {
    case ExprOp::Const: return e->value;
    case ExprOp::VarX:
      if (e->index >= x.size()) throw EvalError("parameter index out of range", print_expression(e));
      return x[e->index];
    case ExprOp::VarY:
      if (e->index >= y.size()) throw EvalError("decision index out of range", print_expression(e));
      return y[e->index];
    case ExprOp::Add: return evaluate(e->a, x, y) + evaluate(e->b, x, y);
    case ExprOp::Sub: return evaluate(e->a, x, y) - evaluate(e->b, x, y);
    case ExprOp::Mul: return evaluate(e->a, x, y) * evaluate(e->b, x, y);
    case ExprOp::Div: {
      const double den = evaluate(e->b, x, y);
      if (den == 0.0) throw EvalError("division by zero", print_expression(e));
      return evaluate(e->a, x, y) / den;
    }
    case ExprOp::Pow: {
      const double b = evaluate(e->a, x, y);
      double r = 1.0;
      for (int i = 0; i < e->index; ++i) r *= b;
      return r;
    }
    case ExprOp::Neg: return -evaluate(e->a, x, y);
    case ExprOp::Sin: return std::sin(evaluate(e->a, x, y));
    case ExprOp::Cos: return std::cos(evaluate(e->a, x, y));
    case ExprOp::Exp: return std::exp(evaluate(e->a, x, y));
    case ExprOp::Log: {
      const double v = evaluate(e->a, x, y);
      if (v <= 0.0) throw EvalError("log of nonpositive value", print_expression(e));
      return std::log(v);
    }
    case ExprOp::Sqrt: {
      const double v = evaluate(e->a, x, y);
      if (v < 0.0) throw EvalError("sqrt of negative value", print_expression(e));
      return std::sqrt(v);
    }
  }
  throw std::logic_error("unhandled expression node");
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

ExprPtr differentiate(const ExprPtr& e, char group, int index0) {
  const auto d = [&](const ExprPtr& s) { return differentiate(s, group, index0); };
  switch (e->op) {
    case ExprOp::Const: return make_const(0.0);
    case ExprOp::VarX:
      return make_const(group == 'x' && e->index == index0 ? 1.0 : 0.0);
    case ExprOp::VarY:
      return make_const(group == 'y' && e->index == index0 ? 1.0 : 0.0);
    case ExprOp::Add: return make_binary(ExprOp::Add, d(e->a), d(e->b));
    case ExprOp::Sub: return make_binary(ExprOp::Sub, d(e->a), d(e->b));
    case ExprOp::Mul:
      return make_binary(ExprOp::Add, make_binary(ExprOp::Mul, d(e->a), e->b),
                         make_binary(ExprOp::Mul, e->a, d(e->b)));
    case ExprOp::Div:
      // (a'b - ab') / b^2
      return make_binary(
          ExprOp::Div,
          make_binary(ExprOp::Sub, make_binary(ExprOp::Mul, d(e->a), e->b),
                      make_binary(ExprOp::Mul, e->a, d(e->b))),
          make_pow(e->b, 2));
    case ExprOp::Pow:
      return make_binary(ExprOp::Mul,
                         make_binary(ExprOp::Mul, make_const(e->index),
                                     make_pow(e->a, e->index - 1)),
                         d(e->a));
    case ExprOp::Neg: return make_unary(ExprOp::Neg, d(e->a));
    case ExprOp::Sin: return make_binary(ExprOp::Mul, make_unary(ExprOp::Cos, e->a), d(e->a));
    case ExprOp::Cos:
      return make_binary(ExprOp::Mul, make_unary(ExprOp::Neg, make_unary(ExprOp::Sin, e->a)),
                         d(e->a));
    case ExprOp::Exp: return make_binary(ExprOp::Mul, make_unary(ExprOp::Exp, e->a), d(e->a));
    case ExprOp::Log: return make_binary(ExprOp::Div, d(e->a), e->a);
    case ExprOp::Sqrt:
      return make_binary(ExprOp::Div, d(e->a),
                         make_binary(ExprOp::Mul, make_const(2.0), make_unary(ExprOp::Sqrt, e->a)));
  }
  throw std::logic_error("unhandled expression node");
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  // Shortest decimal form that round-trips to the same double.
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// Grammar levels: 0 = expr (+,-), 1 = term (*,/), 2 = base (atoms, unary
// minus, parenthesized). Pow prints its child at base level.
void print_rec(const ExprPtr& e, int level, std::string& out);

void print_child(const ExprPtr& e, int level, std::string& out) {
  bool paren = false;
  switch (e->op) {
    case ExprOp::Add:
    case ExprOp::Sub: paren = level >= 1; break;
    case ExprOp::Mul:
    case ExprOp::Div: paren = level >= 2; break;
    case ExprOp::Pow: paren = level >= 3; break;
    case ExprOp::Neg: paren = level >= 2; break;  // '-…' is itself a base, but wrap for clarity
    default: paren = false; break;
  }
  if (paren) {
    out += '(';
    print_rec(e, 0, out);
    out += ')';
  } else {
    print_rec(e, level, out);
  }
}

void print_rec(const ExprPtr& e, int level, std::string& out) {
  switch (e->op) {
    case ExprOp::Const: out += format_double(e->value); return;
    case ExprOp::VarX: out += 'x' + std::to_string(e->index + 1); return;
    case ExprOp::VarY: out += 'y' + std::to_string(e->index + 1); return;
    case ExprOp::Add:
      print_child(e->a, 0, out); out += " + "; print_child(e->b, 1, out); return;
    case ExprOp::Sub:
      print_child(e->a, 0, out); out += " - "; print_child(e->b, 1, out); return;
    case ExprOp::Mul:
      print_child(e->a, 1, out); out += '*'; print_child(e->b, 2, out); return;
    case ExprOp::Div:
      print_child(e->a, 1, out); out += '/'; print_child(e->b, 2, out); return;
    case ExprOp::Pow:
      print_child(e->a, 3, out); out += '^' + std::to_string(e->index); return;
    case ExprOp::Neg:
      out += '-'; print_child(e->a, 3, out); return;
    case ExprOp::Sin: out += "sin("; print_rec(e->a, 0, out); out += ')'; return;
    case ExprOp::Cos: out += "cos("; print_rec(e->a, 0, out); out += ')'; return;
    case ExprOp::Exp: out += "exp("; print_rec(e->a, 0, out); out += ')'; return;
    case ExprOp::Log: out += "log("; print_rec(e->a, 0, out); out += ')'; return;
    case ExprOp::Sqrt: out += "sqrt("; print_rec(e->a, 0, out); out += ')'; return;
  }
}

}  // namespace

std::string print_expression(const ExprPtr& e) {
  std::string out;
  print_rec(e, 0, out);
  return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->index != b->index) return false;
  if (a->op == ExprOp::Const && a->value != b->value) return false;
  if ((a->a == nullptr) != (b->a == nullptr)) return false;
  if ((a->b == nullptr) != (b->b == nullptr)) return false;
  if (a->a && !structurally_equal(a->a, b->a)) return false;
  if (a->b && !structurally_equal(a->b, b->b)) return false;
  return true;
}

double gradient_check(const ExprPtr& e, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, double h) {
  double worst = 0.0;
  Eigen::VectorXd xp = x, xm = x, yp = y, ym = y;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] += h;
    xm[i] -= h;
    const double fd = (evaluate(e, xp, y) - evaluate(e, xm, y)) / (2.0 * h);
    const double sym = evaluate(differentiate(e, 'x', i), x, y);
    worst = std::max(worst, std::abs(fd - sym));
    xp[i] = x[i];
    xm[i] = x[i];
  }
  for (int j = 0; j < y.size(); ++j) {
    yp[j] += h;
    ym[j] -= h;
    const double fd = (evaluate(e, x, yp) - evaluate(e, x, ym)) / (2.0 * h);
    const double sym = evaluate(differentiate(e, 'y', j), x, y);
    worst = std::max(worst, std::abs(fd - sym));
    yp[j] = y[j];
    ym[j] = y[j];
  }
  return worst;
}

}  // namespace dirval
