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

#ifndef DIRVAL_EXPR_HPP
#define DIRVAL_EXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dirval {

// Scalar expressions over two variable groups x1..xn (parameters) and
// y1..ym (decision variables). Nodes are immutable; subtrees are shared
// freely between expressions, so differentiation is cheap.
enum class ExprOp {
  Const,
  VarX,  // index = 0-based parameter slot
  VarY,  // index = 0-based decision slot
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // integer exponent >= 0, stored in index
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprOp op;
  double value = 0.0;  // Const only
  int index = 0;       // VarX/VarY slot or Pow exponent
  ExprPtr a;
  ExprPtr b;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position(position) {}
  std::size_t position;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string subexpr)
      : std::runtime_error(what), subexpr(std::move(subexpr)) {}
  std::string subexpr;  // printed form of the offending subtree
};

// Node constructors with constant folding and 0/1 identities (x+0, x*1,
// x*0, x-0, 0-x, x/1, b^0, b^1). No reassociation beyond that.
ExprPtr make_const(double v);
ExprPtr make_var(char group, int index0);  // group 'x' or 'y', 0-based
ExprPtr make_unary(ExprOp op, ExprPtr a);
ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr base, int exponent);

// Grammar (leading/trailing/interior whitespace ignored):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' uint)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')' | '-' base
//   ident  := ('x'|'y') uint      (1-based, validated against n and m)
//   func   := sin | cos | exp | log | sqrt
// A '-' applied to a numeric literal folds into the constant, so printed
// negative constants round-trip structurally.
ExprPtr parse_expression(const std::string& text, int n, int m);

double evaluate(const ExprPtr& e, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y);

// Partial derivative with respect to group ('x'|'y'), 0-based index.
ExprPtr differentiate(const ExprPtr& e, char group, int index0);

// Canonical text form; parse_expression(print_expression(a)) is
// structurally identical to a.
std::string print_expression(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Max abs discrepancy between symbolic partials and central differences
// with step h, over all n+m coordinates at (x, y).
double gradient_check(const ExprPtr& e, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, double h = 1e-6);

}  // namespace dirval

#endif  // DIRVAL_EXPR_HPP
