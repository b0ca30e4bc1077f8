#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

// Immutable AST for scalar functions of (x, y): literals, variables
// x1..xn / y1..yn, + - * / ^, sqrt, exp, ln. No conditionals and no abs:
// everything stays jet-differentiable on its declared domain.
struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

enum class ExprOp { add, sub, mul, div, pow };
enum class ExprFn { sqrt, exp, ln };

struct ExprNode {
  enum class Kind { number, var_x, var_y, unary_minus, binary, call } kind;
  double number = 0.0;
  int var_index = 0;  // 0-based
  ExprOp op = ExprOp::add;
  ExprFn fn = ExprFn::sqrt;
  ExprNodePtr a, b;
};

struct Expr {
  int dim = 0;
  ExprNodePtr root;
  bool empty() const { return root == nullptr; }
};

// Recursive-descent parse with standard precedence (^ > unary- > * / > + -);
// left-associative except ^. Throws parse_error with a byte offset.
Expr parse(const std::string& source, int dim);

std::string to_string(const Expr& e);

int tree_depth(const Expr& e);

double eval_scalar(const Expr& e, std::span<const double> x,
                   std::span<const double> y);

// Evaluate over caller-provided jets (one per declared variable).
Jet eval_jet_bound(const Expr& e, std::span<const Jet> x, std::span<const Jet> y);

// Seed all variables at (x, y) in a fresh space described by cfg.
Jet eval_jet(const Expr& e, std::span<const double> x, std::span<const double> y,
             const JetConfig& cfg);

struct HomogeneityReport {
  bool pass = false;
  double worst = 0.0;      // worst relative violation
  int samples_used = 0;
  std::string note;
};

// |e(x, ty) - t^degree e(x, y)| <= 1e-9 (1 + |e|) over random samples, t > 0.
HomogeneityReport check_homogeneity(const Expr& e, int degree, int samples,
                                    uint64_t seed);

}  // namespace finsler
