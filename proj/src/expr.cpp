#include "finsler/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "finsler/errors.hpp"
#include "finsler/rng.hpp"

namespace finsler {

namespace {

struct Parser {
  const std::string& src;
  int dim;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos); }

  ExprNodePtr make_num(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::number;
    n->number = v;
    return n;
  }

  ExprNodePtr parse_expression() {
    ExprNodePtr lhs = parse_term();
    while (true) {
      const char c = peek();
      if (c == '+' || c == '-') {
        ++pos;
        ExprNodePtr rhs = parse_term();
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::binary;
        n->op = c == '+' ? ExprOp::add : ExprOp::sub;
        n->a = lhs;
        n->b = rhs;
        lhs = n;
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_term() {
    ExprNodePtr lhs = parse_unary();
    while (true) {
      const char c = peek();
      if (c == '*' || c == '/') {
        ++pos;
        ExprNodePtr rhs = parse_unary();
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::binary;
        n->op = c == '*' ? ExprOp::mul : ExprOp::div;
        n->a = lhs;
        n->b = rhs;
        lhs = n;
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_unary() {
    if (accept('-')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::unary_minus;
      n->a = parse_unary();
      return n;
    }
    return parse_power();
  }

  ExprNodePtr parse_power() {
    ExprNodePtr base = parse_primary();
    if (accept('^')) {
      // right-associative; exponent binds tighter than unary minus there
      ExprNodePtr expo = parse_unary();
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::binary;
      n->op = ExprOp::pow;
      n->a = base;
      n->b = expo;
      return n;
    }
    return base;
  }

  ExprNodePtr parse_primary() {
    const char c = peek();
    if (c == '(') {
      ++pos;
      ExprNodePtr inner = parse_expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail("expected a number, variable, function, or '('");
  }

  ExprNodePtr parse_number() {
    skip_ws();
    const size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      size_t expo = pos + 1;
      if (expo < src.size() && (src[expo] == '+' || src[expo] == '-')) ++expo;
      if (expo < src.size() && std::isdigit(static_cast<unsigned char>(src[expo]))) {
        pos = expo;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      }
    }
    if (pos == start) fail("malformed number");
    try {
      return make_num(std::stod(src.substr(start, pos - start)));
    } catch (const std::exception&) {
      throw parse_error("malformed number", start);
    }
  }

  ExprNodePtr parse_ident() {
    skip_ws();
    const size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string name = src.substr(start, pos - start);
    if (name == "sqrt" || name == "exp" || name == "ln") {
      if (!accept('(')) throw parse_error("expected '(' after function name", pos);
      ExprNodePtr arg = parse_expression();
      if (!accept(')')) fail("expected ')'");
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::call;
      n->fn = name == "sqrt" ? ExprFn::sqrt : (name == "exp" ? ExprFn::exp : ExprFn::ln);
      n->a = arg;
      return n;
    }
    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1) {
      bool digits = true;
      for (size_t i = 1; i < name.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        const int idx = std::stoi(name.substr(1));
        if (idx < 1 || idx > dim)
          throw parse_error("variable index exceeds dimension " + std::to_string(dim),
                            start);
        auto n = std::make_shared<ExprNode>();
        n->kind = name[0] == 'x' ? ExprNode::Kind::var_x : ExprNode::Kind::var_y;
        n->var_index = idx - 1;
        return n;
      }
    }
    throw parse_error("unknown identifier '" + name + "'", start);
  }
};

bool is_constant(const ExprNodePtr& n) {
  if (!n) return true;
  switch (n->kind) {
    case ExprNode::Kind::number: return true;
    case ExprNode::Kind::var_x:
    case ExprNode::Kind::var_y: return false;
    default: return is_constant(n->a) && is_constant(n->b);
  }
}

double eval_const(const ExprNodePtr& n);

template <class T>
T eval_node(const ExprNodePtr& n, std::span<const T> xs, std::span<const T> ys);

template <class T>
T apply_pow(const T& base, const ExprNodePtr& expo, std::span<const T> xs,
            std::span<const T> ys) {
  if (is_constant(expo)) {
    const double r = eval_const(expo);
    if constexpr (std::is_same_v<T, double>) {
      const double rr = std::nearbyint(r);
      if (rr == r && std::abs(r) <= 64.0) {
        double acc = 1.0, p = base;
        long k = std::labs(static_cast<long>(rr));
        while (k > 0) {
          if (k & 1) acc *= p;
          k >>= 1;
          p *= p;
        }
        return rr < 0 ? 1.0 / acc : acc;
      }
      if (base <= 0.0) throw domain_error("pow with real exponent needs a positive base");
      return std::pow(base, r);
    } else {
      return pow(base, r);
    }
  }
  // variable exponent: a^b = exp(b ln a)
  T e = eval_node<T>(expo, xs, ys);
  if constexpr (std::is_same_v<T, double>) {
    if (base <= 0.0) throw domain_error("pow with variable exponent needs a positive base");
    return std::exp(e * std::log(base));
  } else {
    return exp(e * log(base));
  }
}

template <class T>
T eval_node(const ExprNodePtr& n, std::span<const T> xs, std::span<const T> ys) {
  switch (n->kind) {
    case ExprNode::Kind::number:
      if constexpr (std::is_same_v<T, double>) {
        return n->number;
      } else {
        const T& probe = xs.empty() ? ys[0] : xs[0];
        return T::constant(probe.space(), n->number);
      }
    case ExprNode::Kind::var_x:
      if (n->var_index >= static_cast<int>(xs.size()))
        throw config_error("x variable binding missing");
      return xs[n->var_index];
    case ExprNode::Kind::var_y:
      if (n->var_index >= static_cast<int>(ys.size()))
        throw config_error("y variable binding missing");
      return ys[n->var_index];
    case ExprNode::Kind::unary_minus:
      return -eval_node<T>(n->a, xs, ys);
    case ExprNode::Kind::binary: {
      if (n->op == ExprOp::pow) return apply_pow<T>(eval_node<T>(n->a, xs, ys), n->b, xs, ys);
      T a = eval_node<T>(n->a, xs, ys);
      T b = eval_node<T>(n->b, xs, ys);
      switch (n->op) {
        case ExprOp::add: return a + b;
        case ExprOp::sub: return a - b;
        case ExprOp::mul: return a * b;
        case ExprOp::div:
          if constexpr (std::is_same_v<T, double>) {
            if (b == 0.0) throw singular_error("division by zero");
            return a / b;
          } else {
            return a / b;
          }
        default: break;
      }
      throw config_error("unreachable binary op");
    }
    case ExprNode::Kind::call: {
      T a = eval_node<T>(n->a, xs, ys);
      if constexpr (std::is_same_v<T, double>) {
        switch (n->fn) {
          case ExprFn::sqrt:
            if (a <= 0.0) throw domain_error("sqrt of a nonpositive value");
            return std::sqrt(a);
          case ExprFn::exp: return std::exp(a);
          case ExprFn::ln:
            if (a <= 0.0) throw domain_error("ln of a nonpositive value");
            return std::log(a);
        }
      } else {
        switch (n->fn) {
          case ExprFn::sqrt: return sqrt(a);
          case ExprFn::exp: return exp(a);
          case ExprFn::ln: return log(a);
        }
      }
      throw config_error("unreachable call");
    }
  }
  throw config_error("unreachable node kind");
}

double eval_const(const ExprNodePtr& n) {
  return eval_node<double>(n, {}, {});
}

void print_node(const ExprNodePtr& n, std::string& out) {
  switch (n->kind) {
    case ExprNode::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n->number);
      out += buf;
      return;
    }
    case ExprNode::Kind::var_x:
      out += "x" + std::to_string(n->var_index + 1);
      return;
    case ExprNode::Kind::var_y:
      out += "y" + std::to_string(n->var_index + 1);
      return;
    case ExprNode::Kind::unary_minus:
      out += "(-";
      print_node(n->a, out);
      out += ")";
      return;
    case ExprNode::Kind::binary: {
      out += "(";
      print_node(n->a, out);
      switch (n->op) {
        case ExprOp::add: out += " + "; break;
        case ExprOp::sub: out += " - "; break;
        case ExprOp::mul: out += " * "; break;
        case ExprOp::div: out += " / "; break;
        case ExprOp::pow: out += "^"; break;
      }
      print_node(n->b, out);
      out += ")";
      return;
    }
    case ExprNode::Kind::call:
      out += n->fn == ExprFn::sqrt ? "sqrt(" : (n->fn == ExprFn::exp ? "exp(" : "ln(");
      print_node(n->a, out);
      out += ")";
      return;
  }
}

int depth(const ExprNodePtr& n) {
  if (!n) return 0;
  return 1 + std::max(depth(n->a), depth(n->b));
}

}  // namespace

Expr parse(const std::string& source, int dim) {
  if (source.empty()) throw parse_error("empty expression", 0);
  Parser p{source, dim};
  ExprNodePtr root = p.parse_expression();
  p.skip_ws();
  if (p.pos != source.size()) p.fail("unexpected trailing input");
  return Expr{dim, root};
}

std::string to_string(const Expr& e) {
  if (e.empty()) return "";
  std::string out;
  print_node(e.root, out);
  return out;
}

int tree_depth(const Expr& e) { return depth(e.root); }

double eval_scalar(const Expr& e, std::span<const double> x,
                   std::span<const double> y) {
  if (e.empty()) throw config_error("evaluating an empty expression");
  return eval_node<double>(e.root, x, y);
}

Jet eval_jet_bound(const Expr& e, std::span<const Jet> x, std::span<const Jet> y) {
  if (e.empty()) throw config_error("evaluating an empty expression");
  return eval_node<Jet>(e.root, x, y);
}

Jet eval_jet(const Expr& e, std::span<const double> x, std::span<const double> y,
             const JetConfig& cfg) {
  auto sp = jet_space(cfg);
  std::vector<Jet> xs, ys;
  xs.reserve(x.size());
  ys.reserve(y.size());
  for (size_t i = 0; i < x.size(); ++i)
    xs.push_back(cfg.max_x_order >= 1 ? Jet::x_var(sp, static_cast<int>(i), x[i])
                                      : Jet::constant(sp, x[i]));
  for (size_t j = 0; j < y.size(); ++j)
    ys.push_back(Jet::y_var(sp, static_cast<int>(j), y[j]));
  return eval_jet_bound(e, xs, ys);
}

HomogeneityReport check_homogeneity(const Expr& e, int degree, int samples,
                                    uint64_t seed) {
  HomogeneityReport rep;
  Rng rng(seed);
  const double scales[] = {0.5, 2.0, 3.0};
  int used = 0;
  int attempts = 0;
  while (used < samples && attempts < 50 * samples + 100) {
    ++attempts;
    std::vector<double> x(e.dim), y(e.dim);
    for (double& v : x) v = rng.uniform(-0.9, 0.9);
    for (double& v : y) v = rng.uniform(0.4, 2.0);
    try {
      const double base = eval_scalar(e, x, y);
      double t = rng.uniform(0.3, 3.0);
      double worst_here = 0.0;
      for (int si = 0; si < 4; ++si) {
        const double tt = si < 3 ? scales[si] : t;
        std::vector<double> ty(y);
        for (double& v : ty) v *= tt;
        const double scaled = eval_scalar(e, x, ty);
        const double expected = std::pow(tt, degree) * base;
        worst_here = std::max(
            worst_here, std::abs(scaled - expected) / (1.0 + std::abs(expected)));
      }
      rep.worst = std::max(rep.worst, worst_here);
      ++used;
    } catch (const error&) {
      continue;  // off-domain sample, try another
    }
  }
  rep.samples_used = used;
  if (used == 0) {
    rep.pass = false;
    rep.note = "no evaluable samples";
    return rep;
  }
  rep.pass = rep.worst <= 1e-9;
  return rep;
}

}  // namespace finsler
