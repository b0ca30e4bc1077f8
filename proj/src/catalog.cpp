#include "finsler/catalog.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

// change expressions may reference any variable up to this dimension; the
// catalog's metrics decide how many are actually bound
constexpr int kMaxDim = 8;

struct Token {
  enum class Kind { word, string, lbrace, rbrace, end } kind;
  std::string text;
  size_t offset;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;

  Token next() {
    while (pos < src.size()) {
      const char c = src[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    if (pos >= src.size()) return {Token::Kind::end, "", pos};
    const size_t start = pos;
    const char c = src[pos];
    if (c == '{') {
      ++pos;
      return {Token::Kind::lbrace, "{", start};
    }
    if (c == '}') {
      ++pos;
      return {Token::Kind::rbrace, "}", start};
    }
    if (c == '"') {
      ++pos;
      std::string text;
      while (pos < src.size() && src[pos] != '"') text += src[pos++];
      if (pos >= src.size()) throw parse_error("unterminated string", start);
      ++pos;
      return {Token::Kind::string, text, start};
    }
    std::string text;
    while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
           src[pos] != '{' && src[pos] != '}' && src[pos] != '"' && src[pos] != '#')
      text += src[pos++];
    return {Token::Kind::word, text, start};
  }

  Token peeked{Token::Kind::end, "", 0};
  bool has_peek = false;
  Token peek() {
    if (!has_peek) {
      peeked = next();
      has_peek = true;
    }
    return peeked;
  }
  Token take() {
    if (has_peek) {
      has_peek = false;
      return peeked;
    }
    return next();
  }
};

bool looks_numeric(const Token& t) {
  if (t.kind != Token::Kind::word || t.text.empty()) return false;
  const char c = t.text[0];
  if (std::isdigit(static_cast<unsigned char>(c))) return true;
  return (c == '-' || c == '+' || c == '.') && t.text.size() > 1 &&
         std::isdigit(static_cast<unsigned char>(t.text[1]));
}

double parse_number_token(const Token& t) {
  try {
    size_t used = 0;
    const double v = std::stod(t.text, &used);
    if (used != t.text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw parse_error("expected a number, got '" + t.text + "'", t.offset);
  }
}

struct MetricBlock {
  std::string label;
  std::string kind;
  int dim = 0;
  std::vector<double> params;
  std::string source;
  size_t offset = 0;
};

struct ChangeBlock {
  std::string label;
  std::string family;
  std::vector<double> params;
  std::string f, sigma;
  std::vector<std::string> b;
  size_t offset = 0;
};

MetricSpec build_metric(const MetricBlock& mb) {
  if (mb.dim < 2) throw config_error("metric '" + mb.label + "' needs dim >= 2");
  MetricSpec spec;
  if (mb.kind == "euclidean") {
    spec = euclidean_metric(mb.dim);
  } else if (mb.kind == "quartic-minkowski") {
    spec = quartic_minkowski_metric(mb.dim);
  } else if (mb.kind == "riemannian-diag") {
    std::vector<double> c(mb.params);
    if (c.empty()) c.assign(static_cast<size_t>(mb.dim), 1.0);
    spec = riemannian_diag_metric(mb.dim, c);
  } else if (mb.kind == "expression") {
    if (mb.source.empty())
      throw config_error("expression metric '" + mb.label + "' needs a source");
    spec = expression_metric(mb.label, mb.dim, parse(mb.source, mb.dim));
  } else {
    throw config_error("unknown metric kind '" + mb.kind + "'");
  }
  spec.label = mb.label;
  return spec;
}

ChangeSpec build_change(const ChangeBlock& cb) {
  std::vector<Expr> b;
  for (const auto& s : cb.b) b.push_back(parse(s, kMaxDim));
  Expr sigma;
  if (!cb.sigma.empty() && cb.sigma != "0") sigma = parse(cb.sigma, kMaxDim);

  ChangeSpec c;
  if (cb.family == "randers") {
    c = randers_change(std::move(b), std::move(sigma));
    c.family = ChangeSpec::Family::randers;
  } else if (cb.family == "beta-conformal") {
    c = randers_change(std::move(b), std::move(sigma));
    c.family = ChangeSpec::Family::beta_conformal;
  } else if (cb.family == "kropina") {
    c = kropina_change(std::move(b), std::move(sigma));
  } else if (cb.family == "energy") {
    const double kprime = cb.params.size() > 0 ? cb.params[0] : 2.0;
    const double k = cb.params.size() > 1 ? cb.params[1] : 3.0;
    c = energy_change(kprime, k, std::move(b), std::move(sigma));
  } else if (cb.family == "generalized-randers") {
    const double c1 = cb.params.size() > 0 ? cb.params[0] : 1.0;
    const double c2 = cb.params.size() > 1 ? cb.params[1] : 1.0;
    c = generalized_randers_change(c1, c2, std::move(b), std::move(sigma));
  } else if (cb.family == "conformal") {
    c = conformal_change(std::move(sigma));
  } else if (cb.family == "expression") {
    if (cb.f.empty())
      throw config_error("expression change '" + cb.label + "' needs f");
    c = custom_change(parse(cb.f, 2), std::move(b), std::move(sigma));
  } else {
    throw config_error("unknown change family '" + cb.family + "'");
  }
  c.label = cb.label;
  return c;
}

}  // namespace

const MetricSpec* Catalog::find_metric(const std::string& label) const {
  for (const auto& m : metrics)
    if (m.label == label) return &m.spec;
  return nullptr;
}

const ChangeSpec* Catalog::find_change(const std::string& label) const {
  for (const auto& c : changes)
    if (c.label == label) return &c.spec;
  return nullptr;
}

Catalog parse_catalog(const std::string& text) {
  Lexer lex{text};
  Catalog cat;
  std::set<std::string> metric_labels, change_labels;

  while (true) {
    Token t = lex.take();
    if (t.kind == Token::Kind::end) break;
    if (t.kind != Token::Kind::word)
      throw parse_error("expected a block keyword", t.offset);

    if (t.text == "metric" || t.text == "change") {
      const bool is_metric = t.text == "metric";
      Token name = lex.take();
      if (name.kind != Token::Kind::word)
        throw parse_error("expected a label", name.offset);
      Token brace = lex.take();
      if (brace.kind != Token::Kind::lbrace)
        throw parse_error("expected '{'", brace.offset);

      MetricBlock mb;
      ChangeBlock cb;
      mb.label = cb.label = name.text;
      mb.offset = cb.offset = name.offset;

      while (true) {
        Token key = lex.take();
        if (key.kind == Token::Kind::rbrace) break;
        if (key.kind != Token::Kind::word)
          throw parse_error("expected a field name", key.offset);
        if (is_metric) {
          if (key.text == "kind") {
            mb.kind = lex.take().text;
          } else if (key.text == "dim") {
            mb.dim = static_cast<int>(parse_number_token(lex.take()));
          } else if (key.text == "params") {
            while (looks_numeric(lex.peek()))
              mb.params.push_back(parse_number_token(lex.take()));
          } else if (key.text == "source") {
            Token s = lex.take();
            if (s.kind != Token::Kind::string)
              throw parse_error("source expects a quoted expression", s.offset);
            mb.source = s.text;
          } else {
            throw parse_error("unknown metric field '" + key.text + "'", key.offset);
          }
        } else {
          if (key.text == "family") {
            cb.family = lex.take().text;
          } else if (key.text == "params") {
            while (looks_numeric(lex.peek()))
              cb.params.push_back(parse_number_token(lex.take()));
          } else if (key.text == "f" || key.text == "sigma") {
            Token s = lex.take();
            if (s.kind != Token::Kind::string)
              throw parse_error(key.text + " expects a quoted expression", s.offset);
            (key.text == "f" ? cb.f : cb.sigma) = s.text;
          } else if (key.text == "b") {
            while (lex.peek().kind == Token::Kind::string)
              cb.b.push_back(lex.take().text);
          } else {
            throw parse_error("unknown change field '" + key.text + "'", key.offset);
          }
        }
      }

      if (is_metric) {
        if (!metric_labels.insert(mb.label).second)
          throw config_error("duplicate metric label '" + mb.label + "'");
        cat.metrics.push_back({mb.label, build_metric(mb)});
      } else {
        if (!change_labels.insert(cb.label).second)
          throw config_error("duplicate change label '" + cb.label + "'");
        cat.changes.push_back({cb.label, build_change(cb)});
      }
    } else if (t.text == "sampling") {
      Token brace = lex.take();
      if (brace.kind != Token::Kind::lbrace)
        throw parse_error("expected '{'", brace.offset);
      while (true) {
        Token key = lex.take();
        if (key.kind == Token::Kind::rbrace) break;
        if (key.text == "count") {
          cat.samples = static_cast<int>(parse_number_token(lex.take()));
        } else if (key.text == "seed") {
          cat.seed = static_cast<uint64_t>(parse_number_token(lex.take()));
        } else if (key.text == "xbox") {
          cat.box.x_lo = parse_number_token(lex.take());
          cat.box.x_hi = parse_number_token(lex.take());
        } else if (key.text == "ybox") {
          cat.box.r_lo = parse_number_token(lex.take());
          cat.box.r_hi = parse_number_token(lex.take());
        } else {
          throw parse_error("unknown sampling field '" + key.text + "'", key.offset);
        }
      }
    } else {
      throw parse_error("unknown block '" + t.text + "'", t.offset);
    }
  }
  return cat;
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw usage_error("cannot open catalog file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_catalog(ss.str());
}

namespace {

const char* kBuiltinCatalog = R"(
# built-in catalog: bases, changes, and the projective witnesses

metric euclid2 { kind euclidean dim 2 }
metric euclid3 { kind euclidean dim 3 }
metric riem2 { kind riemannian-diag dim 2 params 1 1 }
metric riem3 { kind riemannian-diag dim 3 params 1 1 1 }
metric quartic2 { kind quartic-minkowski dim 2 }
metric quartic3 { kind quartic-minkowski dim 3 }
metric quartic5 { kind quartic-minkowski dim 5 }

change randers {
  family randers
  b "0.2" "0.1" "0.15" "0.05" "0.12"
}
change kropina {
  family kropina
  b "0.2" "0.1" "0.15" "0.05" "0.12"
}
change energy23 {
  family energy
  params 2 3
  b "0.2" "0.1" "0.15" "0.05" "0.12"
}
change genrand {
  family generalized-randers
  params 0.7 1.3
  b "0.2" "0.1" "0.15" "0.05" "0.12"
}
change betaconf {
  family beta-conformal
  sigma "0.1*x1"
  b "0.2" "0.1" "0.15" "0.05" "0.12"
}
change custom {
  family expression
  f "sqrt(y1^2 + y2^2) + 0.1*y2"
  b "0.2" "0.1" "0.15" "0.05" "0.12"
}
change randers-grad {
  family randers
  b "0.2 + 0.1*x2" "0.1*x1" "0" "0" "0"
}
change randers-rot {
  family randers
  b "0.5*x2" "-0.5*x1" "0" "0" "0"
}

sampling { count 20 seed 7 xbox -0.5 0.5 ybox 0.5 2.0 }
)";

}  // namespace

Catalog builtin_catalog() { return parse_catalog(kBuiltinCatalog); }

CatalogCheckResult check_catalog(const Catalog& cat) {
  CatalogCheckResult res;
  for (const auto& m : cat.metrics) {
    auto rep = metric_homogeneity(m.spec, 10, cat.seed ^ fnv1a(m.label));
    if (!rep.pass) {
      res.ok = false;
      res.notes.push_back("metric '" + m.label +
                          "' fails the degree-1 homogeneity check (worst " +
                          std::to_string(rep.worst) + ")");
    } else {
      res.notes.push_back("metric '" + m.label + "' ok (dim " +
                          std::to_string(m.spec.dim) + ")");
    }
  }
  for (const auto& c : cat.changes)
    res.notes.push_back("change '" + c.label + "' ok");
  return res;
}

}  // namespace finsler
