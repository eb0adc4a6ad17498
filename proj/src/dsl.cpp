// SPDX-License-Identifier: Apache-2.0
#include "redsimp/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace redsimp {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Int: return "number " + t.text;
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Sym: return "'" + t.text + "'";
  }
  return "?";
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else {
      static const char* two[] = {"->", "<=", ">=", "==", "&&"};
      t.kind = Tok::Sym;
      for (const char* s : two)
        if (src.compare(i, 2, s) == 0) t.text = s;
      if (t.text.empty()) {
        if (std::string("{}[]();:,<>=+-*").find(c) == std::string::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// coeffs over the indices, then the param and the constant.
struct Lin {
  IntVector coeffs;
  Int param = 0;
  Int constant = 0;

  bool is_constant() const {
    if (param != 0) return false;
    for (const auto& c : coeffs)
      if (c != 0) return false;
    return true;
  }
  Lin scaled(const Int& k) const {
    Lin out = *this;
    for (auto& c : out.coeffs) c *= k;
    out.param *= k;
    out.constant *= k;
    return out;
  }
  Lin plus(const Lin& o, int sign) const {
    Lin out = *this;
    for (std::size_t k = 0; k < coeffs.size(); ++k) out.coeffs[k] += sign * o.coeffs[k];
    out.param += sign * o.param;
    out.constant += sign * o.constant;
    return out;
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ReductionSpec run() {
    ReductionSpec s;
    keyword("reduction");
    s.name = ident("reduction name");
    expect("{");
    bool have_param = false, have_domain = false, have_write = false, have_read = false,
         have_op = false;
    while (!peek_is("}")) {
      const Token& t = peek();
      if (t.kind != Tok::Ident)
        fail("expected a statement (param, domain, write, read, op, input, output, option)");
      if (t.text == "param") {
        next();
        s.param = ident("param name");
        expect(">=");
        s.param_lb = integer(true);
        have_param = true;
      } else if (t.text == "domain") {
        if (!have_param) fail("domain before param declaration");
        next();
        s.indices = index_list();
        names_ = s.indices;
        param_ = s.param;
        expect(":");
        s.domain = conjunction();
        have_domain = true;
      } else if (t.text == "write" || t.text == "read") {
        if (!have_domain) fail(t.text + " map before domain declaration");
        const std::string which = t.text;
        next();
        AffineMap m = map(which, s.indices);
        (which == "write" ? s.write : s.read) = std::move(m);
        (which == "write" ? have_write : have_read) = true;
      } else if (t.text == "op") {
        next();
        const Token& o = peek();
        std::string name = ident("operator");
        auto op = Operator::parse(name);
        if (!op) throw ParseError("unknown operator '" + name + "' (expected max, min, sum or product)",
                                  o.line, o.col);
        s.op = op->kind;
        have_op = true;
      } else if (t.text == "input") {
        next();
        s.input = ident("input name");
      } else if (t.text == "output") {
        next();
        s.output = ident("output name");
      } else if (t.text == "option") {
        next();
        const Token& o = peek();
        std::string name = ident("option name");
        if (name == "product_invertible") {
          s.product_invertible = true;
        } else if (name == "fractal_threshold") {
          expect("=");
          s.fractal_threshold = integer(false);
          if (*s.fractal_threshold < 1)
            throw ParseError("fractal_threshold must be positive", o.line, o.col);
        } else {
          throw ParseError("unknown option '" + name + "'", o.line, o.col);
        }
      } else {
        fail("unknown statement " + describe(t));
      }
      expect(";");
    }
    const char* missing = !have_param    ? "param"
                          : !have_domain ? "domain"
                          : !have_write  ? "write"
                          : !have_read   ? "read"
                          : !have_op     ? "op"
                                         : nullptr;
    if (missing) fail(std::string("missing ") + missing + " statement before '}'");
    expect("}");
    if (peek().kind != Tok::End) fail("expected end of input after '}'");
    if (s.input == s.output) fail("input and output share the name " + s.input);
    return s;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  bool peek_is(const std::string& sym) const {
    return (peek().kind == Tok::Sym || peek().kind == Tok::Ident) && peek().text == sym;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  void expect(const std::string& sym) {
    if (!peek_is(sym)) fail("expected '" + sym + "', found " + describe(peek()));
    next();
  }
  void keyword(const std::string& kw) {
    if (peek().kind != Tok::Ident || peek().text != kw)
      fail("expected '" + kw + "', found " + describe(peek()));
    next();
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail("expected " + what + ", found " + describe(peek()));
    return next().text;
  }
  long integer(bool allow_sign) {
    bool neg = false;
    if (allow_sign && peek_is("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::Int) fail("expected an integer, found " + describe(peek()));
    const Token& t = next();
    long v = 0;
    try {
      v = std::stol(t.text);
    } catch (const std::exception&) {
      throw ParseError("integer out of range", t.line, t.col);
    }
    return neg ? -v : v;
  }

  std::vector<std::string> index_list() {
    std::vector<std::string> out;
    expect("[");
    if (!peek_is("]")) {
      for (;;) {
        const Token& t = peek();
        std::string n = ident("index name");
        if (std::find(out.begin(), out.end(), n) != out.end())
          throw ParseError("duplicate index '" + n + "'", t.line, t.col);
        out.push_back(n);
        if (!peek_is(",")) break;
        next();
      }
    }
    expect("]");
    return out;
  }

  Lin zero() const { return Lin{IntVector(names_.size()), 0, 0}; }

  Lin primary() {
    const Token& t = peek();
    if (peek_is("(")) {
      next();
      Lin e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Int) {
      Lin e = zero();
      e.constant = Int(next().text);
      // 2i or 2(i+j)
      if ((peek().kind == Tok::Ident && !peek_is("and")) || peek_is("("))
        return primary().scaled(e.constant);
      return e;
    }
    if (t.kind == Tok::Ident) {
      std::string n = next().text;
      Lin e = zero();
      if (n == param_) {
        e.param = 1;
        return e;
      }
      auto it = std::find(names_.begin(), names_.end(), n);
      if (it == names_.end())
        throw ParseError("undeclared identifier '" + n + "'", t.line, t.col);
      e.coeffs[it - names_.begin()] = 1;
      return e;
    }
    fail("expected an affine expression, found " + describe(t));
  }

  Lin factor() {
    if (peek_is("-")) {
      next();
      return factor().scaled(-1);
    }
    if (peek_is("+")) {
      next();
      return factor();
    }
    Lin e = primary();
    while (peek_is("*")) {
      const Token& t = next();
      Lin f = primary();
      if (e.is_constant())
        e = f.scaled(e.constant);
      else if (f.is_constant())
        e = e.scaled(f.constant);
      else
        throw ParseError("product of two non-constant terms is not affine", t.line, t.col);
    }
    return e;
  }

  Lin expr() {
    Lin e = factor();
    while (peek_is("+") || peek_is("-")) {
      int sign = next().text == "+" ? 1 : -1;
      e = e.plus(factor(), sign);
    }
    return e;
  }

  static Constraint ge(const Lin& lhs, const Lin& rhs, int strict) {
    Lin d = lhs.plus(rhs, -1);
    return Constraint(d.coeffs, d.param, d.constant - strict);
  }

  void relation(std::vector<Constraint>& out) {
    Lin lhs = expr();
    bool any = false;
    for (;;) {
      std::string op = peek().text;
      if (peek().kind != Tok::Sym ||
          (op != "<=" && op != "<" && op != ">=" && op != ">" && op != "==" && op != "="))
        break;
      next();
      Lin rhs = expr();
      if (op == "<=") out.push_back(ge(rhs, lhs, 0));
      if (op == "<") out.push_back(ge(rhs, lhs, 1));
      if (op == ">=") out.push_back(ge(lhs, rhs, 0));
      if (op == ">") out.push_back(ge(lhs, rhs, 1));
      if (op == "==" || op == "=") out.push_back(ge(lhs, rhs, 0).with_equality(true));
      lhs = rhs;
      any = true;
    }
    if (!any) fail("expected a comparison (<=, <, >=, >, ==), found " + describe(peek()));
  }

  std::vector<Constraint> conjunction() {
    std::vector<Constraint> out;
    relation(out);
    while (peek_is("and") || peek_is("&&") || peek_is(",")) {
      next();
      relation(out);
    }
    return out;
  }

  AffineMap map(const std::string& which, const std::vector<std::string>& indices) {
    const Token& t = peek();
    auto names = index_list();
    if (names != indices)
      throw ParseError(which + " map takes [" + join(names) + "] but the domain indexes [" +
                           join(indices) + "]",
                       t.line, t.col);
    expect("->");
    expect("[");
    std::vector<Lin> rows;
    if (!peek_is("]")) {
      rows.push_back(expr());
      while (peek_is(",")) {
        next();
        rows.push_back(expr());
      }
    }
    expect("]");
    const std::size_t d = indices.size();
    RatMatrix m(rows.size(), d);
    RatVector pc(rows.size()), cc(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < d; ++c) m.at(r, c) = rows[r].coeffs[c];
      pc[r] = rows[r].param;
      cc[r] = rows[r].constant;
    }
    return AffineMap(std::move(m), std::move(pc), std::move(cc));
  }

  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k];
    return s;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> names_;
  std::string param_;
};

std::string lin_string(const RatVector& coeffs, const Rational& param, const Rational& constant,
                       const std::vector<std::string>& names, const std::string& pname) {
  std::string out;
  auto term = [&](const Rational& c, const std::string& name) {
    if (c == 0) return;
    const bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    if (name.empty())
      out += a.get_str();
    else
      out += (a == 1 ? "" : a.get_str() + "*") + name;
  };
  for (std::size_t k = 0; k < coeffs.size(); ++k) term(coeffs[k], names[k]);
  term(param, pname);
  term(constant, "");
  return out.empty() ? "0" : out;
}

}  // namespace

ReductionSpec parse_spec(const std::string& text) { return Parser(text).run(); }

std::string pretty_print(const ReductionSpec& s) {
  std::string idx;
  for (std::size_t k = 0; k < s.indices.size(); ++k) idx += (k ? "," : "") + s.indices[k];
  std::string out = "reduction " + s.name + " {\n";
  out += "  param " + s.param + " >= " + std::to_string(s.param_lb) + ";\n";
  out += "  domain [" + idx + "] : ";
  for (std::size_t k = 0; k < s.domain.size(); ++k) {
    const Constraint& c = s.domain[k];
    out += (k ? " and " : "") +
           lin_string(c.linear(), Rational(c.param), Rational(c.constant), s.indices, s.param) +
           (c.equality ? " == 0" : " >= 0");
  }
  out += ";\n";
  auto map_line = [&](const std::string& which, const AffineMap& m) {
    std::string rows;
    for (std::size_t r = 0; r < m.out_dim(); ++r)
      rows += (r ? ", " : "") +
              lin_string(m.matrix.row(r), m.param_col[r], m.const_col[r], s.indices, s.param);
    return "  " + which + " [" + idx + "] -> [" + rows + "];\n";
  };
  out += map_line("write", s.write);
  out += map_line("read", s.read);
  out += "  op " + Operator{s.op, false}.name() + ";\n";
  if (s.input != "X") out += "  input " + s.input + ";\n";
  if (s.output != "Y") out += "  output " + s.output + ";\n";
  if (s.product_invertible) out += "  option product_invertible;\n";
  if (s.fractal_threshold)
    out += "  option fractal_threshold = " + std::to_string(*s.fractal_threshold) + ";\n";
  out += "}\n";
  return out;
}

bool ReductionSpec::operator==(const ReductionSpec& o) const {
  return name == o.name && param == o.param && param_lb == o.param_lb && indices == o.indices &&
         domain == o.domain && write == o.write && read == o.read && op == o.op &&
         input == o.input && output == o.output && product_invertible == o.product_invertible &&
         fractal_threshold == o.fractal_threshold;
}

Reduction ReductionSpec::reduction() const {
  Polyhedron body(indices.size(), domain, param_lb);
  Operator o{op, product_invertible};
  return make_reduction(std::move(body), write, read, o, input);
}

const std::vector<CorpusEntry>& bundled_corpus() {
  static const std::vector<CorpusEntry> corpus = {
      {"prefix_sum.red", R"(# Prefix sum.
reduction prefix_sum {
  param N >= 1;
  domain [i,j] : 0 <= j <= i <= N;
  write [i,j] -> [i];
  read [i,j] -> [j];
  op sum;
}
)"},
      {"prefix_max.red", R"(# Prefix max.
reduction prefix_max {
  param N >= 1;
  domain [i,j] : 0 <= j <= i <= N;
  write [i,j] -> [i];
  read [i,j] -> [j];
  op max;
}
)"},
      {"sliding_max.red", R"(# Sliding and increasing max filter: Y[i] = max X[j] for i <= j <= 2i.
reduction sliding_max {
  param N >= 1;
  domain [i,j] : i <= j <= 2i and i <= N;
  write [i,j] -> [i];
  read [i,j] -> [j];
  op max;
}
)"},
      {"tetra.red", R"(# Sum over a tetrahedron, one answer per i.
reduction tetra {
  param N >= 1;
  domain [i,j,k] : i <= N and 0 <= j and 0 <= k and k <= i - j;
  write [i,j,k] -> [i];
  read [i,j,k] -> [k];
  op sum;
}
)"},
      {"parallelogram.red", R"(# Parallelogram body; simplification alone fails with max.
reduction parallelogram {
  param N >= 1;
  domain [i,j] : 0 <= j and i - N <= j and j <= i and j <= N;
  write [i,j] -> [i];
  read [i,j] -> [j];
  op max;
}
)"},
      {"four_d.red", R"(# Four-index reduction with 2D accumulation and reuse.
reduction four_d {
  param N >= 1;
  domain [i,j,k,l] : j <= N and i <= k <= 2i and i + j <= l <= 2j;
  write [i,j,k,l] -> [i,j];
  read [i,j,k,l] -> [k,l];
  op max;
}
)"},
  };
  return corpus;
}

ReductionSpec corpus_spec(const std::string& name) {
  for (const auto& e : bundled_corpus())
    if (e.file == name || e.file == name + ".red") return parse_spec(e.text);
  throw UnsupportedInput("no corpus entry named " + name);
}

}  // namespace redsimp
