#include "nlg/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace nlg {
namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_unary(ExprKind k, NodePtr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(ExprKind k, NodePtr l, NodePtr r) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const Chart& chart) : src_(src), chart_(chart) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(ExprKind::Add, lhs, term());
      else if (accept('-'))
        lhs = make_binary(ExprKind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(ExprKind::Mul, lhs, factor());
      else if (accept('/'))
        lhs = make_binary(ExprKind::Div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (!accept('^')) return b;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
      negative = src_[pos_] == '-';
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected integer exponent", start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError("exponent out of range", digits);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Pow;
    n->lhs = std::move(b);
    n->exponent = negative ? -value : value;
    return n;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return make_unary(ExprKind::Neg, base());
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->number = value;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    ExprKind fn{};
    bool is_func = true;
    if (name == "sin")
      fn = ExprKind::Sin;
    else if (name == "cos")
      fn = ExprKind::Cos;
    else if (name == "exp")
      fn = ExprKind::Exp;
    else
      is_func = false;
    // A chart label shadows a function name only when not followed by '('.
    skip_ws();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (is_func && call) {
      ++pos_;
      NodePtr arg = expr();
      expect(')');
      return make_unary(fn, arg);
    }
    const int idx = chart_.index_of(name);
    if (idx < 0) throw UnknownIdentifier(name);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Var;
    n->var = idx;
    n->name = std::move(name);
    return n;
  }

  std::string_view src_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Number: return a.number == b.number;
    case ExprKind::Var: return a.var == b.var;
    case ExprKind::Pow: return a.exponent == b.exponent && nodes_equal(*a.lhs, *b.lhs);
    case ExprKind::Neg:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp: return nodes_equal(*a.lhs, *b.lhs);
    default: return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
  }
}

void print(const ExprNode& n, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* fn) {
    out += fn;
    out += '(';
    print(*n.lhs, out);
    out += ')';
  };
  switch (n.kind) {
    case ExprKind::Number: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n.number);
      out.append(buf, ptr);
      return;
    }
    case ExprKind::Var: out += n.name; return;
    case ExprKind::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      return;
    case ExprKind::Add: bin(" + "); return;
    case ExprKind::Sub: bin(" - "); return;
    case ExprKind::Mul: bin("*"); return;
    case ExprKind::Div: bin("/"); return;
    case ExprKind::Pow:
      out += "((";
      print(*n.lhs, out);
      out += ")^" + std::to_string(n.exponent) + ")";
      return;
    case ExprKind::Sin: call("sin"); return;
    case ExprKind::Cos: call("cos"); return;
    case ExprKind::Exp: call("exp"); return;
  }
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return nodes_equal(a.root(), b.root());
}

Expr parse_expr(std::string_view source, const Chart& chart) {
  if (source.empty()) throw ParseError("empty expression", 0);
  return Expr(Parser(source, chart).parse());
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e.root(), out);
  return out;
}

SmoothMap to_map(const std::vector<Expr>& exprs, std::size_t dim) {
  return SmoothMap(dim, exprs.size(), [exprs](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    for (std::size_t i = 0; i < exprs.size(); ++i) y[i] = exprs[i].eval<T>(x);
  });
}

SmoothMap parse_map(const std::vector<std::string>& sources, const Chart& chart) {
  std::vector<Expr> exprs;
  exprs.reserve(sources.size());
  for (const auto& s : sources) exprs.push_back(parse_expr(s, chart));
  return to_map(exprs, chart.dim());
}

}  // namespace nlg
