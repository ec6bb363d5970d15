#include "toricwall/expr.hpp"

#include <cctype>
#include <cstdlib>

#include "toricwall/exact.hpp"

namespace tw {

struct Expr::Node {
  enum Kind { Num, Var, Add, Sub, Mul, Div, Neg, Pow } kind;
  cplx value{};
  long p = 1, q = 1;  // exponent p/q for Pow
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

NodeP make(Expr::Node::Kind k, NodeP a = nullptr, NodeP b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, const std::string& var) : s_(s), var_(var) {}

  NodeP parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  const std::string& s_;
  std::string var_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("ExpressionSyntax", "cli", what + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const char* tok) {
    skip();
    size_t len = std::char_traits<char>::length(tok);
    if (s_.compare(pos_, len, tok) == 0) {
      pos_ += len;
      return true;
    }
    return false;
  }
  bool plus() { return eat("+"); }
  bool minus() { return eat("-") || eat("\xE2\x88\x92"); }
  bool times() { return eat("*") || eat("\xC3\x97"); }
  bool divide() { return eat("/") || eat("\xC3\xB7"); }

  NodeP expr() {
    auto n = term();
    while (true) {
      if (plus())
        n = make(Expr::Node::Add, n, term());
      else if (minus())
        n = make(Expr::Node::Sub, n, term());
      else
        return n;
    }
  }
  NodeP term() {
    auto n = unary();
    while (true) {
      if (times())
        n = make(Expr::Node::Mul, n, unary());
      else if (divide())
        n = make(Expr::Node::Div, n, unary());
      else
        return n;
    }
  }
  NodeP unary() {
    if (minus()) return make(Expr::Node::Neg, unary());
    if (plus()) return unary();
    return power();
  }
  NodeP power() {
    auto base = primary();
    if (!eat("^")) return base;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Pow;
    n->a = base;
    bool paren = eat("(");
    bool neg = minus();
    long p = integer();
    long q = 1;
    if (divide()) q = integer();
    if (paren && !eat(")")) fail("expected ')' after exponent");
    if (q == 0) fail("zero denominator in exponent");
    n->p = neg ? -p : p;
    n->q = q;
    return n;
  }
  long integer() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    return std::stol(s_.substr(start, pos_ - start));
  }
  NodeP primary() {
    skip();
    if (eat("(")) {
      auto n = expr();
      if (!eat(")")) fail("expected ')'");
      return n;
    }
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      pos_ += static_cast<size_t>(end - begin);
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Num;
      n->value = v;
      return n;
    }
    if (s_.compare(pos_, var_.size(), var_) == 0) {
      size_t after = pos_ + var_.size();
      if (after == s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[after])) || s_[after] == '_')) {
        pos_ = after;
        return make(Expr::Node::Var);
      }
    }
    // the imaginary unit, so that complex paths such as i*s can be written
    if (s_[pos_] == 'i' && (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Num;
      n->value = cplx(0.0, 1.0);
      return n;
    }
    fail("expected number, '" + var_ + "' or '('");
  }
};

Dual ipow(Dual x, long k) {
  if (k < 0) {
    Dual r = ipow(x, -k);
    return {1.0 / r.v, -r.d / (r.v * r.v)};
  }
  Dual r{1.0, 0.0};
  for (long i = 0; i < k; ++i) r = {r.v * x.v, r.d * x.v + r.v * x.d};
  return r;
}

Dual eval_node(const Expr::Node& n, cplx x) {
  switch (n.kind) {
    case Expr::Node::Num:
      return {n.value, 0.0};
    case Expr::Node::Var:
      return {x, 1.0};
    case Expr::Node::Add: {
      Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v + b.v, a.d + b.d};
    }
    case Expr::Node::Sub: {
      Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v - b.v, a.d - b.d};
    }
    case Expr::Node::Mul: {
      Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    case Expr::Node::Div: {
      Dual a = eval_node(*n.a, x), b = eval_node(*n.b, x);
      return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
    case Expr::Node::Neg: {
      Dual a = eval_node(*n.a, x);
      return {-a.v, -a.d};
    }
    case Expr::Node::Pow: {
      Dual a = eval_node(*n.a, x);
      if (n.q == 1) return ipow(a, n.p);
      double e = static_cast<double>(n.p) / static_cast<double>(n.q);
      cplx v = std::exp(e * std::log(a.v));
      return {v, e * v / a.v * a.d};
    }
  }
  return {0.0, 0.0};
}

}  // namespace

Expr Expr::parse(const std::string& text, const std::string& variable) {
  Expr e;
  Parser p(text, variable);
  e.root_ = p.parse();
  e.text_ = text;
  return e;
}

Expr Expr::constant(cplx c) {
  Expr e;
  auto n = std::make_shared<Node>();
  n->kind = Node::Num;
  n->value = c;
  e.root_ = n;
  e.text_ = "const";
  return e;
}

Dual Expr::eval_dual(cplx x) const { return eval_node(*root_, x); }

}  // namespace tw
