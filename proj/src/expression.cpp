#include "ektau/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "ektau/errors.hpp"

namespace ektau {

struct Expression::Node {
  enum class Kind { Number, VarU, VarV, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string function;
  std::shared_ptr<const Node> lhs, rhs;

  template <class S>
  S eval(const S& u, const S& v) const {
    using std::atan;
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    using std::tan;
    switch (kind) {
      case Kind::Number: return S(number);
      case Kind::VarU: return u;
      case Kind::VarV: return v;
      case Kind::Neg: return -lhs->eval(u, v);
      case Kind::Add: return lhs->eval(u, v) + rhs->eval(u, v);
      case Kind::Sub: return lhs->eval(u, v) - rhs->eval(u, v);
      case Kind::Mul: return lhs->eval(u, v) * rhs->eval(u, v);
      case Kind::Div: return lhs->eval(u, v) / rhs->eval(u, v);
      case Kind::Pow: {
        const S base = lhs->eval(u, v);
        const double e = rhs->number;
        const double r = std::round(e);
        if (e == r && std::abs(r) <= 16) {
          S acc(1.0);
          for (int i = 0; i < std::abs(static_cast<int>(r)); ++i) acc = acc * base;
          return r < 0 ? S(1.0) / acc : acc;
        }
        return pow(base, e);
      }
      case Kind::Call: {
        const S a = lhs->eval(u, v);
        if (function == "sin") return sin(a);
        if (function == "cos") return cos(a);
        if (function == "tan") return tan(a);
        if (function == "exp") return exp(a);
        if (function == "log") return log(a);
        if (function == "sqrt") return sqrt(a);
        if (function == "sinh") return sinh(a);
        if (function == "cosh") return cosh(a);
        return atan(a);
      }
    }
    return S(0.0);
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (accept('+')) n = make(Kind::Add, n, product());
      else if (accept('-')) n = make(Kind::Sub, n, product());
      else return n;
    }
  }
  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Kind::Mul, n, unary());
      else if (accept('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) {
      NodePtr e = unary();
      if (e->kind == Kind::Neg && e->lhs->kind == Kind::Number) {
        auto c = std::make_shared<Expression::Node>();
        c->number = -e->lhs->number;
        e = c;
      }
      if (e->kind != Kind::Number) fail("exponent must be a constant");
      return make(Kind::Pow, base, e);
    }
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double val = 0.0;
      try {
        val = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Expression::Node>();
      n->number = val;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "u") return make(Kind::VarU);
      if (id == "v") return make(Kind::VarV);
      if (id == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->number = std::numbers::pi;
        return n;
      }
      static const std::vector<std::string> fns{"sin", "cos", "tan", "exp", "log",
                                                "sqrt", "sinh", "cosh", "atan"};
      for (const auto& f : fns) {
        if (id == f) {
          if (!accept('(')) fail("expected '(' after " + id);
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Call;
          n->function = id;
          n->lhs = sum();
          if (!accept(')')) fail("expected ')'");
          return n;
        }
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

Jet2 Expression::operator()(const Jet2& u, const Jet2& v) const { return root_->eval(u, v); }

double Expression::operator()(double u, double v) const { return root_->eval(u, v); }

}  // namespace ektau
