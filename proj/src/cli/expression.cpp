#include "genequo/cli/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "genequo/error.hpp"

namespace genequo::cli {

struct Expression::Node {
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Abs, Sin, Cos, Exp };
  Op op = Op::Const;
  double value = 0.0;
  int slot = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(const Vector& v) const {
    switch (op) {
      case Op::Const:
        return value;
      case Op::Var:
        return v[slot];
      case Op::Neg:
        return -lhs->eval(v);
      case Op::Add:
        return lhs->eval(v) + rhs->eval(v);
      case Op::Sub:
        return lhs->eval(v) - rhs->eval(v);
      case Op::Mul:
        return lhs->eval(v) * rhs->eval(v);
      case Op::Div:
        return lhs->eval(v) / rhs->eval(v);
      case Op::Pow:
        return std::pow(lhs->eval(v), rhs->eval(v));
      case Op::Abs:
        return std::abs(lhs->eval(v));
      case Op::Sin:
        return std::sin(lhs->eval(v));
      case Op::Cos:
        return std::cos(lhs->eval(v));
      case Op::Exp:
        return std::exp(lhs->eval(v));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars, const std::string& path)
      : s_(text), vars_(vars), path_(path) {}

  NodePtr run() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(path_, msg + " at column " + std::to_string(pos_ + 1) + " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+')) n = make(Node::Op::Add, n, term());
      else if (eat('-')) n = make(Node::Op::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Node::Op::Mul, n, unary());
      else if (eat('/')) n = make(Node::Op::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        Node::Op op;
        if (name == "abs") op = Node::Op::Abs;
        else if (name == "sin") op = Node::Op::Sin;
        else if (name == "cos") op = Node::Op::Cos;
        else if (name == "exp") op = Node::Op::Exp;
        else {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        ++pos_;
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(op, arg);
      }
      if (name == "pi") {
        auto n = std::make_shared<Node>();
        n->value = std::numbers::pi;
        return n;
      }
      // A bare prefix such as x stands for x1 when there is no x2.
      int slot = find(name);
      if (slot < 0 && find(name + "2") < 0) slot = find(name + "1");
      if (slot >= 0) {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Var;
        n->slot = slot;
        return n;
      }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  int find(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables,
                             const std::string& path) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, variables, path).run();
  return e;
}

double Expression::eval(const Vector& values) const { return root_->eval(values); }

std::vector<std::string> domain_variables(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

}  // namespace genequo::cli
