#include "blendcurv/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>

namespace blendcurv {

namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(const Eigen::VectorXd& x) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Constant : Node {
  explicit Constant(double v) : value(v) {}
  double eval(const Eigen::VectorXd&) const override { return value; }
  double value;
};

struct Coordinate : Node {
  explicit Coordinate(int i) : index(i) {}
  double eval(const Eigen::VectorXd& x) const override { return x[index]; }
  int index;
};

struct Binary : Node {
  Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
  double eval(const Eigen::VectorXd& x) const override {
    const double a = lhs->eval(x), b = rhs->eval(x);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      default: return a / b;
    }
  }
  char op;
  NodePtr lhs, rhs;
};

struct Unary : Node {
  Unary(int k, NodePtr a) : kind(k), arg(std::move(a)) {}
  double eval(const Eigen::VectorXd& x) const override {
    const double v = arg->eval(x);
    switch (kind) {
      case 0: return -v;
      case 1: return std::sin(v);
      case 2: return std::cos(v);
      default: return std::exp(v);
    }
  }
  int kind;  // 0 neg, 1 sin, 2 cos, 3 exp
  NodePtr arg;
};

class Parser {
 public:
  Parser(const std::string& text, int dim) : s_(text), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        const char op = s_[pos_++];
        lhs = std::make_shared<Binary>(op, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      skip_ws();
      if (peek() == '*' || peek() == '/') {
        const char op = s_[pos_++];
        lhs = std::make_shared<Binary>(op, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return std::make_shared<Unary>(0, unary());
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("expected a number, coordinate, function, or '('");
    return nullptr;
  }

  NodePtr number() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
            s_[end] == 'e' || s_[end] == 'E' ||
            ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
             (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    try {
      const double v = std::stod(s_.substr(pos_, end - pos_));
      pos_ = end;
      return std::make_shared<Constant>(v);
    } catch (const std::exception&) {
      fail("malformed number");
      return nullptr;
    }
  }

  NodePtr identifier() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      ++end;
    const std::string name = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (name == "pi") return std::make_shared<Constant>(M_PI);
    if (name == "sin" || name == "cos" || name == "exp") {
      expect('(');
      NodePtr arg = expr();
      expect(')');
      const int kind = name == "sin" ? 1 : (name == "cos" ? 2 : 3);
      return std::make_shared<Unary>(kind, arg);
    }
    if (name.size() >= 2 && name[0] == 'x') {
      try {
        const int idx = std::stoi(name.substr(1));
        if (idx >= 1 && idx <= dim_) return std::make_shared<Coordinate>(idx - 1);
      } catch (const std::exception&) {
      }
      fail("coordinate '" + name + "' out of range (x1..x" +
           std::to_string(dim_) + ")");
    }
    fail("unknown identifier '" + name + "'");
    return nullptr;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos_) + ": " + what + " in \"" +
                                s_ + "\"");
  }

  const std::string& s_;
  int dim_;
  size_t pos_ = 0;
};

}  // namespace

ScalarField parse_expression(const std::string& text, int dim) {
  NodePtr root = Parser(text, dim).parse();
  return [root](const Eigen::VectorXd& x) { return root->eval(x); };
}

double evaluate_expression(const std::string& text, const Eigen::VectorXd& x) {
  return parse_expression(text, static_cast<int>(x.size()))(x);
}

}  // namespace blendcurv
