#include "hardy/expression.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

struct Expression::Node {
  enum class Kind { constant, variable, conj, neg, add, sub, mul, div, pow };
  Kind kind;
  std::complex<double> value{};
  int exponent = 0;
  std::vector<std::shared_ptr<const Node>> args;

  std::complex<double> eval(std::complex<double> t) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::variable: return t;
      case Kind::conj: return std::conj(args[0]->eval(t));
      case Kind::neg: return -args[0]->eval(t);
      case Kind::add: return args[0]->eval(t) + args[1]->eval(t);
      case Kind::sub: return args[0]->eval(t) - args[1]->eval(t);
      case Kind::mul: return args[0]->eval(t) * args[1]->eval(t);
      case Kind::div: return args[0]->eval(t) / args[1]->eval(t);
      case Kind::pow: {
        const auto base = args[0]->eval(t);
        std::complex<double> acc = 1.0;
        for (int k = 0; k < std::abs(exponent); ++k) acc *= base;
        return exponent < 0 ? 1.0 / acc : acc;
      }
    }
    return {};
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, std::complex<double> value = {}, int exponent = 0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->value = value;
  n->exponent = exponent;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "symbol expression: " << what << " at position " << pos_ << " in '" << s_ << "'";
    throw InvalidArgument(os.str());
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

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Kind::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Kind::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) {
      skip();
      bool negative = false;
      if (accept('-')) negative = true;
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an integer exponent");
      const int e = std::atoi(s_.substr(start, pos_ - start).c_str());
      return make(Kind::pow, {base}, {}, negative ? -e : e);
    }
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      // 2i, 0.5i
      if (pos_ < s_.size() && s_[pos_] == 'i' && !ident_continues(pos_ + 1)) {
        ++pos_;
        return make(Kind::constant, {}, {0.0, v});
      }
      return make(Kind::constant, {}, {v, 0.0});
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "t") return make(Kind::variable);
      if (name == "i") return make(Kind::constant, {}, {0.0, 1.0});
      if (name == "conj") {
        expect('(');
        auto e = expr();
        expect(')');
        return make(Kind::conj, {e});
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  bool ident_continues(std::size_t p) const {
    return p < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_');
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}
Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

std::complex<double> Expression::operator()(std::complex<double> t) const { return root_->eval(t); }

}  // namespace hardy
