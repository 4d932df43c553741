#include "expr.hpp"

#include <cctype>

namespace qpfb::detail {

namespace {

struct Token {
  enum Kind { Ident, Number, Symbol, TensorMark, End };
  Kind kind = End;
  std::string text;
  int column = 0;
};

std::vector<Token> lex(const std::string& s, int column0, ExprMode mode) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    int col = column0 + static_cast<int>(i);
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (mode == ExprMode::Tensor && s.compare(i, 3, "(x)") == 0) {
      out.push_back({Token::TensorMark, "(x)", col});
      i += 3;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      if (j < s.size() && s[j] == '*') ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, s.substr(i, j - i), col});
      i = j;
    } else if (c == '+' || c == '-' || c == '^' || c == '/' || c == '(' || c == ')') {
      out.push_back({Token::Symbol, std::string(1, c), col});
      ++i;
    } else {
      throw ExprError{col, std::string("unexpected character '") + c + "'"};
    }
  }
  out.push_back({Token::End, "", column0 + static_cast<int>(s.size())});
  return out;
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, ExprMode mode) : toks_(std::move(toks)), mode_(mode) {}

  Node parse() {
    Node n = sum();
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
    return n;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool is_symbol(const char* s) const { return peek().kind == Token::Symbol && peek().text == s; }
  [[noreturn]] void fail(const std::string& msg) const { throw ExprError{peek().column, msg}; }

  Node sum() {
    Node acc;
    int col = peek().column;
    if (is_symbol("-")) {
      take();
      Node t = term();
      acc = Node{Node::Neg, {}, {}, 0, col, {std::move(t)}};
    } else {
      if (is_symbol("+")) take();
      acc = term();
    }
    while (is_symbol("+") || is_symbol("-")) {
      Node::Kind k = take().text == "+" ? Node::Add : Node::Sub;
      Node rhs = term();
      acc = Node{k, {}, {}, 0, col, {std::move(acc), std::move(rhs)}};
    }
    return acc;
  }

  Node term() {
    int col = peek().column;
    Node first = slot();
    if (peek().kind != Token::TensorMark) return first;
    Node t{Node::Tensor, {}, {}, 0, col, {std::move(first)}};
    while (peek().kind == Token::TensorMark) {
      take();
      t.kids.push_back(slot());
    }
    return t;
  }

  bool starts_factor() const {
    const Token& t = peek();
    return t.kind == Token::Ident || t.kind == Token::Number || (t.kind == Token::Symbol && t.text == "(");
  }

  Node slot() {
    int col = peek().column;
    if (!starts_factor()) fail(peek().kind == Token::End ? "expression ends early" : "unexpected '" + peek().text + "'");
    Node acc = factor();
    while (true) {
      if (is_symbol("/")) {
        take();
        if (!starts_factor()) fail("expected a divisor");
        Node rhs = factor();
        acc = Node{Node::Div, {}, {}, 0, col, {std::move(acc), std::move(rhs)}};
      } else if (starts_factor()) {
        Node rhs = factor();
        acc = Node{Node::Mul, {}, {}, 0, col, {std::move(acc), std::move(rhs)}};
      } else {
        return acc;
      }
    }
  }

  Node factor() {
    int col = peek().column;
    Node base = atom();
    if (!is_symbol("^")) return base;
    take();
    bool neg = false;
    if (is_symbol("-")) {
      take();
      neg = true;
    }
    if (peek().kind != Token::Number) fail("expected an integer exponent");
    int e = std::stoi(take().text);
    return Node{Node::Pow, {}, {}, neg ? -e : e, col, {std::move(base)}};
  }

  Node atom() {
    const Token& t = take();
    if (t.kind == Token::Number) return Node{Node::Num, Rational(t.text), {}, 0, t.column, {}};
    if (t.kind == Token::Ident) {
      if (mode_ == ExprMode::Form && t.text == "d" && is_symbol("(")) {
        take();
        Node inner = sum();
        if (!is_symbol(")")) fail("expected ')'");
        take();
        return Node{Node::D, {}, {}, 0, t.column, {std::move(inner)}};
      }
      return Node{Node::Ident, {}, t.text, 0, t.column, {}};
    }
    Node inner = sum();
    if (!is_symbol(")")) fail("expected ')'");
    take();
    return inner;
  }

  std::vector<Token> toks_;
  ExprMode mode_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse_expression(const std::string& text, int column0, ExprMode mode) {
  return ExprParser(lex(text, column0, mode), mode).parse();
}

}  // namespace qpfb::detail
