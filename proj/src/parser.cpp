#include "hamspray/parser.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace hamspray {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    current_ = Token{};
    current_.offset = pos_;
    if (pos_ >= src_.size()) {
      current_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
      if (end < src_.size() && src_[end] == '.') {
        ++end;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
      }
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t k = end + 1;
        if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
        if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
          while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
          end = k;
        }
      }
      current_.kind = Tok::Number;
      current_.text = std::string(src_.substr(pos_, end - pos_));
      if (current_.text == ".") throw SyntaxError(pos_, "number");
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      current_.kind = Tok::Ident;
      current_.text = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      return;
    }
    switch (c) {
      case '+': current_.kind = Tok::Plus; break;
      case '-': current_.kind = Tok::Minus; break;
      case '*': current_.kind = Tok::Star; break;
      case '/': current_.kind = Tok::Slash; break;
      case '^': current_.kind = Tok::Caret; break;
      case '(': current_.kind = Tok::LParen; break;
      case ')': current_.kind = Tok::RParen; break;
      default: throw SyntaxError(pos_, "expression");
    }
    current_.text = std::string(1, c);
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token current_;
};

// Decimal literal (with optional exponent) as an exact rational.
Rational parse_number(const std::string& text) {
  std::string mantissa = text;
  long long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    exp10 = std::stoll(text.substr(e + 1));
  }
  std::string digits;
  long long frac = 0;
  bool after_dot = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      after_dot = true;
      continue;
    }
    digits.push_back(ch);
    if (after_dot) ++frac;
  }
  // cpp_int reads a leading zero as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (digits.empty()) digits = "0";
  Rational value{boost::multiprecision::cpp_int(digits)};
  const long long shift = exp10 - frac;
  boost::multiprecision::cpp_int scale = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                    static_cast<unsigned>(shift < 0 ? -shift : shift));
  if (shift >= 0) {
    value *= Rational(scale);
  } else {
    value /= Rational(scale);
  }
  return value;
}

class Parser {
 public:
  Parser(std::string_view src, std::span<const Symbol> alphabet) : lex_(src), alphabet_(alphabet) {}

  Expr parse_all() {
    Expr e = expression(0);
    if (lex_.peek().kind != Tok::End) throw SyntaxError(lex_.peek().offset, "operator or end of input");
    return e;
  }

 private:
  static int left_bp(Tok t) {
    switch (t) {
      case Tok::Plus:
      case Tok::Minus: return 10;
      case Tok::Star:
      case Tok::Slash: return 20;
      case Tok::Caret: return 30;
      default: return 0;
    }
  }

  Expr expression(int min_bp) {
    Expr lhs = prefix();
    for (;;) {
      const Token& op = lex_.peek();
      const int bp = left_bp(op.kind);
      if (bp == 0 || bp <= min_bp) break;
      Token t = lex_.next();
      if (t.kind == Tok::Caret) {
        const std::size_t at = lex_.peek().offset;
        Expr rhs = expression(bp - 1);  // right associative
        if (!rhs.is_const()) throw SyntaxError(at, "constant exponent");
        lhs = pow(lhs, rhs.value());
        continue;
      }
      Expr rhs = expression(bp);
      switch (t.kind) {
        case Tok::Plus: lhs = lhs + rhs; break;
        case Tok::Minus: lhs = lhs - rhs; break;
        case Tok::Star: lhs = lhs * rhs; break;
        case Tok::Slash:
          if (rhs.is_literal_zero()) throw DomainError("division by zero");
          lhs = lhs / rhs;
          break;
        default: break;
      }
    }
    return lhs;
  }

  Expr prefix() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::Number: return Expr(parse_number(t.text));
      case Tok::Minus: return -expression(25);
      case Tok::Plus: return expression(25);
      case Tok::LParen: {
        Expr e = expression(0);
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: return identifier(t);
      default: throw SyntaxError(t.offset, "expression");
    }
  }

  Expr identifier(const Token& t) {
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      Expr arg = expression(0);
      expect(Tok::RParen, "')'");
      if (t.text == "sqrt") return sqrt(arg);
      if (auto f = func_from_name(t.text)) return apply(*f, arg);
      throw UnknownSymbol(t.text);
    }
    for (const auto& s : alphabet_)
      if (s.name() == t.text) return Expr(s);
    throw UnknownSymbol(t.text);
  }

  void expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) throw SyntaxError(lex_.peek().offset, what);
    lex_.next();
  }

  Lexer lex_;
  std::span<const Symbol> alphabet_;
};

}  // namespace

Expr parse(std::string_view src, std::span<const Symbol> alphabet) {
  return Parser(src, alphabet).parse_all();
}

}  // namespace hamspray
