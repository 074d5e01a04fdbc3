#pragma once

/// \file
/// Immutable symbolic expressions over chart variables.
///
/// Every `Expr` is kept in canonical form by its constructors: sums and
/// products are flattened, sorted by a fixed total order and fully expanded
/// over non-polynomial atoms (function applications and powers of sums with
/// negative or fractional exponents). Rational constants stay exact.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hamspray/errors.hpp"

namespace hamspray {

using Rational = boost::multiprecision::cpp_rational;

/// Interned variable name. Cheap to copy; compares by identity.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view name);

  int id() const { return id_; }
  const std::string& name() const { return *name_; }
  bool valid() const { return id_ >= 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }

  /// Number of symbols interned so far (an upper bound on every id).
  static int registry_size();

 private:
  int id_ = -1;
  const std::string* name_ = &invalid_name();
  static const std::string& invalid_name();
};

std::vector<Symbol> make_symbols(std::string_view prefix, int count);

enum class Kind : std::uint8_t { Const, Var, Pow, Func, Mul, Add };
enum class FuncId : std::uint8_t { Sin, Cos, Exp, Log };

std::string_view func_name(FuncId f);
std::optional<FuncId> func_from_name(std::string_view name);

class Expr;

namespace detail {
struct Node;
}

class Expr {
 public:
  Expr();  // literal zero
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
  explicit Expr(Symbol s);

  Kind kind() const;
  bool is_const() const { return kind() == Kind::Const; }
  bool is_literal_zero() const;
  bool is_literal_one() const;
  /// Constant value, exponent of a Pow, or throws for other kinds.
  const Rational& value() const;
  Symbol symbol() const;
  FuncId func() const;
  std::span<const Expr> children() const;
  /// Base of a Pow node.
  const Expr& base() const { return children()[0]; }
  std::size_t hash() const;

  /// Split `c * rest` with c the rational coefficient.
  std::pair<Rational, Expr> split_coefficient() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }

  const detail::Node* node() const { return node_.get(); }

 private:
  friend struct ExprFactory;
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  Kind kind;
  std::size_t hash = 0;
  Rational value;  // Const value or Pow exponent
  Symbol sym;
  FuncId fn = FuncId::Sin;
  std::vector<Expr> args;
};
}  // namespace detail

/// Total order on canonical expressions (negative, zero, positive).
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Rational& exponent);
Expr pow(const Expr& base, int exponent);
Expr apply(FuncId f, const Expr& arg);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

/// Rebuild `e` from scratch through the canonical constructors.
Expr simplify(const Expr& e);

Expr diff(const Expr& e, Symbol v);

using Substitution = std::unordered_map<int, Expr>;  // symbol id -> replacement
Expr substitute(const Expr& e, const Substitution& s);

bool depends_on(const Expr& e, Symbol v);
/// Free symbols, sorted by name.
std::vector<Symbol> free_symbols(const Expr& e);

/// Numeric values bound to symbols; unbound entries are NaN.
class Bindings {
 public:
  Bindings() = default;
  void set(Symbol s, double value);
  double get(Symbol s) const;
  bool bound(Symbol s) const;

 private:
  std::vector<double> values_;
};

double eval(const Expr& e, const Bindings& b);

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Natural ordering on names: "x2" < "x10".
int compare_names(std::string_view a, std::string_view b);

}  // namespace hamspray
