#include "hamspray/expr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>

namespace hamspray {

// ---------------------------------------------------------------------------
// Symbols

namespace {

struct SymbolRegistry {
  std::mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, int> ids;

  static SymbolRegistry& instance() {
    static SymbolRegistry registry;
    return registry;
  }
};

}  // namespace

Symbol::Symbol(std::string_view name) {
  auto& reg = SymbolRegistry::instance();
  std::lock_guard lock(reg.mutex);
  auto it = reg.ids.find(std::string(name));
  if (it != reg.ids.end()) {
    id_ = it->second;
    name_ = &reg.names[static_cast<std::size_t>(id_)];
    return;
  }
  id_ = static_cast<int>(reg.names.size());
  reg.names.emplace_back(name);
  name_ = &reg.names.back();
  reg.ids.emplace(std::string(name), id_);
}

const std::string& Symbol::invalid_name() {
  static const std::string invalid = "<invalid>";
  return invalid;
}

int Symbol::registry_size() {
  auto& reg = SymbolRegistry::instance();
  std::lock_guard lock(reg.mutex);
  return static_cast<int>(reg.names.size());
}

std::vector<Symbol> make_symbols(std::string_view prefix, int count) {
  std::vector<Symbol> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) out.emplace_back(std::string(prefix) + std::to_string(i));
  return out;
}

int compare_names(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      auto na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size() ? -1 : 1;
      if (int c = na.compare(nb); c != 0) return c < 0 ? -1 : 1;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j] ? -1 : 1;
    ++i;
    ++j;
  }
  if (a.size() - i == b.size() - j) return 0;
  return (a.size() - i) < (b.size() - j) ? -1 : 1;
}

std::string_view func_name(FuncId f) {
  switch (f) {
    case FuncId::Sin: return "sin";
    case FuncId::Cos: return "cos";
    case FuncId::Exp: return "exp";
    case FuncId::Log: return "log";
  }
  return "?";
}

std::optional<FuncId> func_from_name(std::string_view name) {
  if (name == "sin") return FuncId::Sin;
  if (name == "cos") return FuncId::Cos;
  if (name == "exp") return FuncId::Exp;
  if (name == "log") return FuncId::Log;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Node construction

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const Rational& q) {
  const double d = q.convert_to<double>();
  auto bits = std::bit_cast<std::uint64_t>(d);
  return static_cast<std::size_t>(bits);
}

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

}  // namespace

struct ExprFactory {
  static Expr make(detail::Node&& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u;
    switch (n.kind) {
      case Kind::Const: h = mix(h, hash_rational(n.value)); break;
      case Kind::Var: h = mix(h, static_cast<std::size_t>(n.sym.id()) * 2654435761u); break;
      case Kind::Pow: h = mix(mix(h, n.args[0].hash()), hash_rational(n.value)); break;
      case Kind::Func: h = mix(mix(h, static_cast<std::size_t>(n.fn)), n.args[0].hash()); break;
      case Kind::Mul:
      case Kind::Add:
        for (const auto& a : n.args) h = mix(h, a.hash());
        break;
    }
    n.hash = h;
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
  }
  static Expr constant(const Rational& q) {
    detail::Node n;
    n.kind = Kind::Const;
    n.value = q;
    return make(std::move(n));
  }
  static Expr var(Symbol s) {
    detail::Node n;
    n.kind = Kind::Var;
    n.sym = s;
    return make(std::move(n));
  }
  static Expr pow_node(Expr base, const Rational& e) {
    detail::Node n;
    n.kind = Kind::Pow;
    n.value = e;
    n.args.push_back(std::move(base));
    return make(std::move(n));
  }
  static Expr func_node(FuncId f, Expr arg) {
    detail::Node n;
    n.kind = Kind::Func;
    n.fn = f;
    n.args.push_back(std::move(arg));
    return make(std::move(n));
  }
  static Expr nary(Kind k, std::vector<Expr> args) {
    detail::Node n;
    n.kind = k;
    n.args = std::move(args);
    return make(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = ExprFactory::constant(Rational(0));
  return z;
}
const Expr& one_expr() {
  static const Expr o = ExprFactory::constant(Rational(1));
  return o;
}

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(int value) : Expr(value == 0 ? zero_expr() : value == 1 ? one_expr() : ExprFactory::constant(Rational(value))) {}
Expr::Expr(long value) : Expr(ExprFactory::constant(Rational(value))) {}
Expr::Expr(const Rational& value) : Expr(ExprFactory::constant(value)) {}
Expr::Expr(Symbol s) : Expr(ExprFactory::var(s)) {}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_literal_zero() const { return node_->kind == Kind::Const && node_->value == 0; }
bool Expr::is_literal_one() const { return node_->kind == Kind::Const && node_->value == 1; }

const Rational& Expr::value() const {
  if (node_->kind != Kind::Const && node_->kind != Kind::Pow)
    throw Error("Expr::value() on a node without a rational value");
  return node_->value;
}
Symbol Expr::symbol() const {
  if (node_->kind != Kind::Var) throw Error("Expr::symbol() on a non-variable");
  return node_->sym;
}
FuncId Expr::func() const {
  if (node_->kind != Kind::Func) throw Error("Expr::func() on a non-function");
  return node_->fn;
}
std::span<const Expr> Expr::children() const { return node_->args; }
std::size_t Expr::hash() const { return node_->hash; }

std::pair<Rational, Expr> Expr::split_coefficient() const {
  if (kind() == Kind::Const) return {value(), one_expr()};
  if (kind() == Kind::Mul && node_->args.front().kind() == Kind::Const) {
    const auto& args = node_->args;
    if (args.size() == 2) return {args[0].value(), args[1]};
    std::vector<Expr> rest(args.begin() + 1, args.end());
    return {args[0].value(), ExprFactory::nary(Kind::Mul, std::move(rest))};
  }
  return {Rational(1), *this};
}

// ---------------------------------------------------------------------------
// Ordering and equality

namespace {

int kind_rank(Kind k) {
  switch (k) {
    case Kind::Const: return 0;
    case Kind::Var: return 1;
    case Kind::Func: return 2;
    case Kind::Pow: return 3;
    case Kind::Mul: return 4;
    case Kind::Add: return 5;
  }
  return 6;
}

int compare_rational(const Rational& a, const Rational& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int compare_nonpow(const Expr& a, const Expr& b);

// Every expression is compared as base^exponent, so factors of a product
// sort by their base first.
int compare_impl(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  const bool pa = a.kind() == Kind::Pow;
  const bool pb = b.kind() == Kind::Pow;
  if (!pa && !pb) return compare_nonpow(a, b);
  const Expr& ba = pa ? a.base() : a;
  const Expr& bb = pb ? b.base() : b;
  int c = compare_impl(ba, bb);
  if (c != 0) return c;
  static const Rational one(1);
  const Rational& ea = pa ? a.value() : one;
  const Rational& eb = pb ? b.value() : one;
  return compare_rational(ea, eb);
}

int compare_nonpow(const Expr& a, const Expr& b) {
  const int ka = kind_rank(a.kind()), kb = kind_rank(b.kind());
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (a.kind()) {
    case Kind::Const: return compare_rational(a.value(), b.value());
    case Kind::Var: return compare_names(a.symbol().name(), b.symbol().name());
    case Kind::Func:
      if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
      return compare_impl(a.children()[0], b.children()[0]);
    case Kind::Mul:
    case Kind::Add: {
      auto ca = a.children(), cb = b.children();
      const std::size_t n = std::min(ca.size(), cb.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare_impl(ca[i], cb[i]); c != 0) return c;
      if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
      return 0;
    }
    case Kind::Pow: break;
  }
  return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b) { return compare_impl(a, b); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Canonical constructors

namespace {

Expr term_from(const Rational& c, const Expr& rest) {
  if (c == 1) return rest;
  if (rest.is_literal_one()) return Expr(c);
  std::vector<Expr> args;
  args.emplace_back(c);
  if (rest.kind() == Kind::Mul) {
    auto ch = rest.children();
    args.insert(args.end(), ch.begin(), ch.end());
  } else {
    args.push_back(rest);
  }
  return ExprFactory::nary(Kind::Mul, std::move(args));
}

// Exact r-th root of a non-negative integer, if it exists.
std::optional<boost::multiprecision::cpp_int> exact_root(const boost::multiprecision::cpp_int& v, unsigned r) {
  using boost::multiprecision::cpp_int;
  if (v < 0) return std::nullopt;
  if (v < 2) return v;
  const double approx = std::pow(v.convert_to<double>(), 1.0 / r);
  if (!std::isfinite(approx)) return std::nullopt;
  const auto guess = static_cast<long long>(std::llround(approx));
  for (long long c = std::max(0LL, guess - 2); c <= guess + 2; ++c) {
    cpp_int p = 1;
    for (unsigned i = 0; i < r; ++i) p *= c;
    if (p == v) return cpp_int(c);
  }
  return std::nullopt;
}

Rational rational_int_pow(const Rational& q, long long n) {
  using boost::multiprecision::pow;
  if (n >= 0) {
    return Rational(pow(boost::multiprecision::numerator(q), static_cast<unsigned>(n)),
                    pow(boost::multiprecision::denominator(q), static_cast<unsigned>(n)));
  }
  const auto m = static_cast<unsigned>(-n);
  return Rational(pow(boost::multiprecision::denominator(q), m), pow(boost::multiprecision::numerator(q), m));
}

Expr expand_product(const std::vector<Expr>& lhs_terms, const std::vector<Expr>& rhs_terms);

std::vector<Expr> terms_of(const Expr& e) {
  if (e.kind() == Kind::Add) return {e.children().begin(), e.children().end()};
  return {e};
}

Expr const_pow(const Rational& q, const Rational& e) {
  if (is_integer(e)) {
    const long long n = boost::multiprecision::numerator(e).convert_to<long long>();
    if (q == 0 && n < 0) throw DomainError("division by zero");
    return Expr(rational_int_pow(q, n));
  }
  if (q == 0) {
    if (e < 0) throw DomainError("division by zero");
    return Expr(0);
  }
  if (q == 1) return Expr(1);
  if (q > 0) {
    const auto den = boost::multiprecision::denominator(e);
    if (den <= 16) {
      const unsigned r = den.convert_to<unsigned>();
      auto rn = exact_root(boost::multiprecision::numerator(q), r);
      auto rd = exact_root(boost::multiprecision::denominator(q), r);
      if (rn && rd) {
        const long long num = boost::multiprecision::numerator(e).convert_to<long long>();
        return Expr(rational_int_pow(Rational(*rn, *rd), num));
      }
    }
  }
  return ExprFactory::pow_node(Expr(q), e);
}

}  // namespace

Expr add(std::vector<Expr> terms) {
  Rational constant = 0;
  std::vector<std::pair<Expr, Rational>> items;
  items.reserve(terms.size());
  auto push = [&](const Expr& t) {
    if (t.kind() == Kind::Const) {
      constant += t.value();
    } else {
      auto [c, rest] = t.split_coefficient();
      items.emplace_back(std::move(rest), std::move(c));
    }
  };
  for (const auto& t : terms) {
    if (t.kind() == Kind::Add) {
      for (const auto& c : t.children()) push(c);
    } else {
      push(t);
    }
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expr> out;
  out.reserve(items.size() + 1);
  if (constant != 0) out.emplace_back(constant);
  for (std::size_t i = 0; i < items.size();) {
    Rational c = items[i].second;
    std::size_t j = i + 1;
    while (j < items.size() && items[j].first == items[i].first) c += items[j++].second;
    if (c != 0) out.push_back(term_from(c, items[i].first));
    i = j;
  }
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out.front();
  return ExprFactory::nary(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> factors) {
  Rational coeff = 1;
  std::vector<std::pair<Expr, Rational>> bases;
  std::vector<Expr> stack = std::move(factors);
  while (!stack.empty()) {
    Expr f = std::move(stack.back());
    stack.pop_back();
    switch (f.kind()) {
      case Kind::Const:
        coeff *= f.value();
        break;
      case Kind::Mul:
        for (const auto& c : f.children()) stack.push_back(c);
        break;
      case Kind::Pow:
        bases.emplace_back(f.base(), f.value());
        break;
      default:
        bases.emplace_back(f, Rational(1));
        break;
    }
  }
  if (coeff == 0) return Expr(0);
  std::stable_sort(bases.begin(), bases.end(),
                   [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });

  std::vector<Expr> plain;
  std::vector<Expr> sums;
  bool again = false;
  std::vector<Expr> reflatten;
  for (std::size_t i = 0; i < bases.size();) {
    Rational e = bases[i].second;
    std::size_t j = i + 1;
    while (j < bases.size() && bases[j].first == bases[i].first) e += bases[j++].second;
    if (e != 0) {
      const Expr& b = bases[i].first;
      Expr p = (e == 1) ? b : pow(b, e);
      switch (p.kind()) {
        case Kind::Const: coeff *= p.value(); break;
        case Kind::Add: sums.push_back(std::move(p)); break;
        case Kind::Mul:
          again = true;
          reflatten.push_back(std::move(p));
          break;
        default: plain.push_back(std::move(p)); break;
      }
    }
    i = j;
  }
  if (again) {
    std::vector<Expr> all = std::move(plain);
    all.insert(all.end(), reflatten.begin(), reflatten.end());
    all.insert(all.end(), sums.begin(), sums.end());
    all.emplace_back(coeff);
    return mul(std::move(all));
  }
  if (coeff == 0) return Expr(0);

  Expr monomial;
  if (plain.empty()) {
    monomial = Expr(coeff);
  } else if (plain.size() == 1 && coeff == 1) {
    monomial = plain.front();
  } else {
    std::sort(plain.begin(), plain.end(), ExprLess{});
    std::vector<Expr> args;
    args.reserve(plain.size() + 1);
    if (coeff != 1) args.emplace_back(coeff);
    args.insert(args.end(), plain.begin(), plain.end());
    monomial = ExprFactory::nary(Kind::Mul, std::move(args));
  }
  if (sums.empty()) return monomial;
  std::vector<Expr> acc{monomial};
  for (const auto& s : sums) {
    Expr prod = expand_product(acc, terms_of(s));
    acc = terms_of(prod);
  }
  return add(std::move(acc));
}

namespace {

Expr expand_product(const std::vector<Expr>& lhs_terms, const std::vector<Expr>& rhs_terms) {
  std::vector<Expr> out;
  out.reserve(lhs_terms.size() * rhs_terms.size());
  for (const auto& a : lhs_terms)
    for (const auto& b : rhs_terms) out.push_back(mul({a, b}));
  return add(std::move(out));
}

}  // namespace

Expr pow(const Expr& base, const Rational& e) {
  if (e == 0) return Expr(1);
  if (e == 1) return base;
  switch (base.kind()) {
    case Kind::Const: return const_pow(base.value(), e);
    case Kind::Pow:
      if (is_integer(e)) return pow(base.base(), base.value() * e);
      break;
    case Kind::Mul:
      if (is_integer(e)) {
        std::vector<Expr> fs;
        for (const auto& c : base.children()) fs.push_back(pow(c, e));
        return mul(std::move(fs));
      }
      break;
    case Kind::Add:
      if (is_integer(e) && e > 0) {
        const auto n = boost::multiprecision::numerator(e).convert_to<long long>();
        const auto terms = terms_of(base);
        Expr acc = base;
        for (long long i = 1; i < n; ++i) acc = expand_product(terms_of(acc), terms);
        return acc;
      }
      break;
    default: break;
  }
  return ExprFactory::pow_node(base, e);
}

Expr pow(const Expr& base, int exponent) { return pow(base, Rational(exponent)); }

Expr apply(FuncId f, const Expr& arg) {
  if (arg.is_literal_zero()) {
    switch (f) {
      case FuncId::Sin: return Expr(0);
      case FuncId::Cos: return Expr(1);
      case FuncId::Exp: return Expr(1);
      case FuncId::Log: throw DomainError("log of zero");
    }
  }
  if (f == FuncId::Log && arg.is_literal_one()) return Expr(0);
  if (f == FuncId::Log && arg.is_const() && arg.value() < 0) throw DomainError("log of a negative constant");
  return ExprFactory::func_node(f, arg);
}

Expr sin(const Expr& e) { return apply(FuncId::Sin, e); }
Expr cos(const Expr& e) { return apply(FuncId::Cos, e); }
Expr exp(const Expr& e) { return apply(FuncId::Exp, e); }
Expr log(const Expr& e) { return apply(FuncId::Log, e); }
Expr sqrt(const Expr& e) { return pow(e, Rational(1, 2)); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_literal_zero()) return b;
  if (b.is_literal_zero()) return a;
  return add({a, b});
}
Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr(Rational(-a.value()));
  return mul({Expr(-1), a});
}
Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_literal_zero()) return a;
  return add({a, -b});
}
Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_literal_zero() || b.is_literal_zero()) return Expr(0);
  if (a.is_literal_one()) return b;
  if (b.is_literal_one()) return a;
  return mul({a, b});
}
Expr operator/(const Expr& a, const Expr& b) { return a * pow(b, -1); }

// ---------------------------------------------------------------------------
// Structural transforms

namespace {

template <class Fn>
Expr rebuild(const Expr& e, Fn&& child_map) {
  switch (e.kind()) {
    case Kind::Const: return e;
    case Kind::Var: return e;
    case Kind::Pow: return pow(child_map(e.base()), e.value());
    case Kind::Func: return apply(e.func(), child_map(e.children()[0]));
    case Kind::Mul: {
      std::vector<Expr> fs;
      for (const auto& c : e.children()) fs.push_back(child_map(c));
      return mul(std::move(fs));
    }
    case Kind::Add: {
      std::vector<Expr> ts;
      for (const auto& c : e.children()) ts.push_back(child_map(c));
      return add(std::move(ts));
    }
  }
  return e;
}

using Memo = std::unordered_map<const detail::Node*, Expr>;

Expr simplify_impl(const Expr& e, Memo& memo) {
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  Expr out = rebuild(e, [&](const Expr& c) { return simplify_impl(c, memo); });
  memo.emplace(e.node(), out);
  return out;
}

bool depends_impl(const Expr& e, int id, std::unordered_map<const detail::Node*, bool>& memo) {
  if (e.kind() == Kind::Const) return false;
  if (e.kind() == Kind::Var) return e.symbol().id() == id;
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  bool r = false;
  for (const auto& c : e.children())
    if (depends_impl(c, id, memo)) {
      r = true;
      break;
    }
  memo.emplace(e.node(), r);
  return r;
}

Expr diff_impl(const Expr& e, Symbol v, Memo& memo, std::unordered_map<const detail::Node*, bool>& dep) {
  if (!depends_impl(e, v.id(), dep)) return Expr(0);
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  Expr out;
  switch (e.kind()) {
    case Kind::Const: out = Expr(0); break;
    case Kind::Var: out = Expr(e.symbol() == v ? 1 : 0); break;
    case Kind::Add: {
      std::vector<Expr> ts;
      for (const auto& c : e.children()) ts.push_back(diff_impl(c, v, memo, dep));
      out = add(std::move(ts));
      break;
    }
    case Kind::Mul: {
      auto ch = e.children();
      std::vector<Expr> ts;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        Expr di = diff_impl(ch[i], v, memo, dep);
        if (di.is_literal_zero()) continue;
        std::vector<Expr> fs;
        for (std::size_t j = 0; j < ch.size(); ++j)
          if (j != i) fs.push_back(ch[j]);
        fs.push_back(std::move(di));
        ts.push_back(mul(std::move(fs)));
      }
      out = add(std::move(ts));
      break;
    }
    case Kind::Pow: {
      const Rational& q = e.value();
      out = mul({Expr(q), pow(e.base(), q - 1), diff_impl(e.base(), v, memo, dep)});
      break;
    }
    case Kind::Func: {
      const Expr& a = e.children()[0];
      Expr da = diff_impl(a, v, memo, dep);
      switch (e.func()) {
        case FuncId::Sin: out = cos(a) * da; break;
        case FuncId::Cos: out = -(sin(a) * da); break;
        case FuncId::Exp: out = e * da; break;
        case FuncId::Log: out = da / a; break;
      }
      break;
    }
  }
  memo.emplace(e.node(), out);
  return out;
}

Expr substitute_impl(const Expr& e, const Substitution& s, Memo& memo) {
  if (e.kind() == Kind::Const) return e;
  if (e.kind() == Kind::Var) {
    auto it = s.find(e.symbol().id());
    return it == s.end() ? e : it->second;
  }
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
  Expr out = rebuild(e, [&](const Expr& c) { return substitute_impl(c, s, memo); });
  memo.emplace(e.node(), out);
  return out;
}

}  // namespace

Expr simplify(const Expr& e) {
  Memo memo;
  return simplify_impl(e, memo);
}

Expr diff(const Expr& e, Symbol v) {
  Memo memo;
  std::unordered_map<const detail::Node*, bool> dep;
  return diff_impl(e, v, memo, dep);
}

Expr substitute(const Expr& e, const Substitution& s) {
  if (s.empty()) return e;
  Memo memo;
  return substitute_impl(e, s, memo);
}

bool depends_on(const Expr& e, Symbol v) {
  std::unordered_map<const detail::Node*, bool> memo;
  return depends_impl(e, v.id(), memo);
}

std::vector<Symbol> free_symbols(const Expr& e) {
  std::vector<Symbol> syms;
  std::unordered_map<const detail::Node*, bool> seen2;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (!seen2.emplace(x.node(), true).second) return;
    if (x.kind() == Kind::Var) {
      syms.push_back(x.symbol());
      return;
    }
    for (const auto& c : x.children()) walk(c);
  };
  walk(e);
  std::sort(syms.begin(), syms.end(), [](Symbol a, Symbol b) { return compare_names(a.name(), b.name()) < 0; });
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  return syms;
}

// ---------------------------------------------------------------------------
// Evaluation

void Bindings::set(Symbol s, double value) {
  const auto id = static_cast<std::size_t>(s.id());
  if (values_.size() <= id) values_.resize(id + 1, std::numeric_limits<double>::quiet_NaN());
  values_[id] = value;
}

double Bindings::get(Symbol s) const {
  const auto id = static_cast<std::size_t>(s.id());
  if (id >= values_.size()) return std::numeric_limits<double>::quiet_NaN();
  return values_[id];
}

bool Bindings::bound(Symbol s) const { return !std::isnan(get(s)); }

namespace {

double eval_impl(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case Kind::Const: return e.value().convert_to<double>();
    case Kind::Var: {
      const double v = b.get(e.symbol());
      if (std::isnan(v)) throw Error("unbound symbol '" + e.symbol().name() + "'");
      return v;
    }
    case Kind::Add: {
      double s = 0;
      for (const auto& c : e.children()) s += eval_impl(c, b);
      return s;
    }
    case Kind::Mul: {
      double p = 1;
      for (const auto& c : e.children()) p *= eval_impl(c, b);
      return p;
    }
    case Kind::Pow: {
      const double base = eval_impl(e.base(), b);
      const Rational& q = e.value();
      if (is_integer(q)) {
        const auto n = boost::multiprecision::numerator(q).convert_to<long long>();
        if (base == 0 && n < 0) throw DomainError("division by zero");
        double r = 1, x = base;
        auto m = n < 0 ? -n : n;
        while (m > 0) {
          if (m & 1) r *= x;
          x *= x;
          m >>= 1;
        }
        return n < 0 ? 1.0 / r : r;
      }
      if (base < 0) throw DomainError("fractional power of a negative number");
      if (base == 0 && q < 0) throw DomainError("division by zero");
      if (q == Rational(1, 2)) return std::sqrt(base);
      return std::pow(base, q.convert_to<double>());
    }
    case Kind::Func: {
      const double a = eval_impl(e.children()[0], b);
      switch (e.func()) {
        case FuncId::Sin: return std::sin(a);
        case FuncId::Cos: return std::cos(a);
        case FuncId::Exp: return std::exp(a);
        case FuncId::Log:
          if (a <= 0) throw DomainError("log of a non-positive number");
          return std::log(a);
      }
    }
  }
  return 0;
}

}  // namespace

double eval(const Expr& e, const Bindings& b) {
  const double v = eval_impl(e, b);
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  return v;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(q);
  if (boost::multiprecision::denominator(q) != 1) os << "/" << boost::multiprecision::denominator(q);
  return os.str();
}

std::string print(const Expr& e);

bool is_simple_atom(const Expr& e) {
  if (e.kind() == Kind::Var || e.kind() == Kind::Func) return true;
  if (e.kind() == Kind::Const) return e.value() >= 0 && is_integer(e.value());
  return false;
}

// Prints base^|q| for a power appearing in a product (numerator or denominator).
std::string print_power(const Expr& base, const Rational& q) {
  if (q == 1) return is_simple_atom(base) ? print(base) : "(" + print(base) + ")";
  if (q == Rational(1, 2)) return "sqrt(" + print(base) + ")";
  std::string b = is_simple_atom(base) ? print(base) : "(" + print(base) + ")";
  if (is_integer(q) && q > 0) return b + "^" + rational_str(q);
  return b + "^(" + rational_str(q) + ")";
}

std::string print_mul(const Expr& e) {
  auto [c, rest] = e.split_coefficient();
  std::vector<std::string> num, den;
  auto visit = [&](const Expr& f) {
    if (f.kind() == Kind::Pow && f.value() < 0) {
      den.push_back(print_power(f.base(), -f.value()));
    } else if (f.kind() == Kind::Pow) {
      num.push_back(print_power(f.base(), f.value()));
    } else {
      num.push_back(print_power(f, 1));
    }
  };
  if (rest.kind() == Kind::Mul) {
    for (const auto& f : rest.children()) visit(f);
  } else {
    visit(rest);
  }
  std::string out;
  const bool neg = c < 0;
  const Rational ac = neg ? Rational(-c) : c;
  if (neg) out += "-";
  bool first = true;
  if (ac != 1 || num.empty()) {
    out += rational_str(ac);
    first = false;
  }
  for (const auto& s : num) {
    if (!first) out += "*";
    out += s;
    first = false;
  }
  if (!den.empty()) {
    out += "/";
    if (den.size() == 1) {
      out += den.front();
    } else {
      out += "(";
      for (std::size_t i = 0; i < den.size(); ++i) out += (i ? "*" : "") + den[i];
      out += ")";
    }
  }
  return out;
}

std::string print(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: return rational_str(e.value());
    case Kind::Var: return e.symbol().name();
    case Kind::Func: return std::string(func_name(e.func())) + "(" + print(e.children()[0]) + ")";
    case Kind::Pow:
    case Kind::Mul: return print_mul(e);
    case Kind::Add: {
      std::string out;
      bool first = true;
      for (const auto& t : e.children()) {
        auto [c, rest] = t.split_coefficient();
        if (first) {
          out += print(t);
        } else if (c < 0) {
          out += " - " + print(-t);
        } else {
          out += " + " + print(t);
        }
        first = false;
      }
      return out;
    }
  }
  return "";
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << print(e); }

}  // namespace hamspray
