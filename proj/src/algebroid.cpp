#include "hamspray/algebroid.hpp"

namespace hamspray {

AlgebroidChart::AlgebroidChart(std::vector<Symbol> x, std::vector<Symbol> y)
    : x_(std::move(x)), y_(std::move(y)) {
  rho_ = zeros(n(), r());
  C_.assign(r(), zeros(r(), r()));
}

std::vector<Symbol> AlgebroidChart::coords() const {
  std::vector<Symbol> out = x_;
  out.insert(out.end(), y_.begin(), y_.end());
  return out;
}

void AlgebroidChart::set_rho(int i, int j, const Expr& e) {
  for (auto s : y_)
    if (depends_on(e, s)) throw Error("anchor component depends on fiber coordinate " + s.name());
  rho_(i, j) = e;
}

void AlgebroidChart::set_C(int k, int i, int j, const Expr& e) {
  if (i == j) {
    if (!e.is_literal_zero()) throw Error("structure function C^k_ii must vanish");
    return;
  }
  for (auto s : y_)
    if (depends_on(e, s)) throw Error("structure function depends on fiber coordinate " + s.name());
  C_[k](i, j) = e;
  C_[k](j, i) = -e;
}

Frame AlgebroidChart::frame() const {
  Frame f;
  f.vars = x_;
  f.anchor = rho_.transpose();
  f.structure = C_;
  return f;
}

ValidationReport validate_structure(const AlgebroidChart& A, const Box& box, const SampleOptions& opt) {
  const int n = A.n(), r = A.r();
  std::vector<std::pair<std::string, Expr>> residuals;
  auto dx = [&](const Expr& e, int i) { return diff(e, A.x()[i]); };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < r; ++j)
      for (int l = j + 1; l < r; ++l) {
        std::vector<Expr> terms;
        for (int i = 0; i < n; ++i) {
          terms.push_back(A.rho(i, j) * dx(A.rho(k, l), i));
          terms.push_back(-A.rho(i, l) * dx(A.rho(k, j), i));
        }
        for (int i = 0; i < r; ++i) terms.push_back(-A.rho(k, i) * A.C(i, j, l));
        residuals.emplace_back("anchor[" + std::to_string(k + 1) + ";" + std::to_string(j + 1) + "," +
                                   std::to_string(l + 1) + "]",
                               add(std::move(terms)));
      }
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < r; ++j)
      for (int l = j + 1; l < r; ++l)
        for (int s = l + 1; s < r; ++s) {
          std::vector<Expr> terms;
          const int cyc[3][3] = {{j, l, s}, {l, s, j}, {s, j, l}};
          for (const auto& c : cyc) {
            for (int i = 0; i < n; ++i) terms.push_back(A.rho(i, c[0]) * dx(A.C(k, c[1], c[2]), i));
            for (int t = 0; t < r; ++t) terms.push_back(A.C(t, c[1], c[2]) * A.C(k, c[0], t));
          }
          residuals.emplace_back("jacobi[" + std::to_string(k + 1) + ";" + std::to_string(j + 1) + "," +
                                     std::to_string(l + 1) + "," + std::to_string(s + 1) + "]",
                                 add(std::move(terms)));
        }
  return check_all("structure", residuals, box, opt);
}

AForm d_A(const AlgebroidChart& A, const AForm& theta) {
  if (theta.degree() > 2) throw DegreeError("d_A is provided up to degree 2");
  if (theta.dim() != A.r()) throw DegreeError("form rank does not match the algebroid");
  return koszul(A.frame(), theta);
}

Fixture tangent(int n, std::optional<ExprMatrix> metric) {
  Fixture f;
  f.name = "tangent(" + std::to_string(n) + ")";
  f.chart = AlgebroidChart(make_symbols("x", n), make_symbols("y", n));
  for (int i = 0; i < n; ++i) f.chart.set_rho(i, i, Expr(1));
  ExprMatrix g = metric ? *metric : identity(n);
  if (g.rows() != n || g.cols() != n) throw InvalidFixtureParam("metric must be n x n");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g(i, j) != g(j, i)) throw InvalidFixtureParam("metric is not symmetric");
  if (metric) f.name += " metric";
  std::vector<Expr> terms;
  const auto& y = f.chart.y();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) terms.push_back(Expr(Rational(1, 2)) * g(i, j) * Expr(y[i]) * Expr(y[j]));
  f.L = add(std::move(terms));
  f.theta = AForm(n, 2);
  if (n >= 2) f.theta.set({0, 1}, Expr(1));
  return f;
}

namespace {

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

}  // namespace

Fixture action_so3() {
  Fixture f;
  f.name = "action_so3";
  f.chart = AlgebroidChart(make_symbols("x", 3), make_symbols("y", 3));
  const auto& x = f.chart.x();
  for (int j = 0; j < 3; ++j)
    for (int a = 0; a < 3; ++a) {
      std::vector<Expr> terms;
      for (int b = 0; b < 3; ++b)
        if (int e = levi_civita(j, a, b)) terms.push_back(Expr(e) * Expr(x[b]));
      f.chart.set_rho(a, j, add(std::move(terms)));
    }
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) f.chart.set_C(k, i, j, Expr(levi_civita(i, j, k)));
  std::vector<Expr> terms;
  for (auto s : f.chart.y()) terms.push_back(Expr(Rational(1, 2)) * Expr(s) * Expr(s));
  f.L = add(std::move(terms));
  // d_A of the 1-form x^i e^i.
  f.theta = AForm(3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      std::vector<Expr> t;
      for (int k = 0; k < 3; ++k)
        if (int e = levi_civita(i, j, k)) t.push_back(Expr(e) * Expr(x[k]));
      f.theta.set({i, j}, add(std::move(t)));
    }
  return f;
}

Fixture cotangent_poisson(const ExprMatrix& Pi, const ExprMatrix& g) {
  const int n = static_cast<int>(Pi.rows());
  if (Pi.cols() != n || g.rows() != n || g.cols() != n) throw InvalidFixtureParam("Pi and g must be n x n");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (Pi(i, j) != -Pi(j, i)) throw InvalidFixtureParam("Pi is not skew-symmetric");
      if (g(i, j) != g(j, i)) throw InvalidFixtureParam("g is not symmetric");
    }
  Fixture f;
  f.name = "cotangent_poisson(" + std::to_string(n) + ")";
  f.chart = AlgebroidChart(make_symbols("x", n), make_symbols("p", n));
  const auto& x = f.chart.x();
  const auto& p = f.chart.y();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.chart.set_rho(i, j, -Pi(i, j));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) f.chart.set_C(k, i, j, diff(Pi(i, j), x[k]));
  std::vector<Expr> terms;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) terms.push_back(Expr(Rational(1, 2)) * g(i, j) * Expr(p[i]) * Expr(p[j]));
  f.L = add(std::move(terms));
  f.theta = AForm(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) f.theta.set({i, j}, Pi(i, j));
  return f;
}

}  // namespace hamspray
