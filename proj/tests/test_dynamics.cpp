#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hamspray/dynamics.hpp"
#include "hamspray/parser.hpp"

using namespace hamspray;

namespace {

const SampleOptions opt{64, 1e-9, 55};
const Box box{};

ExprMatrix metric2() {
  ExprMatrix g = identity(2);
  g(1, 1) = parse("1 + x1^2", make_symbols("x", 1));
  return g;
}

ChartPoint pt(std::initializer_list<double> x, std::initializer_list<double> y) {
  ChartPoint p{Eigen::VectorXd(x.size()), Eigen::VectorXd(y.size())};
  int i = 0;
  for (double v : x) p.x(i++) = v;
  i = 0;
  for (double v : y) p.y(i++) = v;
  return p;
}

VectorFieldOnA field(const Fixture& f, const Expr& extra, const AForm& theta) {
  auto D = build(f.L, f.chart);
  auto P = build_bracket(f.chart, D, assemble_N(D, f.chart, theta));
  return hamiltonian_field(P, D.EL + extra);
}

}  // namespace

TEST_CASE("integrate examples") {
  auto t = tangent(1);
  const auto& A = t.chart;
  auto y1 = Expr(A.y()[0]);
  VectorFieldOnA line{ExprVector::Constant(1, y1), ExprVector::Constant(1, Expr(0))};
  auto tr = integrate(A, line, pt({0}, {1}), 1.0, {Method::RK4, 0.1});
  CHECK(std::abs(tr.states.back().x(0) - 1.0) < 1e-12);
  CHECK(tr.times.back() == 1.0);
  for (std::size_t k = 1; k < tr.times.size(); ++k) CHECK(tr.times[k] > tr.times[k - 1]);

  VectorFieldOnA force{ExprVector::Constant(1, y1), ExprVector::Constant(1, Expr(-1))};
  auto tf = integrate(A, force, pt({0}, {0}), 1.0, {Method::RK4, 0.01});
  CHECK(std::abs(tf.states.back().x(0) + 0.5) < 1e-9);
  auto tf45 = integrate(A, force, pt({0}, {0}), 1.0, {Method::RK45, 0.1});
  CHECK(std::abs(tf45.states.back().x(0) + 0.5) < 1e-9);

  VectorFieldOnA blow{ExprVector::Constant(1, y1), ExprVector::Constant(1, y1 * y1)};
  CHECK_THROWS_AS(integrate(A, blow, pt({0}, {1}), 2.0, {Method::RK4, 1e-3}), BlowUp);
  CHECK_THROWS_AS(integrate(A, line, pt({0}, {1}), -1.0, {}), DomainError);
}

TEST_CASE("base projection check") {
  auto t = tangent(1);
  const auto& A = t.chart;
  auto y1 = Expr(A.y()[0]);
  VectorFieldOnA line{ExprVector::Constant(1, y1), ExprVector::Constant(1, Expr(0))};
  auto tr = integrate(A, line, pt({0}, {1}), 1.0, {Method::RK4, 1e-3});
  CHECK(base_projection_check(A, tr, 1e-6).passed());
  VectorFieldOnA bad{ExprVector::Constant(1, y1 + Expr(Rational(1, 10))), ExprVector::Constant(1, Expr(0))};
  auto tb = integrate(A, bad, pt({0}, {1}), 1.0, {Method::RK4, 1e-3});
  auto rep = base_projection_check(A, tb, 1e-6);
  CHECK_FALSE(rep.passed());
  CHECK(rep.residual_max() == doctest::Approx(0.1).epsilon(1e-6));

  auto m = tangent(2, metric2());
  auto V = field(m, Expr(0), AForm(2, 2));
  auto tm = integrate(m.chart, V, pt({0.2, -0.1}, {0.5, 0.3}), 1.0, {Method::RK4, 1e-3});
  CHECK(base_projection_check(m.chart, tm, 1e-6).passed());
}

TEST_CASE("energy is conserved along the Hamiltonian flow") {
  ExprMatrix Pi = zeros(2, 2);
  Pi(0, 1) = Expr(1);
  Pi(1, 0) = Expr(-1);
  auto c = cotangent_poisson(Pi, identity(2));
  auto D = build(c.L, c.chart);
  auto V = field(c, Expr(0), c.theta);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  auto tr = integrate(c.chart, V, pt({u(rng), u(rng)}, {u(rng), u(rng)}), 1.0, {Method::RK4, 1e-3}, D.EL);
  CHECK(max_abs_drift(tr) < 1e-8);
  CHECK(tr.invariant_drift.size() == tr.states.size());
}

TEST_CASE("RK4 drift ratio on the metric fixture") {
  auto m = tangent(2, metric2());
  auto D = build(m.L, m.chart);
  Expr f = Expr(m.chart.x()[0]) * Expr(m.chart.x()[1]);
  auto V = field(m, f, AForm(2, 2));
  auto p0 = pt({0.3, -0.2}, {0.8, 0.5});
  double d1 = max_abs_drift(integrate(m.chart, V, p0, 1.0, {Method::RK4, 0.1}, D.EL + f));
  double d2 = max_abs_drift(integrate(m.chart, V, p0, 1.0, {Method::RK4, 0.05}, D.EL + f));
  CHECK(d1 / d2 >= 8);
  CHECK(d1 / d2 <= 32);
}

TEST_CASE("spray scaling of the flow") {
  auto m = tangent(2, metric2());
  auto V = field(m, Expr(0), AForm(2, 2));
  CHECK(is_spray(m.chart, V, box, opt).passed());
  auto p0 = pt({0.1, 0.2}, {0.4, -0.3});
  auto ref = integrate(m.chart, V, p0, 1.0, {Method::RK4, 1e-3});
  for (double lambda : {2.0, 4.0}) {
    ChartPoint q{p0.x, lambda * p0.y};
    auto tr = integrate(m.chart, V, q, 1.0 / lambda, {Method::RK4, 1e-3 / lambda});
    CHECK((tr.states.back().x - ref.states.back().x).norm() < 1e-6);
  }
}

TEST_CASE("export formats") {
  auto t = tangent(1);
  auto y1 = Expr(t.chart.y()[0]);
  VectorFieldOnA line{ExprVector::Constant(1, y1), ExprVector::Constant(1, Expr(0))};
  auto tr = integrate(t.chart, line, pt({0}, {1}), 0.5, {Method::RK4, 0.25}, Expr(t.L));
  auto csv = to_csv(t.chart, tr);
  CHECK(csv.rfind("t,x1,y1,drift\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  auto js = to_json(t.chart, tr);
  CHECK(js.find("\"states\"") != std::string::npos);
}
