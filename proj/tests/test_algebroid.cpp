#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hamspray/algebroid.hpp"
#include "hamspray/parser.hpp"

using namespace hamspray;

namespace {

const SampleOptions opt{64, 1e-9, 1234};
const Box box{};

ExprMatrix lie_poisson_so3() {
  auto x = make_symbols("x", 3);
  ExprMatrix Pi = zeros(3, 3);
  Pi(0, 1) = Expr(x[2]);
  Pi(1, 0) = -Expr(x[2]);
  Pi(1, 2) = Expr(x[0]);
  Pi(2, 1) = -Expr(x[0]);
  Pi(2, 0) = Expr(x[1]);
  Pi(0, 2) = -Expr(x[1]);
  return Pi;
}

ExprMatrix constant_pi2() {
  ExprMatrix Pi = zeros(2, 2);
  Pi(0, 1) = Expr(1);
  Pi(1, 0) = Expr(-1);
  return Pi;
}

AForm random_form(const AlgebroidChart& A, int degree, std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-2, 2), pick(0, A.n() - 1);
  AForm w(A.r(), degree);
  for (std::size_t s = 0; s < w.size(); ++s) {
    Expr e = Expr(c(rng));
    for (int t = 0; t < 3; ++t) e = e + Expr(c(rng)) * Expr(A.x()[pick(rng)]) * Expr(A.x()[pick(rng)]);
    w[s] = e;
  }
  return w;
}

}  // namespace

TEST_CASE("catalog fixtures satisfy the structure equations") {
  for (const auto& f : {tangent(1), tangent(2), tangent(3), action_so3(), cotangent_poisson(constant_pi2(), identity(2)),
                        cotangent_poisson(lie_poisson_so3(), identity(3))}) {
    CAPTURE(f.name);
    auto rep = validate_structure(f.chart, box, opt);
    CHECK(rep.passed());
  }
  auto t1 = validate_structure(tangent(1).chart, box, opt);
  CHECK(t1.status() == ZeroStatus::ProvenZero);
}

TEST_CASE("tangent(1) and cotangent shapes") {
  auto t = tangent(1);
  CHECK(t.chart.n() == 1);
  CHECK(t.chart.r() == 1);
  CHECK(t.chart.rho(0, 0) == Expr(1));
  CHECK(t.chart.C(0, 0, 0) == Expr(0));
  auto c = cotangent_poisson(constant_pi2(), identity(2));
  CHECK(c.chart.rho(0, 0) == Expr(0));
  CHECK(c.chart.rho(0, 1) == Expr(-1));
  CHECK(c.chart.rho(1, 0) == Expr(1));
  CHECK(c.chart.rho(1, 1) == Expr(0));
  for (int k = 0; k < 2; ++k) CHECK(c.chart.C(k, 0, 1) == Expr(0));
  ExprMatrix bad = constant_pi2();
  bad(1, 0) = Expr(1);
  CHECK_THROWS_AS(cotangent_poisson(bad, identity(2)), InvalidFixtureParam);
  ExprMatrix g = identity(2);
  g(0, 1) = Expr(1);
  CHECK_THROWS_AS(cotangent_poisson(constant_pi2(), g), InvalidFixtureParam);
}

TEST_CASE("so(3) structure constants") {
  auto f = action_so3();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        // epsilon_ijk computed independently
        int e = (i - j) * (j - k) * (k - i) / 2;
        CHECK(f.chart.C(k, i, j) == Expr(e));
      }
}

TEST_CASE("perturbations of the so(3) chart are detected") {
  auto base = action_so3();
  {
    auto A = base.chart;
    A.set_C(2, 0, 1, Expr(Rational(11, 10)));
    auto rep = validate_structure(A, box, opt);
    REQUIRE_FALSE(rep.passed());
    CHECK_FALSE(rep.first_failure()->result.witness.empty());
  }
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        auto A = base.chart;
        A.set_C(k, i, j, A.C(k, i, j) + Expr(Rational(1, 10)));
        CHECK_FALSE(validate_structure(A, box, opt).passed());
      }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto A = base.chart;
      A.set_rho(i, j, A.rho(i, j) + Expr(Rational(1, 10)));
      CHECK_FALSE(validate_structure(A, box, opt).passed());
    }
}

TEST_CASE("skew storage reconstruction") {
  auto f = action_so3();
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK((f.chart.C(k, i, j) + f.chart.C(k, j, i)).is_literal_zero());
}

TEST_CASE("d_A examples") {
  auto t = tangent(2);
  AForm f(2, 0);
  f[0] = Expr(t.chart.x()[0]);
  auto df = d_A(t.chart, f);
  CHECK(df.get({0}) == Expr(1));
  CHECK(df.get({1}) == Expr(0));

  auto c = cotangent_poisson(constant_pi2(), identity(2));
  AForm th(2, 2);
  th.set({0, 1}, Expr(1));
  CHECK(d_A(c.chart, th).is_literal_zero());
  CHECK_THROWS_AS(d_A(c.chart, AForm(2, 3)), DegreeError);
}

TEST_CASE("d_A squares to zero") {
  std::mt19937 rng(5);
  for (const auto& f : {tangent(3), action_so3(), cotangent_poisson(lie_poisson_so3(), identity(3))}) {
    for (int deg = 0; deg <= 1; ++deg)
      for (int trial = 0; trial < 5; ++trial) {
        auto w = random_form(f.chart, deg, rng);
        auto dd = d_A(f.chart, d_A(f.chart, w));
        for (std::size_t s = 0; s < dd.size(); ++s) CHECK(is_zero(dd[s], box, opt).passed());
      }
  }
}

TEST_CASE("catalog 2-sections are closed") {
  for (const auto& f : {tangent(2), tangent(3), action_so3(), cotangent_poisson(constant_pi2(), identity(2)),
                        cotangent_poisson(lie_poisson_so3(), identity(3))}) {
    CAPTURE(f.name);
    auto d = d_A(f.chart, f.theta);
    for (std::size_t s = 0; s < d.size(); ++s) CHECK(is_zero(d[s], box, opt).passed());
  }
}

TEST_CASE("so(3) theta is d_A of x^i e^i") {
  auto f = action_so3();
  AForm z(3, 1);
  for (int i = 0; i < 3; ++i) z[i] = Expr(f.chart.x()[i]);
  CHECK(d_A(f.chart, z) == f.theta);
}
