#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hamspray/homotopy.hpp"
#include "hamspray/parser.hpp"

using namespace hamspray;

namespace {

const SampleOptions opt{64, 1e-9, 4242};
const Box box{};

std::vector<Symbol> fibers(int r) { return make_symbols("y", r); }
const Symbol x1("x1");

Expr P(std::string_view s, int r) {
  auto a = fibers(r);
  a.push_back(x1);
  return parse(s, a);
}

Expr random_poly(std::mt19937& rng, const std::vector<Symbol>& y) {
  std::uniform_int_distribution<int> c(-3, 3), deg(0, 3), pick(0, static_cast<int>(y.size()));
  Expr e = Expr(c(rng));
  for (int t = 0; t < 3; ++t) {
    Expr m = Expr(c(rng));
    for (int d = deg(rng); d > 0; --d) {
      int i = pick(rng);
      m = m * (i == static_cast<int>(y.size()) ? Expr(x1) : Expr(y[i]));
    }
    e = e + m;
  }
  return e;
}

}  // namespace

TEST_CASE("psi_star examples") {
  auto y = fibers(1);
  VerticalForm f(1, 0);
  f[0] = P("x1 + y1^2", 1);
  CHECK(psi_star(f, y, 0.5)[0] == P("x1 + y1^2/4", 1));
  VerticalForm w(1, 1);
  w[0] = P("y1^2", 1);
  CHECK(psi_star(w, y, 0.5)[0] == P("y1^2/8", 1));
  CHECK(psi_star(w, y, 1.0) == w);
  CHECK_THROWS_AS(psi_star(w, y, 0.0), DomainError);
}

TEST_CASE("h_k examples") {
  auto y1 = fibers(1);
  VerticalForm w(1, 1);
  w[0] = P("y1^2", 1);
  auto h = h_k(w, y1);
  REQUIRE(h.is_exact());
  CHECK(h.exact[0] == P("y1^3/3", 1));

  auto y2 = fibers(2);
  VerticalForm v(2, 2);
  v.set({0, 1}, Expr(1));
  auto h2 = h_k(v, y2);
  REQUIRE(h2.is_exact());
  CHECK(h2.exact.get({0}) == P("-y2/2", 2));
  CHECK(h2.exact.get({1}) == P("y1/2", 2));

  VerticalForm f(1, 0);
  f[0] = P("y1", 1);
  CHECK_THROWS_AS(h_k(f, y1), DegreeError);
}

TEST_CASE("h_1 inverts d on closed 1-forms") {
  auto y = fibers(2);
  VerticalForm f(2, 0);
  f[0] = P("x1*y1^2*y2 + y2^3", 2);
  auto w = d_vert(y, f);
  auto h = h_k(w, y);
  REQUIRE(h.is_exact());
  CHECK(d_vert(y, h.exact) == w);
  // h_1(d phi) = phi - phi(x, 0)
  CHECK(h.exact[0] == f[0] - psi_zero(f, y)[0]);
}

TEST_CASE("homotopy identity on random polynomial forms") {
  std::mt19937 rng(31);
  for (int r = 1; r <= 3; ++r)
    for (int k = 0; k <= 3; ++k)
      for (int trial = 0; trial < 10; ++trial) {
        auto y = fibers(r);
        VerticalForm w(r, k);
        for (std::size_t s = 0; s < w.size(); ++s) w[s] = random_poly(rng, y);
        auto rep = homotopy_identity_check(w, y, box, opt);
        CHECK(rep.status() == ZeroStatus::ProvenZero);
      }
}

TEST_CASE("homotopy identity with a deferred integral") {
  auto y = fibers(2);
  VerticalForm w(2, 1);
  w[0] = P("exp(y1)*y2", 2);
  w[1] = P("sin(x1*y2) + y1", 2);
  auto h = h_k(w, y);
  CHECK_FALSE(h.is_exact());
  auto rep = homotopy_identity_check(w, y, box, SampleOptions{16, 1e-8, 3});
  CHECK(rep.passed());
  CHECK(rep.residual_max() < 1e-8);

  VerticalForm f(1, 1);
  f[0] = P("exp(y1)", 1);
  auto hf = h_k(f, fibers(1));
  Bindings b;
  b.set(fibers(1)[0], 0.7);
  CHECK(hf.eval(0, b) == doctest::Approx(std::exp(0.7) - 1).epsilon(1e-10));
}

TEST_CASE("evolution equation") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1, 1), ut(0.2, 0.9);
  auto y = fibers(2);
  for (int k = 0; k <= 2; ++k) {
    VerticalForm w(2, k);
    for (std::size_t s = 0; s < w.size(); ++s) w[s] = random_poly(rng, y) + P("exp(y1)*x1", 2);
    auto lw = lie_euler(w, y);
    for (int trial = 0; trial < 16; ++trial) {
      const double t = ut(rng), h = 1e-5;
      Bindings b;
      b.set(x1, u(rng));
      for (auto s : y) b.set(s, u(rng));
      auto plus = psi_star(w, y, t + h), minus = psi_star(w, y, t - h), rhs = psi_star(lw, y, t);
      for (std::size_t s = 0; s < w.size(); ++s) {
        double fd = (eval(plus[s], b) - eval(minus[s], b)) / (2 * h);
        CHECK(std::abs(fd - eval(rhs[s], b) / t) < 1e-6);
      }
    }
  }
}

TEST_CASE("dprime_primitive examples") {
  auto y = fibers(1);
  // Upsilon-E block of the Cartan 2-section for L = y1^2/2: theta(E_1, Upsilon_1) = -1.
  SkewForm block(2, 2);
  block.set({0, 1}, Expr(-1));
  auto zeta = dprime_primitive(block, y, box, opt);
  CHECK(zeta.get({0}) == P("y1", 1));
  CHECK(zeta.get({1}) == Expr(0));

  CHECK(dprime_primitive(SkewForm(2, 2), y, box, opt).is_literal_zero());

  SkewForm vert(2, 1);
  vert.set({1}, P("sin(x1)", 1));
  CHECK(dprime_primitive(vert, y, box, opt).get(std::vector<int>{}) == P("sin(x1)*y1", 1));

  SkewForm bad(4, 1);
  bad.set({2}, P("y2", 2));
  CHECK_THROWS_AS(dprime_primitive(bad, fibers(2), box, opt), NotClosed);
}

TEST_CASE("closed blocks get primitives") {
  std::mt19937 rng(5);
  for (int r = 1; r <= 3; ++r) {
    auto y = fibers(r);
    for (int trial = 0; trial < 10; ++trial) {
      // d'' of a random (1, q-1) form is closed of bidegree (1, q).
      for (int q = 1; q <= r; ++q) {
        SkewForm pre(2 * r, q);
        for (std::size_t s = 0; s < pre.size(); ++s)
          if (bidegree(pre, s) == std::pair<int, int>{1, q - 1}) pre[s] = random_poly(rng, y);
        SkewForm theta = dprime_slices(pre, y);
        SkewForm zeta = dprime_primitive(theta, y, box, opt);
        CHECK((dprime_slices(zeta, y) - theta).is_literal_zero());
      }
    }
  }
}
