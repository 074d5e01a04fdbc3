#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hamspray/parser.hpp"
#include "hamspray/prolongation.hpp"

using namespace hamspray;

namespace {

const SampleOptions opt{64, 1e-9, 777};
const SampleOptions fine{64, 1e-10, 778};
const Box box{};

ExprMatrix constant_pi2() {
  ExprMatrix Pi = zeros(2, 2);
  Pi(0, 1) = Expr(1);
  Pi(1, 0) = Expr(-1);
  return Pi;
}

ExprMatrix metric2() {
  ExprMatrix g = identity(2);
  g(1, 1) = parse("1 + x1^2", make_symbols("x", 1));
  return g;
}

std::vector<Fixture> fixtures() {
  return {tangent(1), tangent(2, metric2()), action_so3(), cotangent_poisson(constant_pi2(), identity(2))};
}

Expr E(const AlgebroidChart& A, std::string_view s) {
  auto c = A.coords();
  return parse(s, c);
}

Expr random_poly(std::mt19937& rng, const AlgebroidChart& A) {
  auto c = A.coords();
  std::uniform_int_distribution<int> k(-2, 2), pick(0, static_cast<int>(c.size()) - 1);
  Expr e = Expr(k(rng));
  for (int t = 0; t < 3; ++t) e = e + Expr(k(rng)) * Expr(c[pick(rng)]) * Expr(c[pick(rng)]);
  return e;
}

ProlongSection random_section(std::mt19937& rng, const AlgebroidChart& A) {
  ProlongSection S{ExprVector(A.r()), ExprVector(A.r())};
  for (int i = 0; i < A.r(); ++i) {
    S.a(i) = random_poly(rng, A);
    S.b(i) = random_poly(rng, A);
  }
  return S;
}

void check_zero(const Expr& e, const SampleOptions& o = opt) { CHECK(is_zero(e, box, o).passed()); }

}  // namespace

TEST_CASE("anchor examples") {
  auto t = tangent(1);
  const auto& A = t.chart;
  auto V = anchor(A, liouville(A));
  CHECK(V.Vx(0) == Expr(0));
  CHECK(V.Vy(0) == E(A, "y1"));
  ProlongSection S{ExprVector::Constant(1, E(A, "y1")), ExprVector::Constant(1, Expr(0))};
  CHECK(anchor(A, S).Vx(0) == E(A, "y1"));
  auto D = build(t.L, A);
  auto sigma = hamiltonian_section(A, cartan_sections(D, A).omega, D.EL);
  CHECK(anchor(A, sigma).Vx(0) == E(A, "y1"));
  CHECK(anchor(A, sigma).Vy(0) == Expr(0));
}

TEST_CASE("lie bracket examples") {
  auto f = action_so3();
  const auto& A = f.chart;
  auto basis = [&](int i) {
    ProlongSection S{ExprVector::Constant(3, Expr(0)), ExprVector::Constant(3, Expr(0))};
    if (i < 3) {
      S.a(i) = Expr(1);
    } else {
      S.b(i - 3) = Expr(1);
    }
    return S;
  };
  auto e12 = lie_bracket(A, basis(0), basis(1));
  CHECK(e12.a(2) == Expr(1));
  CHECK(e12.a(0) == Expr(0));
  for (int k = 0; k < 3; ++k) CHECK(e12.b(k) == Expr(0));
  auto yy = lie_bracket(A, basis(3), basis(4));
  for (int k = 0; k < 3; ++k) CHECK((yy.a(k).is_literal_zero() && yy.b(k).is_literal_zero()));
  // [Delta, Upsilon_k] = -Upsilon_k
  for (int k = 0; k < 3; ++k) {
    auto d = lie_bracket(A, liouville(A), basis(3 + k));
    for (int j = 0; j < 3; ++j) {
      CHECK(d.a(j) == Expr(0));
      CHECK(d.b(j) == Expr(j == k ? -1 : 0));
    }
  }
}

TEST_CASE("vertical sections form a subalgebra") {
  std::mt19937 rng(9);
  for (const auto& f : fixtures()) {
    for (int t = 0; t < 5; ++t) {
      auto S1 = random_section(rng, f.chart), S2 = random_section(rng, f.chart);
      S1.a.setConstant(Expr(0));
      S2.a.setConstant(Expr(0));
      auto B = lie_bracket(f.chart, S1, S2);
      for (int i = 0; i < f.chart.r(); ++i) CHECK(B.a(i).is_literal_zero());
    }
  }
}

TEST_CASE("anchor is a bracket morphism") {
  std::mt19937 rng(10);
  auto f = action_so3();
  const auto& A = f.chart;
  auto coords = A.coords();
  for (int t = 0; t < 3; ++t) {
    auto S1 = random_section(rng, A), S2 = random_section(rng, A);
    Expr h = random_poly(rng, A);
    auto apply = [&](const VectorFieldOnA& V, const Expr& e) {
      Expr out = Expr(0);
      for (int i = 0; i < A.n(); ++i) out = out + V.Vx(i) * diff(e, A.x()[i]);
      for (int k = 0; k < A.r(); ++k) out = out + V.Vy(k) * diff(e, A.y()[k]);
      return out;
    };
    auto V1 = anchor(A, S1), V2 = anchor(A, S2), V12 = anchor(A, lie_bracket(A, S1, S2));
    CHECK((apply(V1, apply(V2, h)) - apply(V2, apply(V1, h)) - apply(V12, h)).is_literal_zero());
  }
}

TEST_CASE("d_prolong examples") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    const auto& A = f.chart;
    const int r = A.r();
    auto D = build(f.L, A);
    ProlongForm e(2 * r, 0);
    e[0] = D.EL;
    auto dE = d_prolong(A, e);
    for (int i = 0; i < r; ++i) {
      Expr vert = Expr(0);
      for (int a = 0; a < r; ++a) vert = vert + D.M(i, a) * Expr(A.y()[a]);
      CHECK(dE.get({r + i}) == vert);
      Expr hor = Expr(0);
      for (int k = 0; k < A.n(); ++k) hor = hor + A.rho(k, i) * diff(D.EL, A.x()[k]);
      CHECK(dE.get({i}) == hor);
    }
    auto cs = cartan_sections(D, A);
    CHECK(cs.omega == cartan_block_formula(D, A));
    for (int i = 0; i < r; ++i) {
      CHECK(cs.theta.get({r + i}) == Expr(0));
      for (int j = 0; j < r; ++j) CHECK(cs.omega.get({r + i, r + j}) == Expr(0));
    }
  }
  auto t = tangent(1);
  auto D = build(t.L, t.chart);
  auto cs = cartan_sections(D, t.chart);
  CHECK(cs.theta.get({0}) == E(t.chart, "y1"));
  CHECK(cs.omega.get({1, 0}) == Expr(1));
  CHECK_THROWS_AS(d_prolong(t.chart, ProlongForm(2, 3)), DegreeError);
}

TEST_CASE("d_prolong squares to zero") {
  std::mt19937 rng(12);
  for (const auto& f : fixtures()) {
    const int r = f.chart.r();
    for (int deg = 0; deg <= 1; ++deg) {
      ProlongForm w(2 * r, deg);
      for (std::size_t s = 0; s < w.size(); ++s) w[s] = random_poly(rng, f.chart);
      auto dd = d_prolong(f.chart, d_prolong(f.chart, w));
      for (std::size_t s = 0; s < dd.size(); ++s) check_zero(dd[s]);
    }
  }
}

TEST_CASE("vertical endomorphism") {
  std::mt19937 rng(13);
  for (const auto& f : fixtures()) {
    const auto& A = f.chart;
    const int r = A.r();
    auto D = build(f.L, A);
    auto sigma = hamiltonian_section(A, cartan_sections(D, A).omega, D.EL);
    auto J = vertical_J(sigma);
    auto delta = liouville(A);
    for (int i = 0; i < r; ++i) {
      check_zero(J.b(i) - delta.b(i), fine);
      CHECK(J.a(i).is_literal_zero());
    }
    for (int t = 0; t < 5; ++t) {
      auto S = random_section(rng, A);
      auto JJ = vertical_J(vertical_J(S));
      for (int i = 0; i < r; ++i) CHECK((JJ.a(i).is_literal_zero() && JJ.b(i).is_literal_zero()));
      // Im J = ker J: J S = 0 iff a = 0, and the image is exactly the vertical sections.
      ProlongSection V{ExprVector::Constant(r, Expr(0)), S.b};
      auto JV = vertical_J(V);
      for (int i = 0; i < r; ++i) CHECK(JV.b(i).is_literal_zero());
      auto JS = vertical_J(S);
      for (int i = 0; i < r; ++i) CHECK(JS.b(i) == S.a(i));
    }
    CHECK(J_dual(cartan_sections(D, A).omega).is_literal_zero());
    ProlongForm w(2 * r, 1);
    for (std::size_t sl = 0; sl < w.size(); ++sl) w[sl] = random_poly(rng, A);
    CHECK(J_dual(J_dual(w)).is_literal_zero());
    for (int i = 0; i < r; ++i) {
      CHECK(J_dual(w).get({r + i}) == Expr(0));
      CHECK(J_dual(w).get({i}) == -w.get({r + i}));
    }
    ProlongForm L0(2 * r, 0);
    L0[0] = f.L;
    CHECK(ProlongForm(2 * r, 1) - J_dual(d_prolong(A, L0)) == cartan_sections(D, A).theta);
  }
}


TEST_CASE("hamiltonian section examples") {
  auto t = tangent(1);
  const auto& A = t.chart;
  auto D = build(t.L, A);
  auto omega = cartan_sections(D, A).omega;
  auto s1 = hamiltonian_section(A, omega, E(A, "y1^2/2"));
  CHECK(s1.a(0) == E(A, "y1"));
  CHECK(s1.b(0) == Expr(0));
  auto s2 = hamiltonian_section(A, omega, E(A, "y1^2/2 + x1"));
  CHECK(s2.a(0) == E(A, "y1"));
  CHECK(s2.b(0) == Expr(-1));
  ProlongForm degenerate(2, 2);
  CHECK_THROWS_AS(hamiltonian_section(A, degenerate, D.EL), DegenerateForm);
  CHECK_THROWS_AS(check_nondegenerate(A, degenerate, box, opt), DegenerateForm);
  CHECK_NOTHROW(check_nondegenerate(A, omega, box, opt));
}

TEST_CASE("sigma_EL is a SODE whose anchor is the Hamiltonian field") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    const auto& A = f.chart;
    auto D = build(f.L, A);
    auto sigma = hamiltonian_section(A, cartan_sections(D, A).omega, D.EL);
    CHECK(is_SODE(A, sigma, box, fine).passed());
    CHECK_FALSE(is_SODE(A, liouville(A), box, opt).passed());
    auto P = build_bracket(A, D, assemble_N(D, A, AForm(A.r(), 2)));
    auto X = hamiltonian_field(P, D.EL);
    auto V = anchor(A, sigma);
    for (int i = 0; i < A.n(); ++i) check_zero(V.Vx(i) - X.Vx(i), fine);
    for (int k = 0; k < A.r(); ++k) check_zero(V.Vy(k) - X.Vy(k), fine);
    CHECK(is_semispray(A, V, box, fine).passed());

    // Pointwise solve agrees.
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    Bindings p;
    for (auto s : A.coords()) p.set(s, u(rng));
    auto num = hamiltonian_section_at(A, cartan_sections(D, A).omega, D.EL, p);
    auto st = sigma.stacked();
    for (Eigen::Index k = 0; k < st.size(); ++k) CHECK(num(k) == doctest::Approx(eval(st(k), p)).epsilon(1e-10));
    // A SODE plus anything vertical is a SODE.
    ProlongSection shifted = sigma;
    shifted.b(0) = shifted.b(0) + E(A, "x1");
    CHECK(is_SODE(A, shifted, box, fine).passed());
  }
}

TEST_CASE("induced bracket agrees with the Poisson bracket") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    const auto& A = f.chart;
    auto D = build(f.L, A);
    ProlongForm Omega = cartan_sections(D, A).omega + pullback_hor(A, f.theta);
    auto P = build_bracket(A, D, assemble_N(D, A, f.theta));
    auto coords = A.coords();
    for (auto u : coords)
      for (auto v : coords) {
        auto su = hamiltonian_section(A, Omega, Expr(u)), sv = hamiltonian_section(A, Omega, Expr(v));
        Expr induced = interior(sv.stacked(), interior(su.stacked(), Omega))[0];
        check_zero(induced - bracket(P, Expr(u), Expr(v)), fine);
      }
  }
}

namespace {

EhresmannConn random_connection(std::mt19937& rng, const AlgebroidChart& A) {
  EhresmannConn g{zeros(A.r(), A.r())};
  for (Eigen::Index k = 0; k < g.gamma.size(); ++k) g.gamma(k) = random_poly(rng, A);
  return g;
}

}  // namespace

TEST_CASE("bigrading with gamma = 0") {
  auto t = tangent(2, metric2());
  const auto& A = t.chart;
  ProlongForm z(4, 1);
  z.set({0}, E(A, "x1*y1^2"));
  z.set({1}, E(A, "y1*y2 + x2"));
  auto split = d_split(A, z, EhresmannConn::zero(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(split.d2.get({2 + i, j}) == diff(z.get({j}), A.y()[i]));
  auto blocks = bigrade(z, EhresmannConn::zero(2));
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[1] == z);
  CHECK(blocks[0].is_literal_zero());
}

TEST_CASE("d splits into three parts for any connection") {
  std::mt19937 rng(14);
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    const auto& A = f.chart;
    const int r = A.r();
    for (auto g : {EhresmannConn::zero(r), random_connection(rng, A)}) {
      for (int deg = 0; deg <= 1; ++deg) {
        ProlongForm w(2 * r, deg);
        for (std::size_t s = 0; s < w.size(); ++s) w[s] = random_poly(rng, A);
        auto split = d_split(A, w, g);
        CHECK(split.d1 + split.d2 + split.d3 == to_adapted(d_prolong(A, w), g));
        CHECK(from_adapted(to_adapted(w, g), g) == w);
        // d'' d'' = 0 and the slice formula matches the Koszul d''.
        auto dd = d_split_adapted(A, split.d2, g).d2;
        CHECK(dd.is_literal_zero());
        CHECK(split.d2 == dprime_slices(to_adapted(w, g), A.y()));
      }
    }
  }
}

TEST_CASE("pullback of 2-sections") {
  for (const auto& f : fixtures()) {
    const auto& A = f.chart;
    const int r = A.r();
    CHECK(pullback_hor(A, AForm(r, 2)).is_literal_zero());
    auto pb = pullback_hor(A, f.theta);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        CHECK(pb.get({i, j}) == f.theta.get({i, j}));
        CHECK(pb.get({r + i, j}) == Expr(0));
      }
    auto d = d_prolong(A, pb);
    auto dA = pullback_hor(A, d_A(A, f.theta));
    for (std::size_t s = 0; s < d.size(); ++s) CHECK(d[s] == dA[s]);
  }
  auto c = cotangent_poisson(constant_pi2(), identity(2));
  CHECK(pullback_hor(c.chart, c.theta).get({0, 1}) == Expr(1));
}

TEST_CASE("decomposition of omega_L + pullback") {
  std::mt19937 rng(15);
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    const auto& A = f.chart;
    const int r = A.r();
    auto D = build(f.L, A);
    auto cs = cartan_sections(D, A);
    {
      auto dec = decompose_symplectic(A, cs.omega, EhresmannConn::zero(r), box, opt);
      CHECK(dec.zeta == cs.theta);
      CHECK(dec.Theta.is_literal_zero());
      CHECK(dec.report.status() == ZeroStatus::ProvenZero);
    }
    ProlongForm Omega = cs.omega + pullback_hor(A, f.theta);
    auto dec = decompose_symplectic(A, Omega, EhresmannConn::zero(r), box, opt);
    CHECK(dec.Theta == pullback_hor(A, f.theta));
    CHECK(dec.report.status() == ZeroStatus::ProvenZero);
    CHECK(J_dual(Omega).is_literal_zero());
    auto dec2 = decompose_symplectic(A, Omega, random_connection(rng, A), box, opt);
    CHECK(dec2.report.passed());
    for (int i = 0; i < r; ++i) CHECK(dec2.zeta.get({r + i}).is_literal_zero());
    // rank of d zeta is 2r where omega_L is nondegenerate
    Bindings p;
    for (auto s : A.coords()) p.set(s, 0.3);
    CHECK(rank_at(d_prolong(A, dec.zeta), p) == 2 * r);
  }
  auto t = tangent(1);
  ProlongForm bad(2, 2);
  bad.set({0, 1}, Expr(1));
  CHECK_THROWS_AS(decompose_symplectic(tangent(2).chart, [] {
    ProlongForm w(4, 2);
    w.set({2, 3}, Expr(1));
    return w;
  }(), EhresmannConn::zero(2), box, opt), NotVerticalVanishing);
  ProlongForm open(4, 2);
  open.set({0, 2}, E(tangent(2).chart, "x2"));
  CHECK_THROWS_AS(decompose_symplectic(tangent(2).chart, open, EhresmannConn::zero(2), box, opt), NotClosed);
}

TEST_CASE("theorem_Z") {
  {
    auto t = tangent(1);
    auto D = build(t.L, t.chart);
    auto z0 = theorem_Z(D, t.chart, ProlongForm(2, 2), Expr(0), box, opt);
    CHECK(z0.Z.b(0) == Expr(0));
    auto z1 = theorem_Z(D, t.chart, ProlongForm(2, 2), E(t.chart, "x1"), box, opt);
    CHECK(z1.Z.b(0) == Expr(-1));
    CHECK(z1.report.passed());
  }
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    const auto& A = f.chart;
    auto D = build(f.L, A);
    Expr fx = A.n() >= 2 ? E(A, "x1*x2") : E(A, "x1");
    auto res = theorem_Z(D, A, pullback_hor(A, f.theta), fx, box, fine);
    CHECK(res.report.passed());
    auto P = build_bracket(A, D, assemble_N(D, A, f.theta));
    auto X = hamiltonian_field(P, D.EL + fx);
    auto V = anchor(A, ProlongSection{res.Z.a + res.sigma.a, res.Z.b + res.sigma.b});
    for (int i = 0; i < A.n(); ++i) check_zero(V.Vx(i) - X.Vx(i), fine);
    for (int k = 0; k < A.r(); ++k) check_zero(V.Vy(k) - X.Vy(k), fine);
  }
}
