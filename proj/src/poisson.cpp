#include "hamspray/poisson.hpp"

#include <Eigen/LU>

namespace hamspray {

PoissonBivector build_bracket(const AlgebroidChart& A, const LagrangianData& D, const ExprMatrix& N) {
  if (!D.Minv) throw SingularHessian("bracket needs a symbolic inverse Hessian", D.singular_witness);
  const int n = A.n(), r = A.r();
  PoissonBivector out;
  out.coords = A.coords();
  out.n = n;
  out.r = r;
  out.P = zeros(n + r, n + r);
  const ExprMatrix& Minv = *D.Minv;
  ExprMatrix xy = product(A.rho(), Minv);
  ExprMatrix yy = product(product(Minv, N), Minv);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < r; ++k) {
      out.P(i, n + k) = -xy(i, k);
      out.P(n + k, i) = xy(i, k);
    }
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l) out.P(n + k, n + l) = -yy(k, l);
  return out;
}

Expr bracket(const PoissonBivector& P, const Expr& F, const Expr& G) {
  const int m = static_cast<int>(P.coords.size());
  std::vector<Expr> dF(m), dG(m);
  for (int a = 0; a < m; ++a) {
    dF[a] = diff(F, P.coords[a]);
    dG[a] = diff(G, P.coords[a]);
  }
  std::vector<Expr> terms;
  for (int a = 0; a < m; ++a) {
    if (dF[a].is_literal_zero()) continue;
    for (int b = 0; b < m; ++b) {
      if (dG[b].is_literal_zero() || P.P(a, b).is_literal_zero()) continue;
      terms.push_back(P.P(a, b) * dF[a] * dG[b]);
    }
  }
  return add(std::move(terms));
}

ValidationReport check_jacobi(const PoissonBivector& P, const Box& box, const SampleOptions& opt) {
  const int m = static_cast<int>(P.coords.size());
  std::vector<std::pair<std::string, Expr>> residuals;
  // {z^a, {z^b, z^c}} = sum_d P^ad dP^bc/dz^d
  auto nested = [&](int a, int b, int c) {
    std::vector<Expr> terms;
    for (int d = 0; d < m; ++d)
      if (!P.P(a, d).is_literal_zero()) terms.push_back(P.P(a, d) * diff(P.P(b, c), P.coords[d]));
    return add(std::move(terms));
  };
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c)
        residuals.emplace_back("jacobi[" + P.coords[a].name() + "," + P.coords[b].name() + "," +
                                   P.coords[c].name() + "]",
                               nested(a, b, c) + nested(b, c, a) + nested(c, a, b));
  return check_all("jacobi", residuals, box, opt);
}

VectorFieldOnA hamiltonian_field(const PoissonBivector& P, const Expr& G) {
  VectorFieldOnA V;
  V.Vx = ExprVector(P.n);
  V.Vy = ExprVector(P.r);
  for (int a = 0; a < P.n + P.r; ++a) {
    Expr c = bracket(P, G, Expr(P.coords[a]));
    if (a < P.n) {
      V.Vx(a) = c;
    } else {
      V.Vy(a - P.n) = c;
    }
  }
  return V;
}

Eigen::VectorXd hamiltonian_field_at(const AlgebroidChart& A, const LagrangianData& D, const ExprMatrix& N,
                                     const Expr& G, const Bindings& p) {
  const int n = A.n(), r = A.r();
  Eigen::MatrixXd M = eval(D.M, p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) {
    std::vector<double> w;
    for (auto s : A.coords()) w.push_back(p.get(s));
    throw SingularHessian("Hessian is singular", w);
  }
  Eigen::MatrixXd rho = eval(A.rho(), p);
  Eigen::MatrixXd Nn = eval(N, p);
  Eigen::VectorXd gx(n), gy(r);
  for (int i = 0; i < n; ++i) gx(i) = eval(diff(G, A.x()[i]), p);
  for (int k = 0; k < r; ++k) gy(k) = eval(diff(G, A.y()[k]), p);
  // M symmetric: solving with M or M^T coincide.
  Eigen::VectorXd u = lu.solve(gy);
  Eigen::VectorXd out(n + r);
  out.head(n) = rho * u;
  out.tail(r) = -lu.solve(rho.transpose() * gx + Nn.transpose() * u);
  return out;
}

ValidationReport is_semispray(const AlgebroidChart& A, const VectorFieldOnA& V, const Box& box,
                              const SampleOptions& opt) {
  std::vector<std::pair<std::string, Expr>> residuals;
  for (int i = 0; i < A.n(); ++i) {
    std::vector<Expr> terms{V.Vx(i)};
    for (int j = 0; j < A.r(); ++j) terms.push_back(-Expr(A.y()[j]) * A.rho(i, j));
    residuals.emplace_back("semispray[" + A.x()[i].name() + "]", add(std::move(terms)));
  }
  return check_all("semispray", residuals, box, opt);
}

namespace {

Expr euler(const AlgebroidChart& A, const Expr& e) {
  std::vector<Expr> terms;
  for (auto s : A.y()) terms.push_back(Expr(s) * diff(e, s));
  return add(std::move(terms));
}

}  // namespace

ValidationReport is_spray(const AlgebroidChart& A, const VectorFieldOnA& V, const Box& box, const SampleOptions& opt) {
  std::vector<std::pair<std::string, Expr>> residuals;
  for (int i = 0; i < A.n(); ++i)
    residuals.emplace_back("spray[" + A.x()[i].name() + "]", euler(A, V.Vx(i)) - V.Vx(i));
  for (int k = 0; k < A.r(); ++k)
    residuals.emplace_back("spray[" + A.y()[k].name() + "]", euler(A, V.Vy(k)) - Expr(2) * V.Vy(k));
  return check_all("spray", residuals, box, opt);
}

}  // namespace hamspray
