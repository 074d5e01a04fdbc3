#pragma once

#include "hamspray/twoform.hpp"

namespace hamspray {

/// Bivector on A in the coordinates (x, y): P(a, b) = {z^a, z^b}.
struct PoissonBivector {
  std::vector<Symbol> coords;  // x then y
  int n = 0, r = 0;
  ExprMatrix P;

  ExprMatrix Pxx() const { return P.topLeftCorner(n, n); }
  ExprMatrix Pxy() const { return P.topRightCorner(n, r); }
  ExprMatrix Pyy() const { return P.bottomRightCorner(r, r); }
};

/// Vector field on A by components along d/dx^i and d/dy^k.
struct VectorFieldOnA {
  ExprVector Vx, Vy;
};

/// {x,x} = 0, {x^i,y^k} = -rho^i_r M^rk, {y^k,y^l} = -M^kr N_rs M^sl.
PoissonBivector build_bracket(const AlgebroidChart& A, const LagrangianData& D, const ExprMatrix& N);

/// sum_ab P^ab dF/dz^a dG/dz^b.
Expr bracket(const PoissonBivector& P, const Expr& F, const Expr& G);

/// Jacobiator of every coordinate triple a < b < c.
ValidationReport check_jacobi(const PoissonBivector& P, const Box& box, const SampleOptions& opt);

/// X_G with X_G(h) = {G, h}.
VectorFieldOnA hamiltonian_field(const PoissonBivector& P, const Expr& G);

/// The same field evaluated at one point from numeric factorizations of M.
Eigen::VectorXd hamiltonian_field_at(const AlgebroidChart& A, const LagrangianData& D, const ExprMatrix& N,
                                     const Expr& G, const Bindings& p);

/// Residuals Vx^i - y^j rho^i_j.
ValidationReport is_semispray(const AlgebroidChart& A, const VectorFieldOnA& V, const Box& box,
                              const SampleOptions& opt);

/// Residuals of [E, V] - V with E = y^k d/dy^k.
ValidationReport is_spray(const AlgebroidChart& A, const VectorFieldOnA& V, const Box& box, const SampleOptions& opt);

}  // namespace hamspray
