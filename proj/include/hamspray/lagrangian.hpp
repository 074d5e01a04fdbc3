#pragma once

#include <optional>

#include "hamspray/algebroid.hpp"

namespace hamspray {

enum class InverseMode { Symbolic, Pointwise };

/// Derived data of a Lagrangian L(x, y) on an algebroid chart.
struct LagrangianData {
  std::vector<Symbol> x, y;
  Expr L;
  ExprMatrix M;                     // d^2 L / dy^i dy^j
  std::optional<ExprMatrix> Minv;   // symbolic mode only
  std::optional<Expr> detM;         // symbolic mode only
  ExprVector thetaL;                // dL / dy^k
  Expr EL;                          // y^k dL/dy^k - L
  InverseMode mode = InverseMode::Symbolic;
  bool regular = false;
  std::vector<double> singular_witness;  // x then y, empty when regular

  /// Numeric inverse Hessian at a point. Throws SingularHessian.
  Eigen::MatrixXd minv_at(const Bindings& b) const;
  std::vector<Symbol> coords() const;
};

struct RegularityOptions {
  Box box;
  SampleOptions sample;
  bool strict = false;
};

/// Hessian, inverse, Cartan coefficients and energy. Symbolic inverses are
/// built for r <= 4; larger ranks fall back to pointwise factorization.
/// Regularity is certified on the sample box; in strict mode a singular
/// sample raises SingularHessian with the located point.
LagrangianData build(const Expr& L, const AlgebroidChart& A, InverseMode mode = InverseMode::Symbolic,
                     const RegularityOptions& reg = {});

/// Fiber derivative dL/dy at a point.
Eigen::VectorXd legendre(const LagrangianData& D, const Bindings& p);

}  // namespace hamspray
