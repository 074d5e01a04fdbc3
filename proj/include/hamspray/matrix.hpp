#pragma once

#include <Eigen/Core>

#include "hamspray/expr.hpp"

namespace Eigen {

template <>
struct NumTraits<hamspray::Expr> : GenericNumTraits<hamspray::Expr> {
  using Real = hamspray::Expr;
  using NonInteger = hamspray::Expr;
  using Nested = hamspray::Expr;
  using Literal = hamspray::Expr;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 20,
    MulCost = 40
  };
  static inline Real epsilon() { return hamspray::Expr(0); }
  static inline Real dummy_precision() { return hamspray::Expr(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace hamspray {

using ExprMatrix = Eigen::Matrix<Expr, Eigen::Dynamic, Eigen::Dynamic>;
using ExprVector = Eigen::Matrix<Expr, Eigen::Dynamic, 1>;

/// Matrix product through the canonical constructors (no blocking kernels).
template <typename A, typename B>
ExprMatrix product(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  ExprMatrix out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      std::vector<Expr> terms;
      terms.reserve(a.cols());
      for (Eigen::Index k = 0; k < a.cols(); ++k) terms.push_back(a(i, k) * b(k, j));
      out(i, j) = add(std::move(terms));
    }
  return out;
}

ExprMatrix zeros(Eigen::Index rows, Eigen::Index cols);
ExprMatrix identity(Eigen::Index n);

/// Laplace expansion; intended for n <= 4.
Expr determinant(const ExprMatrix& m);
ExprMatrix adjugate(const ExprMatrix& m);
/// adj(m) * det(m)^-1. Throws DomainError if det is literally 0.
ExprMatrix inverse(const ExprMatrix& m);

ExprMatrix diff(const ExprMatrix& m, Symbol v);
ExprMatrix substitute(const ExprMatrix& m, const Substitution& s);
Eigen::MatrixXd eval(const ExprMatrix& m, const Bindings& b);

}  // namespace hamspray
