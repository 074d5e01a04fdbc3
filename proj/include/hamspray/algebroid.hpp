#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamspray/skew_form.hpp"
#include "hamspray/zero_test.hpp"

namespace hamspray {

/// A Lie algebroid of rank r over an n-dimensional base, in one adapted chart
/// (x^1..x^n, y^1..y^r).
class AlgebroidChart {
 public:
  AlgebroidChart() = default;
  AlgebroidChart(std::vector<Symbol> x, std::vector<Symbol> y);

  int n() const { return static_cast<int>(x_.size()); }
  int r() const { return static_cast<int>(y_.size()); }
  const std::vector<Symbol>& x() const { return x_; }
  const std::vector<Symbol>& y() const { return y_; }
  /// x followed by y.
  std::vector<Symbol> coords() const;

  /// rho^i_j: component of rho(e_j) along d/dx^i.
  const Expr& rho(int i, int j) const { return rho_(i, j); }
  const ExprMatrix& rho() const { return rho_; }
  void set_rho(int i, int j, const Expr& e);

  /// C^k_ij with [e_i, e_j] = C^k_ij e_k. Setting (k,i,j) also sets (k,j,i).
  const Expr& C(int k, int i, int j) const { return C_[k](i, j); }
  const std::vector<ExprMatrix>& C() const { return C_; }
  void set_C(int k, int i, int j, const Expr& e);

  /// Frame of A over the base coordinates.
  Frame frame() const;

 private:
  std::vector<Symbol> x_, y_;
  ExprMatrix rho_;
  std::vector<ExprMatrix> C_;
};

/// Sections of the k-th exterior power of A*, coefficients in x only.
using AForm = SkewForm;

/// Residuals of both structure equations for every index combination.
ValidationReport validate_structure(const AlgebroidChart& A, const Box& box, const SampleOptions& opt);

/// The algebroid differential on forms of degree <= 2.
AForm d_A(const AlgebroidChart& A, const AForm& theta);

/// A catalog chart with its default Lagrangian and closed 2-section.
struct Fixture {
  std::string name;
  AlgebroidChart chart;
  Expr L;
  AForm theta;  // zero when the catalog supplies none
};

/// TM over R^n with L = 1/2 g_ij y^i y^j (g = identity when empty).
/// Supplies the constant closed 2-form dx^1 ^ dx^2 when n >= 2.
Fixture tangent(int n, std::optional<ExprMatrix> metric = std::nullopt);

/// so(3) acting on R^3 by rotations, L = 1/2 |y|^2, theta = d_A(x^i e^i).
Fixture action_so3();

/// T*M for a Poisson bivector Pi on R^n: rho^i_j = -Pi^ij,
/// C^k_ij = dPi^ij/dx^k, L = 1/2 g^ij p_i p_j, theta_ij = Pi^ij.
Fixture cotangent_poisson(const ExprMatrix& Pi, const ExprMatrix& g);

}  // namespace hamspray
