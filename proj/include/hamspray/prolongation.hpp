#pragma once

/// \file
/// Calculus on the prolongation of A over itself in the local basis
/// {E_i, Upsilon_j}. Forms and sections have rank 2r: indices 0..r-1 are the
/// E's, r..2r-1 the Upsilon's.

#include "hamspray/homotopy.hpp"
#include "hamspray/poisson.hpp"

namespace hamspray {

struct ProlongSection {
  ExprVector a;  // coefficients of E_i
  ExprVector b;  // coefficients of Upsilon_j

  ExprVector stacked() const;
  static ProlongSection from_stacked(const ExprVector& v);
};

using ProlongForm = SkewForm;

/// gamma(j, i) = gamma^j_i; horizontal lifts hor_i = E_i - gamma^j_i Upsilon_j.
struct EhresmannConn {
  ExprMatrix gamma;
  static EhresmannConn zero(int r) { return {zeros(r, r)}; }
};

/// rho(E_j) = rho^i_j d/dx^i, rho(Upsilon_k) = d/dy^k, [E_i, E_j] = C^k_ij E_k.
Frame prolongation_frame(const AlgebroidChart& A);

VectorFieldOnA anchor(const AlgebroidChart& A, const ProlongSection& S);
ProlongSection lie_bracket(const AlgebroidChart& A, const ProlongSection& S1, const ProlongSection& S2);

/// Differential on forms of degree <= 2.
ProlongForm d_prolong(const AlgebroidChart& A, const ProlongForm& F);

/// (a, b) -> (0, a).
ProlongSection vertical_J(const ProlongSection& S);
/// Dual derivation: J E^i = 0, J Upsilon^j = -E^j.
ProlongForm J_dual(const ProlongForm& F);

/// Delta = y^j Upsilon_j.
ProlongSection liouville(const AlgebroidChart& A);

struct CartanSections {
  ProlongForm theta;  // dL/dy^k E^k
  ProlongForm omega;  // d theta
};
CartanSections cartan_sections(const LagrangianData& D, const AlgebroidChart& A);

/// Reference Cartan 2-section from its block formula: omega(Upsilon_i, E_j) = M_ij,
/// omega(E_k, E_l) = N0_kl.
ProlongForm cartan_block_formula(const LagrangianData& D, const AlgebroidChart& A);

/// Sampled nondegeneracy of a 2-form; throws DegenerateForm with the point.
void check_nondegenerate(const AlgebroidChart& A, const ProlongForm& Omega, const Box& box, const SampleOptions& opt);

/// Unique sigma with i_sigma Omega = -dG. Symbolic block elimination when the
/// Upsilon^Upsilon block vanishes and r <= 4, full adjugate when 2r <= 4.
ProlongSection hamiltonian_section(const AlgebroidChart& A, const ProlongForm& Omega, const Expr& G);

/// The same solve at one point (any rank).
Eigen::VectorXd hamiltonian_section_at(const AlgebroidChart& A, const ProlongForm& Omega, const Expr& G,
                                       const Bindings& p);

/// Residuals a^j - y^j.
ValidationReport is_SODE(const AlgebroidChart& A, const ProlongSection& S, const Box& box, const SampleOptions& opt);

/// Frame change to {hor_i, Upsilon_j}: new_a = sum_b T(b, a) old_b.
ExprMatrix adapted_transform(const EhresmannConn& g);
ExprMatrix adapted_transform_inverse(const EhresmannConn& g);
ProlongForm to_adapted(const ProlongForm& F, const EhresmannConn& g);
ProlongForm from_adapted(const ProlongForm& F, const EhresmannConn& g);

/// Components of F in the adapted frame, one form per horizontal degree p.
std::vector<ProlongForm> bigrade(const ProlongForm& F, const EhresmannConn& g);

/// d = d' + d'' + partial by bidegree shifts (1,0), (0,1), (2,-1); all three
/// are returned in the adapted frame.
struct DSplit {
  ProlongForm d1, d2, d3;
};
DSplit d_split(const AlgebroidChart& A, const ProlongForm& F, const EhresmannConn& g);
/// Same with the input already in the adapted frame.
DSplit d_split_adapted(const AlgebroidChart& A, const ProlongForm& Fa, const EhresmannConn& g);

/// E^E block theta_ij, other blocks zero.
ProlongForm pullback_hor(const AlgebroidChart& A, const AForm& theta);

/// Omega = Theta + d zeta with zeta horizontal, d'' zeta = Omega_11 and
/// Theta = Omega_20 - d' zeta, returned in the original frame with the
/// reassembly and closedness report.
struct Decomposition {
  ProlongForm Theta;
  ProlongForm zeta;
  ValidationReport report;
};
Decomposition decompose_symplectic(const AlgebroidChart& A, const ProlongForm& Omega, const EhresmannConn& g,
                                   const Box& box, const SampleOptions& opt);

/// Rank of the coefficient matrix of a 2-form at a point.
int rank_at(const ProlongForm& F, const Bindings& p, double tol = 1e-9);

/// Vertical Z with i_Z omega_L = -d(f) - i_sigma Theta_p, sigma = sigma_{E_L}.
struct TheoremZ {
  ProlongSection Z;
  ProlongSection sigma;
  ValidationReport report;  // SODE of Z + sigma and the combined equation
};
TheoremZ theorem_Z(const LagrangianData& D, const AlgebroidChart& A, const ProlongForm& Theta_p, const Expr& f,
                   const Box& box, const SampleOptions& opt);

}  // namespace hamspray
