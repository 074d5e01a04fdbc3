#pragma once

#include "hamspray/lagrangian.hpp"

namespace hamspray {

/// Cyclic residuals sum_cyc(i,j,k) rho^r_k dTheta_ij/dx^r - C^r_jk Theta_ri
/// for i < j < k, labelled "closed[i,j,k]".
std::vector<std::pair<std::string, Expr>> closedness_residuals(const AForm& theta, const AlgebroidChart& A);

ValidationReport check_closed(const AForm& theta, const AlgebroidChart& A, const Box& box, const SampleOptions& opt);

/// N_ij = rho^k_i d2L/dx^k dy^j - rho^k_j d2L/dx^k dy^i - dL/dy^k C^k_ij + Theta_ij.
ExprMatrix assemble_N(const LagrangianData& D, const AlgebroidChart& A, const AForm& theta);

}  // namespace hamspray
