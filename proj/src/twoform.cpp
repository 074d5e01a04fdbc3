#include "hamspray/twoform.hpp"

namespace hamspray {

std::vector<std::pair<std::string, Expr>> closedness_residuals(const AForm& theta, const AlgebroidChart& A) {
  if (theta.degree() != 2 || theta.dim() != A.r()) throw DegreeError("expected a 2-section of A");
  const int n = A.n(), r = A.r();
  std::vector<std::pair<std::string, Expr>> out;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int k = j + 1; k < r; ++k) {
        std::vector<Expr> terms;
        const int cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
        for (const auto& c : cyc) {
          const Expr t = theta.get({c[0], c[1]});
          for (int q = 0; q < n; ++q) terms.push_back(A.rho(q, c[2]) * diff(t, A.x()[q]));
          for (int q = 0; q < r; ++q) terms.push_back(-A.C(q, c[1], c[2]) * theta.get({q, c[0]}));
        }
        out.emplace_back("closed[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                             std::to_string(k + 1) + "]",
                         add(std::move(terms)));
      }
  return out;
}

ValidationReport check_closed(const AForm& theta, const AlgebroidChart& A, const Box& box, const SampleOptions& opt) {
  return check_all("closed", closedness_residuals(theta, A), box, opt);
}

ExprMatrix assemble_N(const LagrangianData& D, const AlgebroidChart& A, const AForm& theta) {
  const int n = A.n(), r = A.r();
  // mixed(k, j) = d2L / dx^k dy^j
  ExprMatrix mixed(n, r);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < r; ++j) mixed(k, j) = diff(D.thetaL(j), A.x()[k]);
  ExprMatrix N = zeros(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      std::vector<Expr> terms{theta.get({i, j})};
      for (int k = 0; k < n; ++k) {
        terms.push_back(A.rho(k, i) * mixed(k, j));
        terms.push_back(-A.rho(k, j) * mixed(k, i));
      }
      for (int k = 0; k < r; ++k) terms.push_back(-D.thetaL(k) * A.C(k, i, j));
      N(i, j) = add(std::move(terms));
      N(j, i) = -N(i, j);
    }
  return N;
}

}  // namespace hamspray
