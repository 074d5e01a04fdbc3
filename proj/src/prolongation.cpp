#include "hamspray/prolongation.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <random>

namespace hamspray {

ExprVector ProlongSection::stacked() const {
  ExprVector v(a.size() + b.size());
  v << a, b;
  return v;
}

ProlongSection ProlongSection::from_stacked(const ExprVector& v) {
  const Eigen::Index r = v.size() / 2;
  return {v.head(r), v.tail(r)};
}

Frame prolongation_frame(const AlgebroidChart& A) {
  const int n = A.n(), r = A.r();
  Frame f;
  f.vars = A.coords();
  f.anchor = zeros(2 * r, n + r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < n; ++i) f.anchor(j, i) = A.rho(i, j);
    f.anchor(r + j, n + j) = Expr(1);
  }
  f.structure.assign(2 * r, zeros(2 * r, 2 * r));
  for (int k = 0; k < r; ++k) f.structure[k].topLeftCorner(r, r) = A.C()[k];
  return f;
}

VectorFieldOnA anchor(const AlgebroidChart& A, const ProlongSection& S) {
  VectorFieldOnA V;
  ExprMatrix vx = product(A.rho(), S.a);
  V.Vx = vx.col(0);
  V.Vy = S.b;
  return V;
}

ProlongSection lie_bracket(const AlgebroidChart& A, const ProlongSection& S1, const ProlongSection& S2) {
  return ProlongSection::from_stacked(prolongation_frame(A).bracket(S1.stacked(), S2.stacked()));
}

ProlongForm d_prolong(const AlgebroidChart& A, const ProlongForm& F) {
  if (F.degree() > 2) throw DegreeError("d_prolong is provided up to degree 2");
  if (F.dim() != 2 * A.r()) throw DegreeError("form rank does not match the prolongation");
  return koszul(prolongation_frame(A), F);
}

ProlongSection vertical_J(const ProlongSection& S) {
  return {ExprVector::Constant(S.a.size(), Expr(0)), S.a};
}

ProlongForm J_dual(const ProlongForm& F) {
  const int r = F.dim() / 2;
  ProlongForm out(F.dim(), F.degree());
  for (std::size_t slot = 0; slot < out.size(); ++slot) {
    std::vector<int> idx = out.tuple(slot);
    std::vector<Expr> terms;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (idx[s] >= r) continue;
      std::vector<int> moved = idx;
      moved[s] += r;
      terms.push_back(-F.get(moved));
    }
    out[slot] = add(std::move(terms));
  }
  return out;
}

ProlongSection liouville(const AlgebroidChart& A) {
  ProlongSection S{ExprVector::Constant(A.r(), Expr(0)), ExprVector(A.r())};
  for (int j = 0; j < A.r(); ++j) S.b(j) = Expr(A.y()[j]);
  return S;
}

CartanSections cartan_sections(const LagrangianData& D, const AlgebroidChart& A) {
  const int r = A.r();
  CartanSections c;
  c.theta = ProlongForm(2 * r, 1);
  for (int k = 0; k < r; ++k) c.theta.set({k}, D.thetaL(k));
  c.omega = d_prolong(A, c.theta);
  return c;
}

ProlongForm cartan_block_formula(const LagrangianData& D, const AlgebroidChart& A) {
  const int r = A.r();
  ExprMatrix N0 = assemble_N(D, A, AForm(r, 2));
  ProlongForm w(2 * r, 2);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      w.set({r + i, j}, D.M(i, j));
      if (i < j) w.set({i, j}, N0(i, j));
    }
  return w;
}

namespace {

ExprVector differential(const AlgebroidChart& A, const Expr& G) {
  Frame f = prolongation_frame(A);
  ExprVector dG(2 * A.r());
  for (int b = 0; b < 2 * A.r(); ++b) dG(b) = f.derive(b, G);
  return dG;
}

std::vector<double> point_of(const AlgebroidChart& A, const Bindings& p) {
  std::vector<double> w;
  for (auto s : A.coords()) w.push_back(p.bound(s) ? p.get(s) : 0.0);
  return w;
}

}  // namespace

void check_nondegenerate(const AlgebroidChart& A, const ProlongForm& Omega, const Box& box,
                         const SampleOptions& opt) {
  const ExprMatrix W = as_matrix(Omega);
  const auto vars = A.coords();
  std::mt19937_64 rng(opt.seed);
  for (int t = 0; t < opt.trials; ++t) {
    Bindings b;
    for (auto s : vars) {
      auto [lo, hi] = box.range(s);
      b.set(s, std::uniform_real_distribution<double>(lo, hi)(rng));
    }
    double det;
    try {
      det = eval(W, b).determinant();
    } catch (const DomainError&) {
      continue;
    }
    if (std::abs(det) < opt.tol) throw DegenerateForm("2-section is degenerate", point_of(A, b));
  }
}

ProlongSection hamiltonian_section(const AlgebroidChart& A, const ProlongForm& Omega, const Expr& G) {
  const int r = A.r();
  const ExprMatrix W = as_matrix(Omega);
  const ExprVector dG = differential(A, G);
  const ExprMatrix delta = W.bottomRightCorner(r, r);
  const bool split = std::all_of(delta.data(), delta.data() + delta.size(),
                                 [](const Expr& e) { return e.is_literal_zero(); });
  std::vector<double> origin(A.n() + r, 0.0);
  if (split && r <= 4) {
    // W = [[alpha, -beta^T], [beta, 0]]: beta f = dG_Y, beta^T g = alpha f - dG_E.
    ExprMatrix alpha = W.topLeftCorner(r, r);
    ExprMatrix beta = W.bottomLeftCorner(r, r);
    if (determinant(beta).is_literal_zero()) throw DegenerateForm("2-section is degenerate", origin);
    ExprMatrix f = product(inverse(beta), dG.tail(r));
    ExprMatrix rhs = product(alpha, f) - ExprMatrix(dG.head(r));
    ExprMatrix g = product(inverse(ExprMatrix(beta.transpose())), rhs);
    return {f.col(0), g.col(0)};
  }
  if (2 * r <= 4) {
    if (determinant(W).is_literal_zero()) throw DegenerateForm("2-section is degenerate", origin);
    return ProlongSection::from_stacked(product(inverse(W), dG).col(0));
  }
  throw Error("symbolic Hamiltonian section needs a vanishing vertical block and r <= 4; use the pointwise solve");
}

Eigen::VectorXd hamiltonian_section_at(const AlgebroidChart& A, const ProlongForm& Omega, const Expr& G,
                                       const Bindings& p) {
  Eigen::MatrixXd W = eval(as_matrix(Omega), p);
  Eigen::VectorXd dG(W.rows());
  const ExprVector d = differential(A, G);
  for (Eigen::Index b = 0; b < dG.size(); ++b) dG(b) = eval(d(b), p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(W);
  if (!lu.isInvertible()) throw DegenerateForm("2-section is degenerate", point_of(A, p));
  return lu.solve(dG);
}

ValidationReport is_SODE(const AlgebroidChart& A, const ProlongSection& S, const Box& box, const SampleOptions& opt) {
  std::vector<std::pair<std::string, Expr>> residuals;
  for (int j = 0; j < A.r(); ++j)
    residuals.emplace_back("sode[" + std::to_string(j + 1) + "]", S.a(j) - Expr(A.y()[j]));
  return check_all("sode", residuals, box, opt);
}

ExprMatrix adapted_transform(const EhresmannConn& g) {
  const Eigen::Index r = g.gamma.rows();
  ExprMatrix T = identity(2 * r);
  T.bottomLeftCorner(r, r) = -g.gamma;
  return T;
}

ExprMatrix adapted_transform_inverse(const EhresmannConn& g) {
  const Eigen::Index r = g.gamma.rows();
  ExprMatrix T = identity(2 * r);
  T.bottomLeftCorner(r, r) = g.gamma;
  return T;
}

ProlongForm to_adapted(const ProlongForm& F, const EhresmannConn& g) { return transform(F, adapted_transform(g)); }

ProlongForm from_adapted(const ProlongForm& F, const EhresmannConn& g) {
  return transform(F, adapted_transform_inverse(g));
}

namespace {

ProlongForm block_of(const ProlongForm& Fa, int p) {
  ProlongForm out(Fa.dim(), Fa.degree());
  for (std::size_t s = 0; s < Fa.size(); ++s)
    if (bidegree(Fa, s).first == p) out[s] = Fa[s];
  return out;
}

}  // namespace

std::vector<ProlongForm> bigrade(const ProlongForm& F, const EhresmannConn& g) {
  ProlongForm Fa = to_adapted(F, g);
  std::vector<ProlongForm> out;
  for (int p = 0; p <= F.degree(); ++p) out.push_back(block_of(Fa, p));
  return out;
}

DSplit d_split_adapted(const AlgebroidChart& A, const ProlongForm& Fa, const EhresmannConn& g) {
  if (Fa.degree() > 2) throw DegreeError("d_split is provided up to degree 2");
  const Frame frame = change_frame(prolongation_frame(A), adapted_transform(g), adapted_transform_inverse(g));
  const int dim = Fa.dim(), k = Fa.degree();
  DSplit out{ProlongForm(dim, k + 1), ProlongForm(dim, k + 1), ProlongForm(dim, k + 1)};
  for (int p = 0; p <= k; ++p) {
    ProlongForm block = block_of(Fa, p);
    if (block.is_literal_zero()) continue;
    ProlongForm d = koszul(frame, block);
    for (std::size_t s = 0; s < d.size(); ++s) {
      if (d[s].is_literal_zero()) continue;
      const int P = bidegree(d, s).first;
      if (P == p + 1) {
        out.d1[s] = out.d1[s] + d[s];
      } else if (P == p) {
        out.d2[s] = out.d2[s] + d[s];
      } else if (P == p + 2) {
        out.d3[s] = out.d3[s] + d[s];
      } else {
        throw Error("differential left the admissible bidegrees");
      }
    }
  }
  return out;
}

DSplit d_split(const AlgebroidChart& A, const ProlongForm& F, const EhresmannConn& g) {
  return d_split_adapted(A, to_adapted(F, g), g);
}

ProlongForm pullback_hor(const AlgebroidChart& A, const AForm& theta) {
  const int r = A.r();
  if (theta.dim() != r) throw DegreeError("form rank does not match the algebroid");
  ProlongForm out(2 * r, theta.degree());
  for (std::size_t s = 0; s < theta.size(); ++s) out.set(theta.tuple(s), theta[s]);
  return out;
}

Decomposition decompose_symplectic(const AlgebroidChart& A, const ProlongForm& Omega, const EhresmannConn& g,
                                   const Box& box, const SampleOptions& opt) {
  const int r = A.r();
  if (Omega.degree() != 2) throw DegreeError("decomposition needs a 2-form");
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      if (!is_zero(Omega.get({r + i, r + j}), box, opt).passed())
        throw NotVerticalVanishing("2-form does not vanish on the vertical subbundle");
  ProlongForm dO = d_prolong(A, Omega);
  for (std::size_t s = 0; s < dO.size(); ++s)
    if (!is_zero(dO[s], box, opt).passed()) throw NotClosed("2-form is not closed");

  ProlongForm Oa = to_adapted(Omega, g);
  ProlongForm zeta_a = dprime_primitive(block_of(Oa, 1), A.y(), box, opt);
  DSplit dz = d_split_adapted(A, zeta_a, g);
  ProlongForm Theta_a = block_of(Oa, 2) - dz.d1;

  Decomposition out;
  out.Theta = from_adapted(Theta_a, g);
  out.zeta = from_adapted(zeta_a, g);
  std::vector<std::pair<std::string, Expr>> residuals = labelled(out.Theta + d_prolong(A, out.zeta) - Omega,
                                                                 "reassembly");
  auto closed = labelled(d_prolong(A, out.Theta), "closed");
  residuals.insert(residuals.end(), closed.begin(), closed.end());
  out.report = check_all("decomposition", residuals, box, opt);
  return out;
}

int rank_at(const ProlongForm& F, const Bindings& p, double tol) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(eval(as_matrix(F), p));
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

TheoremZ theorem_Z(const LagrangianData& D, const AlgebroidChart& A, const ProlongForm& Theta_p, const Expr& f,
                   const Box& box, const SampleOptions& opt) {
  const int r = A.r();
  for (auto s : A.y())
    if (depends_on(f, s)) throw Error("f must be a function on the base");
  CartanSections cs = cartan_sections(D, A);
  TheoremZ out;
  out.sigma = hamiltonian_section(A, cs.omega, D.EL);
  ProlongForm df(2 * r, 0);
  df[0] = f;
  df = d_prolong(A, df);
  ProlongForm rhs = ProlongForm(2 * r, 1) - df - interior(out.sigma.stacked(), Theta_p);
  for (int k = 0; k < r; ++k)
    if (!is_zero(rhs.get({r + k}), box, opt).passed())
      throw Error("right-hand side has a vertical component; no vertical solution exists");
  // i_Z omega_L (E_j) = sum_i g^i omega_L(Upsilon_i, E_j) = (beta^T g)_j.
  ExprMatrix betaT(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) betaT(j, i) = cs.omega.get({r + i, j});
  ExprVector rhsE(r);
  for (int j = 0; j < r; ++j) rhsE(j) = rhs.get({j});
  out.Z = {ExprVector::Constant(r, Expr(0)), product(inverse(betaT), rhsE).col(0)};

  ProlongSection total{out.Z.a + out.sigma.a, out.Z.b + out.sigma.b};
  out.report = is_SODE(A, total, box, opt);
  ProlongForm dG(2 * r, 0);
  dG[0] = D.EL + f;
  auto eq = labelled(interior(total.stacked(), Theta_p + cs.omega) + d_prolong(A, dG), "equation");
  out.report.append(check_all("theorem_Z", eq, box, opt));
  out.report.check = "theorem_Z";
  return out;
}

}  // namespace hamspray
