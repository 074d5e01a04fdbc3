#include "hamspray/lagrangian.hpp"

#include <Eigen/LU>
#include <cmath>
#include <random>

namespace hamspray {

std::vector<Symbol> LagrangianData::coords() const {
  std::vector<Symbol> out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

Eigen::MatrixXd LagrangianData::minv_at(const Bindings& b) const {
  if (Minv) return eval(*Minv, b);
  Eigen::MatrixXd m = eval(M, b);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    std::vector<double> w;
    for (auto s : coords()) w.push_back(b.get(s));
    throw SingularHessian("Hessian is singular", w);
  }
  return lu.inverse();
}

namespace {

// Locates a zero of the determinant on a sample box, or returns empty.
std::vector<double> find_singular_point(const std::function<double(const Bindings&)>& det,
                                        const std::vector<Symbol>& vars, const RegularityOptions& reg) {
  std::mt19937_64 rng(reg.sample.seed);
  std::vector<double> prev_pt;
  double prev_val = 0;
  Bindings b;
  auto at = [&](const std::vector<double>& pt) {
    for (std::size_t i = 0; i < vars.size(); ++i) b.set(vars[i], pt[i]);
    return det(b);
  };
  for (int trial = 0; trial < reg.sample.trials; ++trial) {
    std::vector<double> pt(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto [lo, hi] = reg.box.range(vars[i]);
      pt[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    double v;
    try {
      v = at(pt);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(v) || std::abs(v) < reg.sample.tol) return pt;
    if (!prev_pt.empty() && (v > 0) != (prev_val > 0)) {
      // Bisect along the segment joining two samples of opposite sign.
      std::vector<double> a = prev_pt, c = pt, mid(vars.size());
      double fa = prev_val;
      for (int it = 0; it < 200; ++it) {
        for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (a[i] + c[i]);
        double fm;
        try {
          fm = at(mid);
        } catch (const DomainError&) {
          return mid;
        }
        if (fm == 0 || !std::isfinite(fm)) return mid;
        if ((fm > 0) == (fa > 0)) {
          a = mid;
          fa = fm;
        } else {
          c = mid;
        }
      }
      return mid;
    }
    prev_pt = pt;
    prev_val = v;
  }
  return {};
}

}  // namespace

LagrangianData build(const Expr& L, const AlgebroidChart& A, InverseMode mode, const RegularityOptions& reg) {
  LagrangianData D;
  D.x = A.x();
  D.y = A.y();
  D.L = L;
  const int r = A.r();
  D.thetaL = ExprVector(r);
  for (int k = 0; k < r; ++k) D.thetaL(k) = diff(L, D.y[k]);
  D.M = zeros(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      D.M(i, j) = diff(D.thetaL(i), D.y[j]);
      D.M(j, i) = D.M(i, j);
    }
  std::vector<Expr> terms{-L};
  for (int k = 0; k < r; ++k) terms.push_back(Expr(D.y[k]) * D.thetaL(k));
  D.EL = add(std::move(terms));

  D.mode = (mode == InverseMode::Symbolic && r <= 4) ? InverseMode::Symbolic : InverseMode::Pointwise;
  std::function<double(const Bindings&)> det_fn;
  if (D.mode == InverseMode::Symbolic) {
    D.detM = determinant(D.M);
    if (D.detM->is_const()) {
      D.regular = !D.detM->is_literal_zero();
      if (!D.regular) D.singular_witness.assign(A.n() + r, 0.0);
    }
    if (!D.detM->is_literal_zero()) D.Minv = inverse(D.M);
    det_fn = [det = *D.detM](const Bindings& b) { return eval(det, b); };
  } else {
    det_fn = [&D](const Bindings& b) { return eval(D.M, b).determinant(); };
  }
  if (!D.detM || !D.detM->is_const()) {
    D.singular_witness = find_singular_point(det_fn, D.coords(), reg);
    D.regular = D.singular_witness.empty();
  }
  if (!D.regular && reg.strict) throw SingularHessian("Hessian of L is singular on the sample box", D.singular_witness);
  return D;
}

Eigen::VectorXd legendre(const LagrangianData& D, const Bindings& p) {
  Eigen::VectorXd out(D.thetaL.size());
  for (Eigen::Index k = 0; k < out.size(); ++k) out(k) = eval(D.thetaL(k), p);
  return out;
}

}  // namespace hamspray
