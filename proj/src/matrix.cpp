#include "hamspray/matrix.hpp"

namespace hamspray {

ExprMatrix zeros(Eigen::Index rows, Eigen::Index cols) { return ExprMatrix::Constant(rows, cols, Expr(0)); }

ExprMatrix identity(Eigen::Index n) {
  ExprMatrix m = zeros(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = Expr(1);
  return m;
}

namespace {

ExprMatrix minor_of(const ExprMatrix& m, Eigen::Index row, Eigen::Index col) {
  const Eigen::Index n = m.rows();
  ExprMatrix out(n - 1, n - 1);
  for (Eigen::Index i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, oj = 0; j < n; ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return Expr(1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  std::vector<Expr> terms;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m(0, j).is_literal_zero()) continue;
    Expr t = m(0, j) * determinant(minor_of(m, 0, j));
    terms.push_back(j % 2 == 0 ? t : -t);
  }
  return add(std::move(terms));
}

ExprMatrix adjugate(const ExprMatrix& m) {
  const Eigen::Index n = m.rows();
  ExprMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = Expr(1);
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Expr c = determinant(minor_of(m, i, j));
      adj(j, i) = (i + j) % 2 == 0 ? c : -c;
    }
  return adj;
}

ExprMatrix inverse(const ExprMatrix& m) {
  Expr det = determinant(m);
  if (det.is_literal_zero()) throw DomainError("matrix is singular");
  Expr inv_det = pow(det, -1);
  ExprMatrix adj = adjugate(m);
  for (Eigen::Index i = 0; i < adj.size(); ++i) adj(i) = adj(i) * inv_det;
  return adj;
}

ExprMatrix diff(const ExprMatrix& m, Symbol v) {
  return m.unaryExpr([v](const Expr& e) { return diff(e, v); });
}

ExprMatrix substitute(const ExprMatrix& m, const Substitution& s) {
  return m.unaryExpr([&s](const Expr& e) { return substitute(e, s); });
}

Eigen::MatrixXd eval(const ExprMatrix& m, const Bindings& b) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) out(i) = eval(m(i), b);
  return out;
}

}  // namespace hamspray
