#pragma once

/// \file
/// Dense skew-symmetric multilinear forms over a local frame, and the Koszul
/// differential of a frame given by its anchor and structure functions.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hamspray/matrix.hpp"

namespace hamspray {

/// Coefficients of a k-form on a rank-m frame, one per increasing k-tuple.
class SkewForm {
 public:
  SkewForm() : SkewForm(0, 0) {}
  SkewForm(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return coef_.size(); }

  /// Increasing index tuple stored at `slot`.
  const std::vector<int>& tuple(std::size_t slot) const { return (*tuples_)[slot]; }
  Expr& operator[](std::size_t slot) { return coef_[slot]; }
  const Expr& operator[](std::size_t slot) const { return coef_[slot]; }

  /// Value on basis elements in any order (sign of the sorting permutation;
  /// zero on repeated indices).
  Expr get(std::span<const int> idx) const;
  Expr get(std::initializer_list<int> idx) const { return get(std::span<const int>(idx.begin(), idx.size())); }
  /// Sets the component for `idx` in any order, adjusting the sign.
  void set(std::span<const int> idx, const Expr& value);
  void set(std::initializer_list<int> idx, const Expr& value) {
    set(std::span<const int>(idx.begin(), idx.size()), value);
  }

  bool is_literal_zero() const;

  SkewForm map(const std::function<Expr(const Expr&)>& f) const;

  friend SkewForm operator+(const SkewForm& a, const SkewForm& b);
  friend SkewForm operator-(const SkewForm& a, const SkewForm& b);
  friend SkewForm operator*(const Expr& s, const SkewForm& a);
  friend bool operator==(const SkewForm& a, const SkewForm& b);

 private:
  std::size_t slot_of(std::span<const int> sorted) const;

  int dim_;
  int degree_;
  std::shared_ptr<const std::vector<std::vector<int>>> tuples_;
  std::vector<Expr> coef_;
};

/// Local frame {e_a} of a Lie algebroid whose base has coordinates `vars`:
/// rho(e_a) = sum_v anchor(a, v) d/d vars[v], [e_a, e_b] = sum_c structure[c](a, b) e_c.
struct Frame {
  std::vector<Symbol> vars;
  ExprMatrix anchor;
  std::vector<ExprMatrix> structure;

  int rank() const { return static_cast<int>(anchor.rows()); }
  /// rho(e_a) applied to a function.
  Expr derive(int a, const Expr& f) const;
  /// rho(s) applied to a function, s given by frame coefficients.
  Expr derive(const ExprVector& s, const Expr& f) const;
  /// Bracket of two sections given by frame coefficients.
  ExprVector bracket(const ExprVector& s1, const ExprVector& s2) const;
};

/// Frame spanned by new_a = sum_b T(b, a) e_b; `Tinv` is the inverse of T.
Frame change_frame(const Frame& f, const ExprMatrix& T, const ExprMatrix& Tinv);

/// Coefficients of `w` with respect to new_a = sum_b T(b, a) e_b.
SkewForm transform(const SkewForm& w, const ExprMatrix& T);

/// Exterior differential by the Koszul formula.
SkewForm koszul(const Frame& f, const SkewForm& w);

/// Contraction i_s w for a section given by frame coefficients.
SkewForm interior(const ExprVector& s, const SkewForm& w);

/// Every component labelled by its index tuple (1-based, comma separated).
std::vector<std::pair<std::string, Expr>> labelled(const SkewForm& w, const std::string& prefix);

/// Coefficient matrix of a 2-form: m(a, b) = w(e_a, e_b).
ExprMatrix as_matrix(const SkewForm& w);

}  // namespace hamspray
