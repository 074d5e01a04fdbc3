#include "hamspray/skew_form.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace hamspray {

namespace {

std::shared_ptr<const std::vector<std::vector<int>>> tuples_for(int dim, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<std::vector<int>>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{dim, degree}];
  if (slot) return slot;
  auto out = std::make_shared<std::vector<std::vector<int>>>();
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == degree) {
      out->push_back(cur);
      return;
    }
    for (int i = start; i < dim; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  slot = out;
  return slot;
}

// Sorts in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j - 1] >= v[j]; --j) {
      if (v[j - 1] == v[j]) return 0;
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  return sign;
}

}  // namespace

SkewForm::SkewForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (degree < 0) throw DegreeError("negative degree");
  tuples_ = tuples_for(dim, degree);
  coef_.assign(tuples_->size(), Expr(0));
}

std::size_t SkewForm::slot_of(std::span<const int> sorted) const {
  auto it = std::lower_bound(tuples_->begin(), tuples_->end(), sorted,
                             [](const std::vector<int>& a, std::span<const int> b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                             });
  return static_cast<std::size_t>(it - tuples_->begin());
}

Expr SkewForm::get(std::span<const int> idx) const {
  std::vector<int> v(idx.begin(), idx.end());
  const int sign = sort_sign(v);
  if (sign == 0) return Expr(0);
  const Expr& c = coef_[slot_of(v)];
  return sign > 0 ? c : -c;
}

void SkewForm::set(std::span<const int> idx, const Expr& value) {
  std::vector<int> v(idx.begin(), idx.end());
  const int sign = sort_sign(v);
  if (sign == 0) throw DomainError("repeated index in skew component");
  coef_[slot_of(v)] = sign > 0 ? value : -value;
}

bool SkewForm::is_literal_zero() const {
  return std::all_of(coef_.begin(), coef_.end(), [](const Expr& e) { return e.is_literal_zero(); });
}

SkewForm SkewForm::map(const std::function<Expr(const Expr&)>& f) const {
  SkewForm out = *this;
  for (auto& c : out.coef_) c = f(c);
  return out;
}

SkewForm operator+(const SkewForm& a, const SkewForm& b) {
  if (a.dim_ != b.dim_ || a.degree_ != b.degree_) throw DegreeError("form shapes differ");
  SkewForm out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.coef_[i] = a.coef_[i] + b.coef_[i];
  return out;
}

SkewForm operator-(const SkewForm& a, const SkewForm& b) {
  if (a.dim_ != b.dim_ || a.degree_ != b.degree_) throw DegreeError("form shapes differ");
  SkewForm out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.coef_[i] = a.coef_[i] - b.coef_[i];
  return out;
}

SkewForm operator*(const Expr& s, const SkewForm& a) {
  SkewForm out = a;
  for (auto& c : out.coef_) c = s * c;
  return out;
}

bool operator==(const SkewForm& a, const SkewForm& b) {
  return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.coef_ == b.coef_;
}

Expr Frame::derive(int a, const Expr& f) const {
  std::vector<Expr> terms;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const Expr& c = anchor(a, static_cast<Eigen::Index>(v));
    if (c.is_literal_zero() || !depends_on(f, vars[v])) continue;
    terms.push_back(c * diff(f, vars[v]));
  }
  return add(std::move(terms));
}

Expr Frame::derive(const ExprVector& s, const Expr& f) const {
  std::vector<Expr> terms;
  for (int a = 0; a < rank(); ++a)
    if (!s(a).is_literal_zero()) terms.push_back(s(a) * derive(a, f));
  return add(std::move(terms));
}

ExprVector Frame::bracket(const ExprVector& s1, const ExprVector& s2) const {
  const int m = rank();
  ExprVector out(m);
  for (int k = 0; k < m; ++k) {
    std::vector<Expr> terms;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const Expr& c = structure[k](a, b);
        if (c.is_literal_zero() || s1(a).is_literal_zero() || s2(b).is_literal_zero()) continue;
        terms.push_back(s1(a) * s2(b) * c);
      }
    terms.push_back(derive(s1, s2(k)));
    terms.push_back(-derive(s2, s1(k)));
    out(k) = add(std::move(terms));
  }
  return out;
}

Frame change_frame(const Frame& f, const ExprMatrix& T, const ExprMatrix& Tinv) {
  const int m = f.rank();
  Frame out;
  out.vars = f.vars;
  out.anchor = product(T.transpose(), f.anchor);
  out.structure.assign(m, zeros(m, m));
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      ExprVector u = f.bracket(T.col(a), T.col(b));
      ExprMatrix w = product(Tinv, u);
      for (int k = 0; k < m; ++k) {
        out.structure[k](a, b) = w(k, 0);
        out.structure[k](b, a) = -w(k, 0);
      }
    }
  return out;
}

SkewForm transform(const SkewForm& w, const ExprMatrix& T) {
  const int m = w.dim(), k = w.degree();
  SkewForm out(m, k);
  for (std::size_t slot = 0; slot < out.size(); ++slot) {
    const auto& a = out.tuple(slot);
    std::vector<Expr> terms;
    // w'(new_a...) = sum over increasing old tuples b of w_b * det T[b, a].
    for (std::size_t os = 0; os < w.size(); ++os) {
      const Expr& c = w[os];
      if (c.is_literal_zero()) continue;
      const auto& ob = w.tuple(os);
      ExprMatrix sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = T(ob[i], a[j]);
      Expr det = determinant(sub);
      if (!det.is_literal_zero()) terms.push_back(c * det);
    }
    if (k == 0) terms = {w[0]};
    out[slot] = add(std::move(terms));
  }
  return out;
}

SkewForm koszul(const Frame& f, const SkewForm& w) {
  const int m = w.dim(), k = w.degree();
  SkewForm out(m, k + 1);
  std::vector<int> rest;
  for (std::size_t slot = 0; slot < out.size(); ++slot) {
    const auto& idx = out.tuple(slot);
    std::vector<Expr> terms;
    for (int a = 0; a <= k; ++a) {
      rest.clear();
      for (int i = 0; i <= k; ++i)
        if (i != a) rest.push_back(idx[i]);
      Expr t = f.derive(idx[a], w.get(rest));
      terms.push_back(a % 2 == 0 ? t : -t);
    }
    for (int a = 0; a <= k; ++a)
      for (int b = a + 1; b <= k; ++b) {
        for (int c = 0; c < m; ++c) {
          const Expr& s = f.structure[c](idx[a], idx[b]);
          if (s.is_literal_zero()) continue;
          rest.assign(1, c);
          for (int i = 0; i <= k; ++i)
            if (i != a && i != b) rest.push_back(idx[i]);
          Expr t = s * w.get(rest);
          terms.push_back((a + b) % 2 == 0 ? t : -t);
        }
      }
    out[slot] = add(std::move(terms));
  }
  return out;
}

SkewForm interior(const ExprVector& s, const SkewForm& w) {
  if (w.degree() == 0) throw DegreeError("interior product of a function");
  const int m = w.dim();
  SkewForm out(m, w.degree() - 1);
  std::vector<int> idx;
  for (std::size_t slot = 0; slot < out.size(); ++slot) {
    std::vector<Expr> terms;
    for (int a = 0; a < m; ++a) {
      if (s(a).is_literal_zero()) continue;
      idx.assign(1, a);
      idx.insert(idx.end(), out.tuple(slot).begin(), out.tuple(slot).end());
      terms.push_back(s(a) * w.get(idx));
    }
    out[slot] = add(std::move(terms));
  }
  return out;
}

std::vector<std::pair<std::string, Expr>> labelled(const SkewForm& w, const std::string& prefix) {
  std::vector<std::pair<std::string, Expr>> out;
  for (std::size_t slot = 0; slot < w.size(); ++slot) {
    std::string label = prefix + "[";
    const auto& t = w.tuple(slot);
    for (std::size_t i = 0; i < t.size(); ++i) label += (i ? "," : "") + std::to_string(t[i] + 1);
    out.emplace_back(label + "]", w[slot]);
  }
  return out;
}

ExprMatrix as_matrix(const SkewForm& w) {
  if (w.degree() != 2) throw DegreeError("coefficient matrix needs a 2-form");
  const int m = w.dim();
  ExprMatrix out = zeros(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b) out(a, b) = w.get({a, b});
  return out;
}

}  // namespace hamspray
