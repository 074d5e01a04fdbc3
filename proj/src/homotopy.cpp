#include "hamspray/homotopy.hpp"

#include <algorithm>
#include <cmath>

namespace hamspray {

Frame vertical_frame(const std::vector<Symbol>& y) {
  const int r = static_cast<int>(y.size());
  Frame f;
  f.vars = y;
  f.anchor = identity(r);
  f.structure.assign(r, zeros(r, r));
  return f;
}

VerticalForm d_vert(const std::vector<Symbol>& y, const VerticalForm& w) { return koszul(vertical_frame(y), w); }

namespace {

Substitution scale_fibers(const std::vector<Symbol>& y, const Expr& t) {
  Substitution s;
  for (auto v : y) s[v.id()] = t * Expr(v);
  return s;
}

// Integral over [0, 1] in t of one canonical term, if it is c * t^m * rest
// with m a non-negative integer and rest free of t.
std::optional<Expr> integrate_term(const Expr& term, Symbol t) {
  if (!depends_on(term, t)) return term;
  std::vector<Expr> factors;
  if (term.kind() == Kind::Mul) {
    factors.assign(term.children().begin(), term.children().end());
  } else {
    factors.push_back(term);
  }
  Rational m = 0;
  std::vector<Expr> rest;
  for (const auto& f : factors) {
    if (f.kind() == Kind::Var && f.symbol() == t) {
      m += 1;
    } else if (f.kind() == Kind::Pow && f.base().kind() == Kind::Var && f.base().symbol() == t) {
      m += f.value();
    } else if (depends_on(f, t)) {
      return std::nullopt;
    } else {
      rest.push_back(f);
    }
  }
  if (boost::multiprecision::denominator(m) != 1 || m < 0) return std::nullopt;
  return mul(std::move(rest)) * Expr(Rational(1) / (m + 1));
}

}  // namespace

Symbol homotopy_parameter() {
  static const Symbol t("#t");
  return t;
}

VerticalForm psi_star(const VerticalForm& w, const std::vector<Symbol>& y, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("psi_star needs t in (0, 1]");
  const Expr tt{Rational(t)};
  const Substitution s = scale_fibers(y, tt);
  const Expr scale = pow(tt, w.degree());
  return w.map([&](const Expr& c) { return scale * substitute(c, s); });
}

VerticalForm psi_zero(const VerticalForm& w, const std::vector<Symbol>& y) {
  if (w.degree() > 0) return VerticalForm(w.dim(), w.degree());
  const Substitution s = scale_fibers(y, Expr(0));
  return w.map([&](const Expr& c) { return substitute(c, s); });
}

VerticalForm lie_euler(const VerticalForm& w, const std::vector<Symbol>& y) {
  const Expr k(w.degree());
  return w.map([&](const Expr& c) {
    std::vector<Expr> terms{k * c};
    for (auto v : y) terms.push_back(Expr(v) * diff(c, v));
    return add(std::move(terms));
  });
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  struct Rec {
    const std::function<double(double)>& f;
    double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
      const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6 * (fa + 4 * flm + fm);
      const double right = (b - m) / 6 * (fm + 4 * frm + fb);
      const double delta = left + right - whole;
      if (std::abs(delta) <= 15 * tol) return left + right + delta / 15;
      if (depth <= 0) throw QuadratureFailure("adaptive Simpson did not reach tolerance");
      return run(a, m, fa, flm, fm, left, tol / 2, depth - 1) + run(m, b, fm, frm, fb, right, tol / 2, depth - 1);
    }
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  Rec rec{f};
  return rec.run(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 40);
}

double SplitForm::eval(std::size_t slot, const Bindings& b, double tol) const {
  double v = hamspray::eval(exact[slot], b);
  const Expr& g = deferred[slot];
  if (g.is_literal_zero()) return v;
  const Symbol t = homotopy_parameter();
  Bindings bt = b;
  return v + adaptive_simpson(
                 [&](double s) {
                   bt.set(t, s);
                   return hamspray::eval(g, bt);
                 },
                 0.0, 1.0, tol);
}

SplitForm h_k(const VerticalForm& w, const std::vector<Symbol>& y) {
  const int r = static_cast<int>(y.size());
  const int k = w.degree();
  if (k == 0) throw DegreeError("h_0 is the zero map into degree -1");
  const Symbol t = homotopy_parameter();
  const Substitution s = scale_fibers(y, Expr(t));
  SplitForm out{VerticalForm(r, k - 1), VerticalForm(r, k - 1)};
  const Expr tk = pow(Expr(t), k - 1);
  std::vector<int> idx;
  for (std::size_t slot = 0; slot < out.exact.size(); ++slot) {
    std::vector<Expr> terms;
    for (int j = 0; j < r; ++j) {
      idx.assign(1, j);
      idx.insert(idx.end(), out.exact.tuple(slot).begin(), out.exact.tuple(slot).end());
      Expr c = w.get(idx);
      if (!c.is_literal_zero()) terms.push_back(Expr(y[j]) * substitute(c, s));
    }
    const Expr integrand = tk * add(std::move(terms));
    std::vector<Expr> exact, deferred;
    for (const Expr& term : integrand.kind() == Kind::Add ? std::vector<Expr>(integrand.children().begin(),
                                                                              integrand.children().end())
                                                          : std::vector<Expr>{integrand}) {
      if (auto v = integrate_term(term, t)) {
        exact.push_back(*v);
      } else {
        deferred.push_back(term);
      }
    }
    out.exact[slot] = add(std::move(exact));
    out.deferred[slot] = add(std::move(deferred));
  }
  return out;
}

SplitForm d_vert(const std::vector<Symbol>& y, const SplitForm& w) {
  return {d_vert(y, w.exact), d_vert(y, w.deferred)};
}

ValidationReport homotopy_identity_check(const VerticalForm& w, const std::vector<Symbol>& y, const Box& box,
                                         const SampleOptions& opt) {
  SplitForm hd = h_k(d_vert(y, w), y);
  const int r = static_cast<int>(y.size());
  SplitForm dh = w.degree() == 0 ? SplitForm{VerticalForm(r, 0), VerticalForm(r, 0)} : d_vert(y, h_k(w, y));
  VerticalForm p0 = psi_zero(w, y);
  SplitForm res{hd.exact + dh.exact - w + p0, hd.deferred + dh.deferred};
  ValidationReport rep;
  rep.check = "homotopy";
  rep.seed = opt.seed;
  for (std::size_t slot = 0; slot < res.exact.size(); ++slot) {
    std::string label = labelled(res.exact, "homotopy")[slot].first;
    if (res.deferred[slot].is_literal_zero()) {
      rep.add(label, is_zero(res.exact[slot], box, opt));
      continue;
    }
    std::vector<Symbol> vars = free_symbols(res.exact[slot]);
    for (auto s : free_symbols(res.deferred[slot]))
      if (s != homotopy_parameter() && std::find(vars.begin(), vars.end(), s) == vars.end()) vars.push_back(s);
    rep.add(label, is_zero([&, slot](const Bindings& b) { return res.eval(slot, b); }, vars, box, opt));
  }
  return rep;
}

std::pair<int, int> bidegree(const SkewForm& w, std::size_t slot) {
  const int r = w.dim() / 2;
  int p = 0;
  for (int i : w.tuple(slot))
    if (i < r) ++p;
  return {p, w.degree() - p};
}

SkewForm dprime_slices(const SkewForm& w, const std::vector<Symbol>& y) {
  const int r = w.dim() / 2;
  SkewForm out(w.dim(), w.degree() + 1);
  std::vector<int> rest;
  for (std::size_t slot = 0; slot < out.size(); ++slot) {
    const auto& idx = out.tuple(slot);
    const int p = bidegree(out, slot).first;
    std::vector<Expr> terms;
    for (int s = p; s < static_cast<int>(idx.size()); ++s) {
      rest.clear();
      for (int i = 0; i < static_cast<int>(idx.size()); ++i)
        if (i != s) rest.push_back(idx[i]);
      Expr d = diff(w.get(rest), y[idx[s] - r]);
      terms.push_back(s % 2 == 0 ? d : -d);
    }
    out[slot] = add(std::move(terms));
  }
  return out;
}

SkewForm dprime_primitive(const SkewForm& theta, const std::vector<Symbol>& y, const Box& box,
                          const SampleOptions& opt) {
  const int r = static_cast<int>(y.size());
  if (theta.dim() != 2 * r) throw DegreeError("expected a form on the rank-2r frame");
  int p = -1;
  for (std::size_t s = 0; s < theta.size(); ++s) {
    if (theta[s].is_literal_zero()) continue;
    const int ps = bidegree(theta, s).first;
    if (p >= 0 && ps != p) throw DegreeError("form is not of a single bidegree");
    p = ps;
  }
  SkewForm zeta(2 * r, theta.degree() - 1);
  if (p < 0) return zeta;
  const int q = theta.degree() - p;
  if (q < 1) throw DegreeError("primitive needs fiber degree q >= 1");
  SkewForm closed = dprime_slices(theta, y);
  for (std::size_t s = 0; s < closed.size(); ++s)
    if (!is_zero(closed[s], box, opt).passed()) throw NotClosed("input block is not d''-closed");

  // One vertical q-form per horizontal multi-index I of length p.
  VerticalForm slice(r, q);
  std::vector<int> idx;
  const SkewForm hor(r, p);
  for (std::size_t hs = 0; hs < hor.size(); ++hs) {
    const auto& I = hor.tuple(hs);
    for (std::size_t vs = 0; vs < slice.size(); ++vs) {
      idx = I;
      for (int j : slice.tuple(vs)) idx.push_back(r + j);
      slice[vs] = theta.get(idx);
    }
    SplitForm h = h_k(slice, y);
    if (!h.is_exact()) throw QuadratureFailure("fiber dependence is not polynomial in the scaling parameter");
    for (std::size_t vs = 0; vs < h.exact.size(); ++vs) {
      idx = I;
      for (int j : h.exact.tuple(vs)) idx.push_back(r + j);
      zeta.set(idx, p % 2 == 0 ? h.exact[vs] : -h.exact[vs]);
    }
  }
  SkewForm back = dprime_slices(zeta, y) - theta;
  for (std::size_t s = 0; s < back.size(); ++s)
    if (!is_zero(back[s], box, opt).passed()) throw NotClosed("primitive does not reproduce the input block");
  return zeta;
}

}  // namespace hamspray
