#include "hamspray/zero_test.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hamspray {

std::pair<double, double> Box::range(Symbol s) const {
  if (auto it = overrides.find(s.id()); it != overrides.end()) return it->second;
  return {lo, hi};
}

std::string_view status_name(ZeroStatus s) {
  switch (s) {
    case ZeroStatus::ProvenZero: return "ProvenZero";
    case ZeroStatus::LikelyZero: return "LikelyZero";
    case ZeroStatus::NonZero: return "NonZero";
  }
  return "?";
}

ZeroResult is_zero(const std::function<double(const Bindings&)>& f, std::span<const Symbol> vars,
                   const Box& box, const SampleOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  ZeroResult out;
  out.status = ZeroStatus::LikelyZero;
  int regular = 0;
  Bindings b;
  std::vector<double> values(vars.size());
  for (int trial = 0; trial < opt.trials; ++trial) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto [lo, hi] = box.range(vars[i]);
      values[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
      b.set(vars[i], values[i]);
    }
    double v;
    try {
      v = f(b);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(v)) continue;
    ++regular;
    out.residual_max = std::max(out.residual_max, std::abs(v));
    if (std::abs(v) > opt.tol && out.status != ZeroStatus::NonZero) {
      out.status = ZeroStatus::NonZero;
      for (std::size_t i = 0; i < vars.size(); ++i) out.witness.emplace_back(vars[i].name(), values[i]);
    }
  }
  if (regular == 0) throw DomainError("every sample point is singular");
  return out;
}

ZeroResult is_zero(const Expr& e, const Box& box, const SampleOptions& opt) {
  if (e.is_literal_zero()) return {};
  auto vars = free_symbols(e);
  return is_zero([&](const Bindings& b) { return eval(e, b); }, vars, box, opt);
}

void ValidationReport::append(const ValidationReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

bool ValidationReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.result.passed(); });
}

double ValidationReport::residual_max() const {
  double m = 0;
  for (const auto& e : entries) m = std::max(m, e.result.residual_max);
  return m;
}

const ValidationReport::Entry* ValidationReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.result.passed()) return &e;
  return nullptr;
}

ZeroStatus ValidationReport::status() const {
  ZeroStatus s = ZeroStatus::ProvenZero;
  for (const auto& e : entries) {
    if (e.result.status == ZeroStatus::NonZero) return ZeroStatus::NonZero;
    if (e.result.status == ZeroStatus::LikelyZero) s = ZeroStatus::LikelyZero;
  }
  return s;
}

ValidationReport check_all(std::string check, const std::vector<std::pair<std::string, Expr>>& residuals,
                           const Box& box, const SampleOptions& opt) {
  ValidationReport r;
  r.check = std::move(check);
  r.seed = opt.seed;
  for (const auto& [label, e] : residuals) r.add(label, is_zero(e, box, opt));
  return r;
}

}  // namespace hamspray
