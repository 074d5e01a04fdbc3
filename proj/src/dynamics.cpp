#include "hamspray/dynamics.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace hamspray {

Bindings bind(const AlgebroidChart& A, const ChartPoint& p) {
  Bindings b;
  for (int i = 0; i < A.n(); ++i) b.set(A.x()[i], p.x(i));
  for (int k = 0; k < A.r(); ++k) b.set(A.y()[k], p.y(k));
  return b;
}

namespace {

using State = Eigen::VectorXd;

struct Field {
  const AlgebroidChart& A;
  const VectorFieldOnA& V;

  State operator()(const State& s) const {
    const int n = A.n(), r = A.r();
    Bindings b;
    for (int i = 0; i < n; ++i) b.set(A.x()[i], s(i));
    for (int k = 0; k < r; ++k) b.set(A.y()[k], s(n + k));
    State out(n + r);
    for (int i = 0; i < n; ++i) out(i) = eval(V.Vx(i), b);
    for (int k = 0; k < r; ++k) out(n + k) = eval(V.Vy(k), b);
    return out;
  }
};

State rk4_step(const Field& f, const State& s, double h) {
  State k1 = f(s);
  State k2 = f(s + 0.5 * h * k1);
  State k3 = f(s + 0.5 * h * k2);
  State k4 = f(s + h * k3);
  return s + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Dormand-Prince 5(4); returns the 5th-order solution and the error estimate.
std::pair<State, double> dopri_step(const Field& f, const State& s, double h) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  State k1 = f(s);
  State k2 = f(s + h * a21 * k1);
  State k3 = f(s + h * (a31 * k1 + a32 * k2));
  State k4 = f(s + h * (a41 * k1 + a42 * k2 + a43 * k3));
  State k5 = f(s + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  State k6 = f(s + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  State next = s + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  State k7 = f(next);
  State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  double e = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) e = std::max(e, std::abs(err(i)) / (1.0 + std::abs(next(i))));
  return {next, e};
}

}  // namespace

Trajectory integrate(const AlgebroidChart& A, const VectorFieldOnA& V, const ChartPoint& p0, double T,
                     const IntegrateOptions& opt, const std::optional<Expr>& G) {
  if (!(T > 0) || !(opt.h > 0)) throw DomainError("integrate needs T > 0 and h > 0");
  const int n = A.n(), r = A.r();
  Field f{A, V};
  State s(n + r);
  s << p0.x, p0.y;
  Trajectory traj;
  const double G0 = G ? eval(*G, bind(A, p0)) : 0.0;
  auto record = [&](double t, const State& st) {
    ChartPoint p{st.head(n), st.tail(r)};
    if (st.lpNorm<Eigen::Infinity>() > opt.blowup || !st.allFinite())
      throw BlowUp("state left the bound at t = " + std::to_string(t));
    traj.times.push_back(t);
    if (G) traj.invariant_drift.push_back(eval(*G, bind(A, p)) - G0);
    traj.states.push_back(std::move(p));
  };
  record(0.0, s);
  if (opt.method == Method::RK4) {
    const long steps = std::max(1L, std::lround(T / opt.h));
    const double h = T / static_cast<double>(steps);
    for (long i = 1; i <= steps; ++i) {
      s = rk4_step(f, s, h);
      record(i == steps ? T : h * static_cast<double>(i), s);
    }
    return traj;
  }
  double t = 0.0, h = opt.h;
  while (t < T) {
    h = std::min(h, T - t);
    auto [next, err] = dopri_step(f, s, h);
    if (err <= opt.tol || h < 1e-14) {
      t = (T - t <= h) ? T : t + h;
      s = next;
      record(t, s);
    }
    const double scale = err > 0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 5.0;
    h *= std::clamp(scale, 0.2, 5.0);
  }
  return traj;
}

ValidationReport base_projection_check(const AlgebroidChart& A, const Trajectory& traj, double tol) {
  const int n = A.n();
  ValidationReport rep;
  rep.check = "base_projection";
  std::vector<ZeroResult> per(n);
  for (auto& z : per) z.status = ZeroStatus::LikelyZero;
  for (std::size_t k = 1; k + 1 < traj.states.size(); ++k) {
    const auto& p = traj.states[k];
    const double dt = traj.times[k + 1] - traj.times[k - 1];
    Eigen::VectorXd dx = (traj.states[k + 1].x - traj.states[k - 1].x) / dt;
    Eigen::VectorXd expect = eval(A.rho(), bind(A, p)) * p.y;
    for (int i = 0; i < n; ++i) {
      const double gap = std::abs(dx(i) - expect(i));
      per[i].residual_max = std::max(per[i].residual_max, gap);
      if (gap > tol * (1 + std::abs(dx(i))) && per[i].status != ZeroStatus::NonZero) {
        per[i].status = ZeroStatus::NonZero;
        per[i].witness.emplace_back("t", traj.times[k]);
        for (int j = 0; j < n; ++j) per[i].witness.emplace_back(A.x()[j].name(), p.x(j));
        for (int j = 0; j < A.r(); ++j) per[i].witness.emplace_back(A.y()[j].name(), p.y(j));
      }
    }
  }
  for (int i = 0; i < n; ++i) rep.add("base_projection[" + A.x()[i].name() + "]", per[i]);
  return rep;
}

double max_abs_drift(const Trajectory& traj) {
  double m = 0;
  for (double d : traj.invariant_drift) m = std::max(m, std::abs(d));
  return m;
}

std::string to_csv(const AlgebroidChart& A, const Trajectory& traj) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t";
  for (auto s : A.coords()) os << ',' << s.name();
  os << ",drift\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    os << traj.times[k];
    for (Eigen::Index i = 0; i < traj.states[k].x.size(); ++i) os << ',' << traj.states[k].x(i);
    for (Eigen::Index i = 0; i < traj.states[k].y.size(); ++i) os << ',' << traj.states[k].y(i);
    os << ',' << (traj.invariant_drift.empty() ? 0.0 : traj.invariant_drift[k]) << '\n';
  }
  return os.str();
}

std::string to_json(const AlgebroidChart& A, const Trajectory& traj) {
  nlohmann::json j;
  std::vector<std::string> names;
  for (auto s : A.coords()) names.push_back(s.name());
  j["coords"] = names;
  j["t"] = traj.times;
  nlohmann::json states = nlohmann::json::array();
  for (const auto& p : traj.states) {
    std::vector<double> v(p.x.data(), p.x.data() + p.x.size());
    v.insert(v.end(), p.y.data(), p.y.data() + p.y.size());
    states.push_back(v);
  }
  j["states"] = states;
  j["drift"] = traj.invariant_drift;
  return j.dump(2);
}

}  // namespace hamspray
