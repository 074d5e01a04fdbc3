#pragma once

#include <optional>
#include <string>

#include "hamspray/poisson.hpp"

namespace hamspray {

struct ChartPoint {
  Eigen::VectorXd x, y;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ChartPoint> states;
  std::vector<double> invariant_drift;  // G(state) - G(state_0), empty without G
};

enum class Method { RK4, RK45 };

struct IntegrateOptions {
  Method method = Method::RK4;
  double h = 1e-3;
  double tol = 1e-9;      // local error target for RK45
  double blowup = 1e6;    // sup-norm bound on the state
};

Bindings bind(const AlgebroidChart& A, const ChartPoint& p);

/// Explicit integration of V from p0 over [0, T]. Records G - G(p0) when G is
/// given. Throws BlowUp, or DomainError from evaluation.
Trajectory integrate(const AlgebroidChart& A, const VectorFieldOnA& V, const ChartPoint& p0, double T,
                     const IntegrateOptions& opt, const std::optional<Expr>& G = std::nullopt);

/// Central differences of x along the trajectory against y^j rho^i_j,
/// failing where the gap exceeds tol * (1 + |dx/dt|).
ValidationReport base_projection_check(const AlgebroidChart& A, const Trajectory& traj, double tol);

double max_abs_drift(const Trajectory& traj);

/// Columns t, x..., y..., drift.
std::string to_csv(const AlgebroidChart& A, const Trajectory& traj);
std::string to_json(const AlgebroidChart& A, const Trajectory& traj);

}  // namespace hamspray
