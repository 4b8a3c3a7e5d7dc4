#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "fxt_mvi/core.hpp"

namespace fxt_mvi {

/// y(x) = prox_{lambda g}(x - lambda F(x))
Vector prox_grad_map(const MviProblem& p, double lambda, const Vector& x);

/// kappa1 r^(alpha1 - 1) + kappa2 r^(alpha2 - 1) with r = |x - y|, or 0 when
/// r < delta_fix.
double rho(const Vector& x, const Vector& y, const FlowParams& fp, double delta_fix);

/// -rho(x) (x - y(x))
Vector rhs_modified(const MviProblem& p, const FlowParams& fp, double delta_fix, const Vector& x);

/// -kappa (x - y(x))
Vector rhs_nominal(const MviProblem& p, double kappa, double lambda, const Vector& x);

/// x + eta * rhs_value; throws non_finite on overflow.
Vector step_forward_euler(const Vector& x, double eta, const Vector& rhs_value);

/// Which right-hand side the solver integrates.
using RhsKind = std::variant<NominalRhs, FlowParams>;

struct SolveOptions {
  /// Keep every record_every-th iterate (the final one is always kept).
  std::int64_t record_every = 100;
  /// Store x_k in each record.
  bool keep_states = false;
  /// Cap on |x_{k+1} - x_k|; off by default.
  std::optional<double> clamp_step;
};

/// Forward-Euler integration from x0. Each iteration checks, in order,
/// |x - y(x)| < fix_threshold (fixed_point), < stop_residual (residual_met),
/// and k == max_steps (step_cap). Error and Lyapunov fields are filled iff
/// the problem carries a reference solution. A non-finite state throws
/// non_finite naming the last good step.
RunLog solve(const MviProblem& p, const RhsKind& rk, const DiscretizationParams& dp,
             const Vector& x0, const SolveOptions& opts = {});

}  // namespace fxt_mvi
