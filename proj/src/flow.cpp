#include "fxt_mvi/flow.hpp"

#include <cmath>
#include <sstream>

namespace fxt_mvi {

Vector prox_grad_map(const MviProblem& p, double lambda, const Vector& x) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  const Vector fx = p.op(x);
  require_same_dimension(x, fx, "operator output");
  const Vector y = p.prox(lambda, x - lambda * fx);
  require_same_dimension(x, y, "prox output");
  return y;
}

double rho(const Vector& x, const Vector& y, const FlowParams& fp, double delta_fix) {
  const double r = distance(x, y);
  if (r < delta_fix) return 0.0;
  return fp.kappa1() * std::pow(r, fp.alpha1() - 1.0) + fp.kappa2() * std::pow(r, fp.alpha2() - 1.0);
}

Vector rhs_modified(const MviProblem& p, const FlowParams& fp, double delta_fix, const Vector& x) {
  const Vector y = prox_grad_map(p, fp.lambda(), x);
  return -rho(x, y, fp, delta_fix) * (x - y);
}

Vector rhs_nominal(const MviProblem& p, double kappa, double lambda, const Vector& x) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::invalid_argument, "kappa must be positive");
  return -kappa * (x - prox_grad_map(p, lambda, x));
}

Vector step_forward_euler(const Vector& x, double eta, const Vector& rhs_value) {
  if (!(eta > 0.0)) throw Error(ErrorCode::invalid_argument, "eta must be positive");
  return x + eta * rhs_value;
}

namespace {

struct Stepper {
  const RhsKind& kind;
  double delta_fix;

  double lambda() const {
    return std::holds_alternative<NominalRhs>(kind) ? std::get<NominalRhs>(kind).lambda
                                                    : std::get<FlowParams>(kind).lambda();
  }

  // Scalar multiplying -(x - y) given the residual vector.
  double scale(const Vector& x, const Vector& y) const {
    if (const auto* n = std::get_if<NominalRhs>(&kind)) return n->kappa;
    return rho(x, y, std::get<FlowParams>(kind), delta_fix);
  }
};

}  // namespace

RunLog solve(const MviProblem& p, const RhsKind& rk, const DiscretizationParams& dp,
             const Vector& x0, const SolveOptions& opts) {
  dp.check();
  if (opts.record_every < 1) throw Error(ErrorCode::invalid_argument, "record_every must be >= 1");
  if (opts.clamp_step && !(*opts.clamp_step > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "clamp_step must be positive");
  }
  if (const auto* n = std::get_if<NominalRhs>(&rk)) {
    if (!(n->kappa > 0.0) || !(n->lambda > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "nominal kappa and lambda must be positive");
    }
  }
  if (p.reference_solution) require_same_dimension(x0, *p.reference_solution, "reference solution");

  RunLog log;
  log.disc = dp;
  if (const auto* n = std::get_if<NominalRhs>(&rk)) log.nominal = *n;
  else log.flow = std::get<FlowParams>(rk);

  const Stepper stepper{rk, dp.fix_threshold};
  const double lambda = stepper.lambda();

  auto make_record = [&](std::int64_t k, const Vector& x, double residual) {
    IterateRecord rec;
    rec.k = k;
    rec.t = dp.eta * static_cast<double>(k);
    rec.residual = residual;
    if (p.reference_solution) {
      const double e = distance(x, *p.reference_solution);
      rec.error = e;
      rec.lyapunov = 0.5 * e * e;
    }
    if (opts.keep_states) rec.state = x;
    return rec;
  };

  Vector x = x0;
  for (std::int64_t k = 0;; ++k) {
    try {
      const Vector y = prox_grad_map(p, lambda, x);
      const Vector diff = x - y;
      const double r = euclidean_norm(diff);

      std::optional<Termination> done;
      if (r < dp.fix_threshold) done = Termination::fixed_point;
      else if (r < dp.stop_residual) done = Termination::residual_met;
      else if (k >= dp.max_steps) done = Termination::step_cap;

      if (done) {
        log.records.push_back(make_record(k, x, r));
        log.termination = *done;
        log.final_state = x;
        return log;
      }
      if (k % opts.record_every == 0) log.records.push_back(make_record(k, x, r));

      double s = stepper.scale(x, y);
      if (opts.clamp_step) {
        const double move = dp.eta * s * r;
        if (move > *opts.clamp_step) s *= *opts.clamp_step / move;
      }
      x = step_forward_euler(x, dp.eta, -s * diff);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::non_finite) throw;
      std::ostringstream os;
      os << "non_finite_state at step " << k << " (last good k = " << k << "): " << e.what();
      throw Error(ErrorCode::non_finite, os.str());
    }
  }
}

}  // namespace fxt_mvi
