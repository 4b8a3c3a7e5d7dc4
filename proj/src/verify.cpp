#include "fxt_mvi/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "fxt_mvi/analysis.hpp"
#include "fxt_mvi/bench.hpp"
#include "fxt_mvi/flow.hpp"
#include "fxt_mvi/operators.hpp"
#include "fxt_mvi/prox.hpp"

namespace fxt_mvi {

namespace {

Vector random_vector(SplitMix64& rng, std::size_t n, double half_width) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-half_width, half_width);
  return Vector(std::move(v));
}

template <class Body>
PropertyResult check(const char* name, Body body) {
  PropertyResult r{name, false, {}};
  try {
    std::ostringstream detail;
    r.passed = body(detail);
    r.detail = detail.str();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("threw: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  SplitMix64 rng(seed);
  constexpr int kTrials = 200;

  out.push_back(check("norm_axioms", [&](std::ostream& d) {
    for (int i = 0; i < kTrials; ++i) {
      const Vector x = random_vector(rng, 4, 100.0);
      const Vector y = random_vector(rng, 4, 100.0);
      const double s = rng.uniform(-5.0, 5.0);
      const double nx = euclidean_norm(x);
      if (nx < 0.0) return false;
      if (std::abs(euclidean_norm(s * x) - std::abs(s) * nx) > 1e-12 * (1 + std::abs(s) * nx)) {
        return false;
      }
      if (euclidean_norm(x + y) > nx + euclidean_norm(y) + 1e-12 * (nx + euclidean_norm(y))) {
        return false;
      }
    }
    d << kTrials << " triples";
    return euclidean_norm(Vector(3)) == 0.0;
  }));

  const ProxHandle l1 = ProxHandle::l1(1.3);
  const ProxHandle ball = ProxHandle::ball(Vector{2.0, 2.0, 0.0}, 1.5);
  const ProxHandle box = ProxHandle::box(Vector{-1.0, 0.0, -2.0}, Vector{1.0, 3.0, 2.0});

  out.push_back(check("prox_nonexpansive", [&](std::ostream& d) {
    double worst = 0.0;
    for (const ProxHandle* h : {&l1, &ball, &box}) {
      for (int i = 0; i < kTrials; ++i) {
        const Vector x = random_vector(rng, 3, 10.0);
        const Vector z = random_vector(rng, 3, 10.0);
        const double tau = rng.uniform(0.01, 3.0);
        worst = std::max(worst, distance((*h)(tau, x), (*h)(tau, z)) - distance(x, z));
      }
    }
    d << "max |Px - Pz| - |x - z| = " << worst;
    return worst <= 1e-12;
  }));

  out.push_back(check("projection_idempotent", [&](std::ostream& d) {
    double worst = 0.0;
    for (const ProxHandle* h : {&ball, &box}) {
      for (int i = 0; i < kTrials; ++i) {
        const Vector p = (*h)(1.0, random_vector(rng, 3, 10.0));
        worst = std::max(worst, distance((*h)(1.0, p), p));
      }
    }
    d << "max |P(Px) - Px| = " << worst;
    return worst == 0.0;
  }));

  out.push_back(check("l1_prox_matches_oracle", [&](std::ostream& d) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Vector x = random_vector(rng, 3, 5.0);
      const double tau = rng.uniform(0.05, 2.0);
      const Vector closed = l1(tau, x);
      const Vector oracle =
          prox_oracle_separable([](double v) { return std::abs(v); }, x, 1.3 * tau);
      worst = std::max(worst, distance(closed, oracle));
    }
    d << "max deviation " << worst;
    return worst <= 1e-8;
  }));

  out.push_back(check("q_sign_matches_alpha1_window", [&](std::ostream& d) {
    int checked = 0;
    for (double c : {0.05, 0.2, 0.41, 0.6, 0.9, 0.99, 0.9975}) {
      const OpenInterval w = alpha1_window(c);
      for (int i = 1; i < 40; ++i) {
        const double a = i / 40.0;
        // Skip a thin band around the window edge where the sign is decided by rounding.
        if (std::abs(a - w.lower) < 1e-9) continue;
        if ((q_coef(1.0, a, c) > 0.0) != w.contains(a)) {
          d << "mismatch at c=" << c << " alpha=" << a;
          return false;
        }
        ++checked;
      }
    }
    d << checked << " (c, alpha) pairs";
    return true;
  }));

  const ExampleSetup ex1 = build_example1();
  const double c1 = contraction_factor(*ex1.problem.mu, *ex1.problem.lip, ex1.flow.lambda());
  const FlowParams xi_flow = ex1.flow.with_alphas(0.8, 1.2);
  const ConvergenceCertificate cert1 = certificate(ex1.problem, xi_flow, ex1.disc);

  out.push_back(check("envelope_vanishes_at_settling_bound", [&](std::ostream& d) {
    if (!cert1.t_bar_xi || !cert1.xi) return false;
    const double T = *cert1.t_bar_xi;
    const double xi = *cert1.xi;
    double prev = INFINITY;
    for (int i = 1; i < 100; ++i) {
      const EnvelopeRadius r = continuous_envelope(T * i / 100.0, cert1.a1, cert1.a2, xi, 0.5);
      if (r.is_unbounded() || !(r.value() > 0.0) || r.value() > prev) return false;
      prev = r.value();
    }
    const EnvelopeRadius at_t = continuous_envelope(T, cert1.a1, cert1.a2, xi, 0.5);
    d << "T_xi = " << T << ", radius at T = " << (at_t.is_unbounded() ? -1.0 : at_t.value());
    return continuous_envelope(0.0, cert1.a1, cert1.a2, xi, 0.5).is_unbounded() &&
           !at_t.is_unbounded() && at_t.value() == 0.0 && *cert1.t_bar_xi <= *cert1.t_bar;
  }));

  out.push_back(check("k_star_identity", [&](std::ostream& d) {
    for (double eta : {1e-2, 1e-3, 1e-4, 3e-5}) {
      const std::int64_t k = k_star(*cert1.xi, eta, cert1.a1, cert1.a2);
      const double T = settling_time_bound_xi(cert1.a1, cert1.a2, *cert1.xi);
      if (k != static_cast<std::int64_t>(std::ceil(T / eta))) return false;
      if (!(static_cast<double>(k) * eta >= T && static_cast<double>(k - 1) * eta < T)) return false;
    }
    d << "k* = ceil(T_xi / eta) on 4 step sizes";
    return true;
  }));

  const Vector x1_star = reference_solution(ex1.problem, ex1.flow.lambda());

  out.push_back(check("example1_contraction", [&](std::ostream& d) {
    double worst = 0.0;
    for (int i = 0; i < kTrials; ++i) {
      const Vector x = x1_star + random_vector(rng, 2, 3.0);
      const double e = distance(x, x1_star);
      const Vector y = prox_grad_map(ex1.problem, ex1.flow.lambda(), x);
      worst = std::max(worst, distance(y, x1_star) / e);
    }
    d << "max |y(x) - x*| / |x - x*| = " << worst << " (c = " << c1 << ")";
    return worst <= c1 + 1e-9;
  }));

  out.push_back(check("residual_brackets_error", [&](std::ostream& d) {
    for (int i = 0; i < kTrials; ++i) {
      const Vector x = x1_star + random_vector(rng, 2, 3.0);
      const double e = distance(x, x1_star);
      const double r = distance(x, prox_grad_map(ex1.problem, ex1.flow.lambda(), x));
      if (r < (1.0 - c1) * e - 1e-9 || r > (1.0 + c1) * e + 1e-9) return false;
    }
    d << "(1-c)|x - x*| <= |x - y(x)| <= (1+c)|x - x*| on " << kTrials << " points";
    return true;
  }));

  const ExampleSetup ex2 = build_example2(seed);

  out.push_back(check("elasticnet_gradient_finite_difference", [&](std::ostream& d) {
    const Operator grad = elasticnet_logistic_operator(*ex2.dataset, 0.25);
    const ScalarFunction f = elasticnet_smooth_objective(*ex2.dataset, 0.25);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Vector x = random_vector(rng, 3, 2.0);
      const Vector g = grad(x);
      for (std::size_t j = 0; j < 3; ++j) {
        const double h = 1e-5;
        const double fd = (f(x.with(j, x[j] + h)) - f(x.with(j, x[j] - h))) / (2 * h);
        worst = std::max(worst, std::abs(fd - g[j]) / (1.0 + std::abs(g[j])));
      }
    }
    d << "max relative deviation " << worst;
    return worst <= 1e-6;
  }));

  out.push_back(check("saddle_operator_monotone", [&](std::ostream& d) {
    // f(u, v) = |u|^2/2 + u^T A v - |v|^2/2 with a fixed coupling A.
    const double A[2][2] = {{1.0, -2.0}, {0.5, 3.0}};
    const PartialGradient gu = [&](const Vector& u, const Vector& v) {
      return Vector{u[0] + A[0][0] * v[0] + A[0][1] * v[1], u[1] + A[1][0] * v[0] + A[1][1] * v[1]};
    };
    const PartialGradient gv = [&](const Vector& u, const Vector& v) {
      return Vector{A[0][0] * u[0] + A[1][0] * u[1] - v[0], A[0][1] * u[0] + A[1][1] * u[1] - v[1]};
    };
    const Operator F = saddle_operator(gu, gv, 2, 2);
    double worst = INFINITY;
    for (int i = 0; i < kTrials; ++i) {
      const Vector x = random_vector(rng, 4, 5.0);
      const Vector z = random_vector(rng, 4, 5.0);
      worst = std::min(worst, dot(F(x) - F(z), x - z) / std::pow(distance(x, z), 2));
    }
    d << "min <F(x)-F(z), x-z>/|x-z|^2 = " << worst;
    return worst >= 1.0 - 1e-9;
  }));

  out.push_back(check("dataset_deterministic", [&](std::ostream& d) {
    const Dataset a = generate_dataset(seed, 100, 3);
    const Dataset b = generate_dataset(seed, 100, 3);
    const Dataset other = generate_dataset(seed + 1, 100, 3);
    d << "seed " << seed;
    return a.labels == b.labels && a.features == b.features && a.features != other.features;
  }));

  out.push_back(check("degenerate_flow_equals_nominal", [&](std::ostream& d) {
    const FlowParams degenerate = FlowParams::unchecked(ex1.flow.lambda(), 40.0, 0.0, 1.0, 2.0);
    DiscretizationParams dp = ex1.disc;
    dp.max_steps = 500;
    const Vector x0{5.0, -3.0};
    const RunLog a = solve(ex1.problem, degenerate, dp, x0);
    const RunLog b = solve(ex1.problem, NominalRhs{40.0, ex1.flow.lambda()}, dp, x0);
    const double gap = distance(a.final_state, b.final_state);
    d << "state gap after 500 steps " << gap;
    return gap <= 1e-12;
  }));

  out.push_back(check("example2_solution_satisfies_inequality", [&](std::ostream& d) {
    const Vector x2 = reference_solution(ex2.problem, ex2.flow.lambda());
    const double margin = mvi_inequality_margin(ex2.problem, x2, 2000, seed);
    d << "min margin " << margin << " at |x*| = " << euclidean_norm(x2);
    return margin >= -1e-9;
  }));

  return out;
}

}  // namespace fxt_mvi
