#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "fxt_mvi/core.hpp"

namespace fxt_mvi {

/// Contraction factor of y(x) = prox_{lambda g}(x - lambda F(x)) towards the
/// solution: 1 / sqrt(1 + 2 lambda mu - lambda^2 L^2). Throws
/// lambda_out_of_window unless lambda lies in the open interval (0, 2 mu / L^2).
double contraction_factor(double mu, double lip, double lambda);

/// Upper end of the admissible lambda interval, 2 mu / L^2.
double lambda_upper_bound(double mu, double lip);

/// log(c) / log((1 - c) / (1 + c)). Alpha exponents in (1 - eps, 1) keep the
/// finite-time term of the Lyapunov bound negative.
double epsilon_of_c(double c);

struct OpenInterval {
  double lower;
  double upper;
  bool contains(double v) const noexcept { return v > lower && v < upper; }
};

/// (max(0, 1 - eps(c)), 1)
OpenInterval alpha1_window(double c);

/// kappa / (1-c)^(1-alpha) * (((1-c)/(1+c))^(1-alpha) - c). Not sign-checked.
double q_coef(double kappa, double alpha, double c);
double gamma_exp(double alpha);
/// 2^gamma(alpha) * q(kappa, alpha)
double a_coef(double kappa, double alpha, double c);

/// 1/(a1 (1 - gamma1)) + 1/(a2 (gamma2 - 1)); throws uncertified_alpha1 when
/// q(kappa1, alpha1) <= 0.
double settling_time_bound(const FlowParams& fp, double c);

/// alpha1 = 1 - 2/xi, alpha2 = 1 + 2/xi for xi > 2.
std::pair<double, double> xi_params(double xi);
/// Inverse of xi_params; throws inconsistent_alphas if the two exponents imply
/// different xi (relative tolerance 1e-9).
double xi_from_alphas(double alpha1, double alpha2);

/// xi pi / (2 sqrt(a b))
double settling_time_bound_xi(double a, double b, double xi);
/// ceil(settling_time_bound_xi(a, b, xi) / eta)
std::int64_t k_star(double xi, double eta, double a, double b);

/// Error-envelope radius. At t = 0 the bound is infinite; that case is
/// reported through is_unbounded() instead of a floating-point infinity.
class EnvelopeRadius {
 public:
  static EnvelopeRadius unbounded() { return EnvelopeRadius(true, 0.0); }
  static EnvelopeRadius finite(double r) { return EnvelopeRadius(false, r); }

  bool is_unbounded() const noexcept { return unbounded_; }
  /// Precondition: !is_unbounded().
  double value() const;

 private:
  EnvelopeRadius(bool u, double v) : unbounded_(u), value_(v) {}
  bool unbounded_;
  double value_;
};

/// (1/sqrt(beta)) (sqrt(a/b) tan(pi/2 - sqrt(ab) t / xi))^(xi/2) for t below
/// the settling bound, 0 afterwards.
EnvelopeRadius continuous_envelope(double t, double a, double b, double xi, double beta);

/// sqrt(2) (sqrt(a/b) tan(pi/2 - sqrt(ab) eta k / xi))^(xi/2) + eps for
/// k <= k*, eps afterwards. sqrt(2) = 1/sqrt(beta) with V = |x - x*|^2 / 2.
EnvelopeRadius discrete_envelope(std::int64_t k, double eta, double a, double b, double xi,
                                 double eps);

struct ConvergenceCertificate {
  double c = 0.0;
  double eps_c = 0.0;
  OpenInterval alpha1_window{0.0, 1.0};
  double q1 = 0.0;
  double q2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  /// Two-term settling bound; absent when alpha1 is uncertified.
  std::optional<double> t_bar;
  /// Present when alpha1/alpha2 are xi-symmetric.
  std::optional<double> xi;
  /// xi pi / (2 sqrt(a1 a2)); needs xi and a certified alpha1.
  std::optional<double> t_bar_xi;
  std::optional<std::int64_t> k_star;
  bool uncertified_alpha1 = false;
  bool estimated_constants = false;
};

/// Full certificate for (problem, flow, step). Throws missing_certificates
/// if mu or lip is absent and lambda_out_of_window for an invalid lambda.
/// An uncertified alpha1 is flagged, not thrown.
ConvergenceCertificate certificate(const MviProblem& p, const FlowParams& fp,
                                   const DiscretizationParams& dp);

}  // namespace fxt_mvi
