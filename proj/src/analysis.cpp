#include "fxt_mvi/analysis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fxt_mvi {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

void require_unit_open(double c, const char* what) {
  if (!(c > 0.0 && c < 1.0)) {
    std::ostringstream os;
    os << what << ": c must lie in (0,1), got " << c;
    fail(ErrorCode::domain_error, os.str());
  }
}

}  // namespace

double lambda_upper_bound(double mu, double lip) {
  if (!(mu > 0.0) || !(lip > 0.0)) {
    fail(ErrorCode::invalid_argument, "mu and L must be positive");
  }
  return 2.0 * mu / (lip * lip);
}

double contraction_factor(double mu, double lip, double lambda) {
  const double hi = lambda_upper_bound(mu, lip);
  if (!(lambda > 0.0 && lambda < hi)) {
    std::ostringstream os;
    os << "lambda " << lambda << " outside (0, " << hi << ")";
    fail(ErrorCode::lambda_out_of_window, os.str());
  }
  const double c_bar = 1.0 / (1.0 + 2.0 * lambda * mu - lambda * lambda * lip * lip);
  return std::sqrt(c_bar);
}

double epsilon_of_c(double c) {
  require_unit_open(c, "epsilon_of_c");
  return std::log(c) / std::log((1.0 - c) / (1.0 + c));
}

OpenInterval alpha1_window(double c) {
  return {std::max(0.0, 1.0 - epsilon_of_c(c)), 1.0};
}

double q_coef(double kappa, double alpha, double c) {
  require_unit_open(c, "q_coef");
  const double p = 1.0 - alpha;
  return kappa / std::pow(1.0 - c, p) * (std::pow((1.0 - c) / (1.0 + c), p) - c);
}

double gamma_exp(double alpha) { return (1.0 + alpha) / 2.0; }

double a_coef(double kappa, double alpha, double c) {
  return std::pow(2.0, gamma_exp(alpha)) * q_coef(kappa, alpha, c);
}

double settling_time_bound(const FlowParams& fp, double c) {
  const double q1 = q_coef(fp.kappa1(), fp.alpha1(), c);
  if (!(q1 > 0.0)) {
    std::ostringstream os;
    os << "alpha1 = " << fp.alpha1() << " outside the certified window ("
       << alpha1_window(c).lower << ", 1); q1 = " << q1;
    fail(ErrorCode::uncertified_alpha1, os.str());
  }
  const double a1 = a_coef(fp.kappa1(), fp.alpha1(), c);
  const double a2 = a_coef(fp.kappa2(), fp.alpha2(), c);
  if (!(a2 > 0.0)) fail(ErrorCode::nonpositive_coefficients, "a(kappa2, alpha2) <= 0");
  return 1.0 / (a1 * (1.0 - gamma_exp(fp.alpha1()))) +
         1.0 / (a2 * (gamma_exp(fp.alpha2()) - 1.0));
}

std::pair<double, double> xi_params(double xi) {
  if (!(xi > 2.0)) fail(ErrorCode::invalid_argument, "xi must be > 2");
  return {1.0 - 2.0 / xi, 1.0 + 2.0 / xi};
}

double xi_from_alphas(double alpha1, double alpha2) {
  if (!(alpha1 < 1.0) || !(alpha2 > 1.0)) {
    fail(ErrorCode::inconsistent_alphas, "xi parameterisation needs alpha1 < 1 < alpha2");
  }
  const double from1 = 2.0 / (1.0 - alpha1);
  const double from2 = 2.0 / (alpha2 - 1.0);
  if (std::abs(from1 - from2) > 1e-9 * std::max(1.0, std::abs(from1))) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha1 implies xi=" << from1 << " but alpha2 implies xi=" << from2;
    fail(ErrorCode::inconsistent_alphas, os.str());
  }
  return from1;
}

double settling_time_bound_xi(double a, double b, double xi) {
  if (!(a > 0.0) || !(b > 0.0)) {
    fail(ErrorCode::nonpositive_coefficients, "settling bound needs a, b > 0");
  }
  if (!(xi > 0.0)) fail(ErrorCode::invalid_argument, "xi must be positive");
  return xi * std::numbers::pi / (2.0 * std::sqrt(a * b));
}

std::int64_t k_star(double xi, double eta, double a, double b) {
  if (!(xi > 2.0)) fail(ErrorCode::invalid_argument, "k* needs xi > 2");
  if (!(eta > 0.0)) fail(ErrorCode::invalid_argument, "k* needs eta > 0");
  return static_cast<std::int64_t>(std::ceil(settling_time_bound_xi(a, b, xi) / eta));
}

double EnvelopeRadius::value() const {
  if (unbounded_) throw Error(ErrorCode::domain_error, "envelope is unbounded at this time");
  return value_;
}

EnvelopeRadius continuous_envelope(double t, double a, double b, double xi, double beta) {
  if (!(beta > 0.0)) fail(ErrorCode::invalid_argument, "beta must be positive");
  if (!(t >= 0.0)) fail(ErrorCode::invalid_argument, "t must be nonnegative");
  const double settle = settling_time_bound_xi(a, b, xi);
  if (t >= settle) return EnvelopeRadius::finite(0.0);
  if (t == 0.0) return EnvelopeRadius::unbounded();
  const double arg = std::numbers::pi / 2.0 - std::sqrt(a * b) / xi * t;
  if (arg <= 0.0) return EnvelopeRadius::finite(0.0);
  const double r =
      std::pow(std::sqrt(a / b) * std::tan(std::min(arg, std::numbers::pi / 2.0)), xi / 2.0) /
      std::sqrt(beta);
  if (!std::isfinite(r)) return EnvelopeRadius::unbounded();
  return EnvelopeRadius::finite(r);
}

EnvelopeRadius discrete_envelope(std::int64_t k, double eta, double a, double b, double xi,
                                 double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::invalid_argument, "eps must be positive");
  if (k < 0) fail(ErrorCode::invalid_argument, "k must be nonnegative");
  if (k > k_star(xi, eta, a, b)) return EnvelopeRadius::finite(eps);
  const EnvelopeRadius cont = continuous_envelope(eta * static_cast<double>(k), a, b, xi, 0.5);
  if (cont.is_unbounded()) return cont;
  return EnvelopeRadius::finite(cont.value() + eps);
}

ConvergenceCertificate certificate(const MviProblem& p, const FlowParams& fp,
                                   const DiscretizationParams& dp) {
  if (!p.mu || !p.lip) {
    fail(ErrorCode::missing_certificates, "certificate needs both mu and L");
  }
  ConvergenceCertificate cert;
  cert.estimated_constants = p.estimated_constants;
  cert.c = contraction_factor(*p.mu, *p.lip, fp.lambda());
  cert.eps_c = epsilon_of_c(cert.c);
  cert.alpha1_window = alpha1_window(cert.c);
  cert.q1 = q_coef(fp.kappa1(), fp.alpha1(), cert.c);
  cert.q2 = q_coef(fp.kappa2(), fp.alpha2(), cert.c);
  cert.a1 = a_coef(fp.kappa1(), fp.alpha1(), cert.c);
  cert.a2 = a_coef(fp.kappa2(), fp.alpha2(), cert.c);
  cert.gamma1 = gamma_exp(fp.alpha1());
  cert.gamma2 = gamma_exp(fp.alpha2());
  cert.uncertified_alpha1 = !(cert.q1 > 0.0);
  if (!cert.uncertified_alpha1) cert.t_bar = settling_time_bound(fp, cert.c);

  try {
    cert.xi = xi_from_alphas(fp.alpha1(), fp.alpha2());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::inconsistent_alphas) throw;
  }
  if (cert.xi && !cert.uncertified_alpha1 && *cert.xi > 2.0) {
    cert.t_bar_xi = settling_time_bound_xi(cert.a1, cert.a2, *cert.xi);
    cert.k_star = k_star(*cert.xi, dp.eta, cert.a1, cert.a2);
  }
  return cert;
}

}  // namespace fxt_mvi
