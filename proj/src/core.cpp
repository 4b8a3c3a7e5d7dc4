#include "fxt_mvi/core.hpp"

#include <cmath>
#include <sstream>

#include "fxt_mvi/analysis.hpp"

namespace fxt_mvi {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::missing_certificates: return "missing_certificates";
    case ErrorCode::lambda_out_of_window: return "lambda_out_of_window";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::uncertified_alpha1: return "uncertified_alpha1";
    case ErrorCode::inconsistent_alphas: return "inconsistent_alphas";
    case ErrorCode::nonpositive_coefficients: return "nonpositive_coefficients";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::config_error: return "config_error";
  }
  return "unknown";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::residual_met: return "residual_met";
    case Termination::step_cap: return "step_cap";
    case Termination::fixed_point: return "fixed_point";
  }
  return "unknown";
}

namespace {

void check_finite(const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << "non-finite vector entry at index " << i << " (" << v[i] << ")";
      throw Error(ErrorCode::non_finite, os.str());
    }
  }
}

}  // namespace

Vector::Vector(std::size_t n, double fill) : coords_(n, fill) { check_finite(coords_); }

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  check_finite(coords_);
}

Vector::Vector(std::initializer_list<double> coords) : coords_(coords) {
  check_finite(coords_);
}

Vector Vector::with(std::size_t i, double value) const {
  std::vector<double> c = coords_;
  c.at(i) = value;
  return Vector(std::move(c));
}

void require_same_dimension(const Vector& a, const Vector& b, const char* where) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_dimension(a, b, "vector addition");
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return Vector(std::move(r));
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_dimension(a, b, "vector subtraction");
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return Vector(std::move(r));
}

Vector operator-(const Vector& a) { return -1.0 * a; }

Vector operator*(double s, const Vector& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = s * a[i];
  return Vector(std::move(r));
}

Vector operator*(const Vector& a, double s) { return s * a; }

double dot(const Vector& a, const Vector& b) {
  require_same_dimension(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double euclidean_norm(const Vector& v) {
  // Scaled accumulation so that entries near 1e154 do not overflow.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) {
    const double r = x / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

double distance(const Vector& a, const Vector& b) { return euclidean_norm(a - b); }

void MviProblem::check() const {
  if (dimension == 0) throw Error(ErrorCode::invalid_argument, "problem dimension must be set");
  if (!op) throw Error(ErrorCode::invalid_argument, "problem has no operator");
  if (!prox) throw Error(ErrorCode::invalid_argument, "problem has no proximal map");
  if (mu && !(*mu > 0.0)) throw Error(ErrorCode::invalid_argument, "mu must be positive");
  if (lip && !(*lip > 0.0)) throw Error(ErrorCode::invalid_argument, "L must be positive");
  if (mu && lip && monotonicity == MonotonicityKind::strong && *mu > *lip) {
    std::ostringstream os;
    os << "strong monotonicity modulus mu=" << *mu << " exceeds Lipschitz constant L=" << *lip;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
}

FlowParams::FlowParams(double lambda, double kappa1, double kappa2, double alpha1, double alpha2)
    : FlowParams(Unchecked{}, lambda, kappa1, kappa2, alpha1, alpha2) {
  std::ostringstream os;
  if (!(lambda > 0.0)) os << "lambda must be > 0 (got " << lambda << "); ";
  if (!(kappa1 > 0.0)) os << "kappa1 must be > 0 (got " << kappa1 << "); ";
  if (!(kappa2 > 0.0)) os << "kappa2 must be > 0 (got " << kappa2 << "); ";
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) os << "alpha1 must lie in (0,1) (got " << alpha1 << "); ";
  if (!(alpha2 > 1.0 && std::isfinite(alpha2))) os << "alpha2 must be > 1 (got " << alpha2 << "); ";
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorCode::invalid_argument, msg.substr(0, msg.size() - 2));
}

FlowParams FlowParams::unchecked(double lambda, double kappa1, double kappa2, double alpha1,
                                 double alpha2) {
  return FlowParams(Unchecked{}, lambda, kappa1, kappa2, alpha1, alpha2);
}

void DiscretizationParams::check() const {
  if (!(eta > 0.0)) throw Error(ErrorCode::invalid_argument, "eta must be > 0");
  if (!(fix_threshold > 0.0)) throw Error(ErrorCode::invalid_argument, "fix_threshold must be > 0");
  if (!(stop_residual >= 0.0)) throw Error(ErrorCode::invalid_argument, "stop_residual must be >= 0");
  if (max_steps < 1) throw Error(ErrorCode::invalid_argument, "max_steps must be positive");
}

ValidationReport validate_problem(const MviProblem& p, const FlowParams& fp) {
  ValidationReport report;
  if (!p.mu || !p.lip) {
    report.status = ValidationReport::Status::uncheckable;
    report.reasons.push_back(
        "missing_certificates: mu and L are both required to check the lambda window");
    return report;
  }
  const double hi = lambda_upper_bound(*p.mu, *p.lip);
  report.lambda_upper = hi;
  report.lambda_in_window = fp.lambda() > 0.0 && fp.lambda() < hi;
  {
    std::ostringstream os;
    os << "lambda " << (report.lambda_in_window ? "inside" : "outside") << " (0, " << hi
       << ")";
    report.reasons.push_back(os.str());
  }
  if (report.lambda_in_window) {
    const double c = contraction_factor(*p.mu, *p.lip, fp.lambda());
    const OpenInterval w = alpha1_window(c);
    report.alpha1_window_lower = w.lower;
    report.alpha1_in_window = w.contains(fp.alpha1());
    std::ostringstream os;
    os << "alpha1 = " << fp.alpha1() << (*report.alpha1_in_window ? " inside" : " outside")
       << " certified window (" << w.lower << ", 1)";
    report.reasons.push_back(os.str());
  }
  const bool ok = report.lambda_in_window && report.alpha1_in_window.value_or(false);
  report.status = ok ? ValidationReport::Status::pass : ValidationReport::Status::fail;
  return report;
}

}  // namespace fxt_mvi
