#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fxt_mvi {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  missing_certificates,
  lambda_out_of_window,
  domain_error,
  uncertified_alpha1,
  inconsistent_alphas,
  nonpositive_coefficients,
  no_convergence,
  io_error,
  config_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Dense real vector of fixed dimension. Every stored entry is finite; any
/// construction or arithmetic that would store NaN/Inf throws
/// ErrorCode::non_finite.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> values() const noexcept { return coords_; }
  const std::vector<double>& to_std() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  /// Returns a copy with coordinate i replaced.
  Vector with(std::size_t i, double value) const;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> coords_;
};

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(double s, const Vector& a);
Vector operator*(const Vector& a, double s);

double dot(const Vector& a, const Vector& b);
double euclidean_norm(const Vector& v);
double distance(const Vector& a, const Vector& b);

void require_same_dimension(const Vector& a, const Vector& b, const char* where);

using Operator = std::function<Vector(const Vector&)>;
/// tau -> prox_{tau g}(x)
using ProxMap = std::function<Vector(double tau, const Vector& x)>;
using ScalarFunction = std::function<double(const Vector&)>;

enum class MonotonicityKind {
  strong,
  /// Strong pseudomonotonicity; admissible for projection problems only.
  strong_pseudo,
};

/// A mixed variational inequality: find x* with
/// <F(x*), x - x*> + g(x) - g(x*) >= 0 for all x.
struct MviProblem {
  std::size_t dimension = 0;
  Operator op;
  ProxMap prox;
  std::optional<double> mu;
  std::optional<double> lip;
  std::optional<Vector> reference_solution;
  /// g itself, when it can be evaluated (used by residual probes).
  ScalarFunction g;
  MonotonicityKind monotonicity = MonotonicityKind::strong;
  /// mu/lip came from sampled estimates rather than proven constants.
  bool estimated_constants = false;

  /// Checks the certificate invariants (positivity and mu <= lip for
  /// strongly monotone operators). Throws ErrorCode::invalid_argument.
  void check() const;
};

class FlowParams {
 public:
  /// Throws ErrorCode::invalid_argument unless lambda, kappa1, kappa2 > 0,
  /// alpha1 in (0,1) and alpha2 > 1.
  FlowParams(double lambda, double kappa1, double kappa2, double alpha1,
             double alpha2);

  /// Skips range checks. Only for degenerate-parameter comparisons in tests
  /// (e.g. kappa2 = 0, alpha1 = 1 reduces to the nominal flow).
  static FlowParams unchecked(double lambda, double kappa1, double kappa2,
                              double alpha1, double alpha2);

  double lambda() const noexcept { return lambda_; }
  double kappa1() const noexcept { return kappa1_; }
  double kappa2() const noexcept { return kappa2_; }
  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return alpha2_; }

  FlowParams with_lambda(double v) const { return {v, kappa1_, kappa2_, alpha1_, alpha2_}; }
  FlowParams with_kappas(double k1, double k2) const { return {lambda_, k1, k2, alpha1_, alpha2_}; }
  FlowParams with_alphas(double a1, double a2) const { return {lambda_, kappa1_, kappa2_, a1, a2}; }

  friend bool operator==(const FlowParams&, const FlowParams&) = default;

 private:
  struct Unchecked {};
  FlowParams(Unchecked, double lambda, double kappa1, double kappa2,
             double alpha1, double alpha2)
      : lambda_(lambda), kappa1_(kappa1), kappa2_(kappa2), alpha1_(alpha1), alpha2_(alpha2) {}

  double lambda_;
  double kappa1_;
  double kappa2_;
  double alpha1_;
  double alpha2_;
};

inline constexpr double kDefaultFixThreshold = 1e-13;

struct DiscretizationParams {
  double eta = 1e-4;
  std::int64_t max_steps = 2'000'000;
  double stop_residual = 0.0;
  double fix_threshold = kDefaultFixThreshold;

  void check() const;
};

struct IterateRecord {
  std::int64_t k = 0;
  double t = 0.0;
  double residual = 0.0;
  std::optional<double> error;
  std::optional<double> lyapunov;
  std::optional<Vector> state;
};

enum class Termination { residual_met, step_cap, fixed_point };

const char* to_string(Termination t);

struct NominalRhs {
  double kappa;
  double lambda;
};

struct RunLog {
  std::vector<IterateRecord> records;
  /// Modified-flow parameters; empty for nominal runs.
  std::optional<FlowParams> flow;
  std::optional<NominalRhs> nominal;
  DiscretizationParams disc;
  Termination termination = Termination::step_cap;
  Vector final_state;
};

struct ValidationReport {
  enum class Status { pass, fail, uncheckable };

  Status status = Status::uncheckable;
  /// Open interval (0, 2 mu / L^2) when checkable.
  std::optional<double> lambda_upper;
  bool lambda_in_window = false;
  std::optional<bool> alpha1_in_window;
  std::optional<double> alpha1_window_lower;
  std::vector<std::string> reasons;
};

/// Checks lambda against (0, 2 mu / L^2) and alpha1 against the certified
/// window. Missing mu or lip yields Status::uncheckable rather than throwing.
ValidationReport validate_problem(const MviProblem& p, const FlowParams& fp);

}  // namespace fxt_mvi
