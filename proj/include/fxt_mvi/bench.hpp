#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fxt_mvi/analysis.hpp"
#include "fxt_mvi/core.hpp"
#include "fxt_mvi/flow.hpp"
#include "fxt_mvi/operators.hpp"

namespace fxt_mvi {

enum class ExperimentKind { example1, example2, custom };

const char* to_string(ExperimentKind k);

/// A ready-to-run problem with its default parameters and any stated
/// reference values that come with it.
struct ExampleSetup {
  ExperimentKind kind = ExperimentKind::custom;
  MviProblem problem;
  FlowParams flow{0.1, 1.0, 1.0, 0.5, 1.5};
  DiscretizationParams disc;
  std::optional<Dataset> dataset;
  std::optional<Vector> stated_solution;
  std::optional<std::int64_t> stated_k_star;
  std::optional<double> stated_t_bar;
};

/// Ball-constrained VI, C = {(x1-2)^2 + (x2-2)^2 <= 1}, mu = 11 (strong
/// pseudomonotonicity), L = 5, lambda = 0.44, kappa = (20, 20),
/// alpha = (0.8, 1.2), eta = 1e-4. Reference solution left unset.
ExampleSetup build_example1();

/// Elastic-net logistic regression on generate_dataset(seed, 100, 3) with
/// beta1 = 2.5, beta2 = 0.25, mu = L = 0.5, lambda = 0.005, kappa = (20, 200),
/// alpha = (0.97, 1.03), eta = 1e-4.
ExampleSetup build_example2(std::uint64_t seed = 0);

struct FixedPointTrace {
  Vector x;
  std::vector<double> residuals;
  std::int64_t iterations = 0;
};

/// Banach iteration x <- y(x) from x0 until |x - y(x)| < tol. Throws
/// no_convergence when max_iterations is reached.
FixedPointTrace fixed_point_iteration(const MviProblem& p, double lambda, const Vector& x0,
                                      double tol = 1e-13,
                                      std::int64_t max_iterations = 100'000'000);

/// Solution oracle: the fixed point of y started from the origin.
Vector reference_solution(const MviProblem& p, double lambda);

/// min over `probes` random z in the unit box around xbar of
/// <F(xbar), z - xbar> + g(z) - g(xbar). Nonnegative (up to rounding) iff
/// xbar solves the MVI. Requires p.g.
double mvi_inequality_margin(const MviProblem& p, const Vector& xbar, std::size_t probes,
                             std::uint64_t seed);

/// `count` points uniform on [-half_width, half_width]^dim drawn from
/// SplitMix64(seed ^ 0x5851F42D4C957F2D).
std::vector<Vector> sample_initial_conditions(std::uint64_t seed, std::size_t count,
                                              std::size_t dim, double half_width = 10.0);

enum class SweepAxis { eta, xi, x0 };

const char* to_string(SweepAxis a);

/// eta: replaces the time step. xi: sets alpha = (1 - 2/xi, 1 + 2/xi).
/// x0: rescales every initial condition to the given Euclidean norm.
struct Sweep {
  SweepAxis axis;
  std::vector<double> values;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::example1;
  FlowParams flow{0.44, 20.0, 20.0, 0.8, 1.2};
  DiscretizationParams disc;
  std::vector<Vector> x0_list;
  /// Sampled initial conditions used when x0_list is empty.
  std::size_t x0_samples = 1;
  std::uint64_t seed = 0;
  std::optional<Sweep> sweep;
  /// Empty path: keep logs in memory only.
  std::filesystem::path output_dir;
  std::int64_t record_every = 100;
  std::optional<double> clamp_step;
};

struct RunOutcome {
  std::optional<double> sweep_value;
  std::size_t x0_index = 0;
  Vector x0;
  std::optional<RunLog> log;
  std::string error;
  std::filesystem::path csv_path;
};

struct ParameterSetCertificate {
  std::optional<double> sweep_value;
  FlowParams flow;
  DiscretizationParams disc;
  std::optional<ConvergenceCertificate> certificate;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunOutcome> runs;
  std::vector<ParameterSetCertificate> certificates;
  std::optional<Vector> reference;
  std::vector<std::string> failures;
};

/// One solve per (sweep value, x0), ordered by sweep value then x0 index.
/// Per-run failures are collected in `failures` without aborting the batch.
/// When setup.problem has no reference solution and mu/L admit it, one is
/// computed with reference_solution() first.
ExperimentResult run_experiment(const ExampleSetup& setup, const ExperimentConfig& cfg);

/// Header "k,t,residual,error,lyapunov"; absent error/lyapunov fields are
/// left empty. 17 significant digits, LF line endings.
void emit_csv(const RunLog& log, const std::filesystem::path& path);
std::string format_csv(const RunLog& log);
std::vector<IterateRecord> parse_csv(const std::filesystem::path& path);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parameters, certificate fields and termination of one run.
KeyValues run_metadata(const ExperimentConfig& cfg, const RunOutcome& run,
                       const ParameterSetCertificate* cert);
void emit_metadata(const KeyValues& kv, const std::filesystem::path& path);

/// Certificate fields as key=value pairs (absent optionals are omitted).
KeyValues certificate_fields(const ConvergenceCertificate& c);

/// "%.17g" formatting used by every persisted file.
std::string format_real(double v);

}  // namespace fxt_mvi
