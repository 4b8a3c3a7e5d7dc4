#include "fxt_mvi/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fxt_mvi/prox.hpp"

namespace fxt_mvi {

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::example1: return "example1";
    case ExperimentKind::example2: return "example2";
    case ExperimentKind::custom: return "custom";
  }
  return "unknown";
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::eta: return "eta";
    case SweepAxis::xi: return "xi";
    case SweepAxis::x0: return "x0";
  }
  return "unknown";
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExampleSetup build_example1() {
  ExampleSetup s;
  s.kind = ExperimentKind::example1;
  const ProxHandle ball = ProxHandle::ball(Vector{2.0, 2.0}, 1.0);
  s.problem.dimension = 2;
  s.problem.op = example1_operator;
  s.problem.prox = ball.as_map();
  s.problem.g = ball.as_function();
  s.problem.mu = 11.0;
  s.problem.lip = 5.0;
  s.problem.monotonicity = MonotonicityKind::strong_pseudo;
  s.flow = FlowParams(0.44, 20.0, 20.0, 0.8, 1.2);
  s.disc.eta = 1e-4;
  s.disc.max_steps = 1'402'000;
  s.stated_solution = Vector{2.707, 2.707};
  s.stated_k_star = 1'402'000;
  s.problem.check();
  return s;
}

ExampleSetup build_example2(std::uint64_t seed) {
  constexpr double beta1 = 2.5;
  constexpr double beta2 = 0.25;
  ExampleSetup s;
  s.kind = ExperimentKind::example2;
  s.dataset = generate_dataset(seed, 100, 3);
  const ProxHandle l1 = ProxHandle::l1(beta1);
  s.problem.dimension = 3;
  s.problem.op = elasticnet_logistic_operator(*s.dataset, beta2);
  s.problem.prox = l1.as_map();
  s.problem.g = l1.as_function();
  s.problem.mu = 0.5;
  s.problem.lip = 0.5;
  s.flow = FlowParams(0.005, 20.0, 200.0, 0.97, 1.03);
  s.disc.eta = 1e-4;
  s.disc.max_steps = 80'600;
  s.stated_k_star = 80'600;
  s.stated_t_bar = 8.06;
  s.problem.check();
  return s;
}

FixedPointTrace fixed_point_iteration(const MviProblem& p, double lambda, const Vector& x0,
                                      double tol, std::int64_t max_iterations) {
  FixedPointTrace trace;
  Vector x = x0;
  for (std::int64_t it = 0; it < max_iterations; ++it) {
    const Vector y = prox_grad_map(p, lambda, x);
    const double r = distance(x, y);
    trace.residuals.push_back(r);
    if (r < tol) {
      trace.x = x;
      trace.iterations = it;
      return trace;
    }
    x = y;
  }
  std::ostringstream os;
  os << "fixed-point iteration did not reach residual " << tol << " within " << max_iterations
     << " iterations (last residual " << trace.residuals.back() << ")";
  throw Error(ErrorCode::no_convergence, os.str());
}

Vector reference_solution(const MviProblem& p, double lambda) {
  if (p.mu && p.lip) contraction_factor(*p.mu, *p.lip, lambda);  // window check
  return fixed_point_iteration(p, lambda, Vector(p.dimension)).x;
}

double mvi_inequality_margin(const MviProblem& p, const Vector& xbar, std::size_t probes,
                             std::uint64_t seed) {
  if (!p.g) throw Error(ErrorCode::invalid_argument, "margin test needs an explicit g");
  const Vector f = p.op(xbar);
  const double gbar = p.g(xbar);
  SplitMix64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probes; ++i) {
    std::vector<double> z(xbar.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = xbar[j] + rng.uniform(-1.0, 1.0);
    const Vector zv(std::move(z));
    const double gz = p.g(zv);
    if (!std::isfinite(gz)) continue;  // outside dom g: inequality holds trivially
    worst = std::min(worst, dot(f, zv - xbar) + gz - gbar);
  }
  return worst;
}

std::vector<Vector> sample_initial_conditions(std::uint64_t seed, std::size_t count,
                                              std::size_t dim, double half_width) {
  SplitMix64 rng(seed ^ 0x5851F42D4C957F2DULL);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> v(dim);
    for (double& c : v) c = rng.uniform(-half_width, half_width);
    out.emplace_back(std::move(v));
  }
  return out;
}

namespace {

std::string sweep_tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExampleSetup& setup, const ExperimentConfig& cfg) {
  cfg.disc.check();
  ExperimentResult result;

  MviProblem problem = setup.problem;
  if (!problem.reference_solution && problem.mu && problem.lip) {
    try {
      problem.reference_solution = reference_solution(problem, cfg.flow.lambda());
    } catch (const Error& e) {
      result.failures.push_back(std::string("reference solution: ") + e.what());
    }
  }
  result.reference = problem.reference_solution;

  const std::size_t dim = problem.dimension;
  std::vector<Vector> base_x0 = cfg.x0_list;
  if (base_x0.empty()) base_x0 = sample_initial_conditions(cfg.seed, cfg.x0_samples, dim);
  if (base_x0.empty()) throw Error(ErrorCode::invalid_argument, "no initial conditions");

  std::vector<std::optional<double>> sweep_values;
  if (cfg.sweep) {
    for (double v : cfg.sweep->values) sweep_values.emplace_back(v);
  } else {
    sweep_values.emplace_back(std::nullopt);
  }

  if (!cfg.output_dir.empty()) std::filesystem::create_directories(cfg.output_dir);

  for (const auto& sv : sweep_values) {
    ParameterSetCertificate pc{sv, cfg.flow, cfg.disc, std::nullopt, {}};
    std::vector<Vector> x0s = base_x0;
    try {
      if (sv && cfg.sweep->axis == SweepAxis::eta) pc.disc.eta = *sv;
      if (sv && cfg.sweep->axis == SweepAxis::xi) {
        const auto [a1, a2] = xi_params(*sv);
        pc.flow = pc.flow.with_alphas(a1, a2);
      }
      if (sv && cfg.sweep->axis == SweepAxis::x0) {
        for (Vector& x : x0s) {
          const double n = euclidean_norm(x);
          if (n == 0.0) throw Error(ErrorCode::invalid_argument, "cannot rescale a zero x0");
          x = (*sv / n) * x;
        }
      }
      pc.disc.check();
    } catch (const Error& e) {
      result.failures.push_back("sweep value " + sweep_tag(*sv) + ": " + e.what());
      continue;
    }
    try {
      pc.certificate = certificate(problem, pc.flow, pc.disc);
    } catch (const Error& e) {
      pc.error = e.what();
    }
    result.certificates.push_back(pc);

    for (std::size_t i = 0; i < x0s.size(); ++i) {
      RunOutcome run;
      run.sweep_value = sv;
      run.x0_index = i;
      run.x0 = x0s[i];
      try {
        SolveOptions opts;
        opts.record_every = cfg.record_every;
        opts.clamp_step = cfg.clamp_step;
        run.log = solve(problem, pc.flow, pc.disc, x0s[i], opts);
      } catch (const Error& e) {
        run.error = e.what();
        std::ostringstream os;
        os << to_string(setup.kind);
        if (sv) os << " " << to_string(cfg.sweep->axis) << "=" << sweep_tag(*sv);
        os << " x0[" << i << "]: " << e.what();
        result.failures.push_back(os.str());
      }
      if (!cfg.output_dir.empty()) {
        std::string stem = to_string(setup.kind);
        if (sv) stem += std::string("_") + to_string(cfg.sweep->axis) + "-" + sweep_tag(*sv);
        stem += "_x0-" + std::to_string(i);
        if (run.log) {
          run.csv_path = cfg.output_dir / (stem + ".csv");
          emit_csv(*run.log, run.csv_path);
        }
        emit_metadata(run_metadata(cfg, run, &result.certificates.back()),
                      cfg.output_dir / (stem + ".meta"));
      }
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

std::string format_csv(const RunLog& log) {
  std::string out = "k,t,residual,error,lyapunov\n";
  for (const IterateRecord& r : log.records) {
    out += std::to_string(r.k);
    out += ',' + format_real(r.t);
    out += ',' + format_real(r.residual);
    out += ',' + (r.error ? format_real(*r.error) : std::string());
    out += ',' + (r.lyapunov ? format_real(*r.lyapunov) : std::string());
    out += '\n';
  }
  return out;
}

void emit_csv(const RunLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  out << format_csv(log);
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

std::vector<IterateRecord> parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "k,t,residual,error,lyapunov") {
    throw Error(ErrorCode::io_error, path.string() + ":1: unexpected CSV header");
  }
  std::vector<IterateRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 5) {
      throw Error(ErrorCode::io_error,
                  path.string() + ":" + std::to_string(lineno) + ": expected 5 fields");
    }
    try {
      IterateRecord r;
      r.k = std::stoll(fields[0]);
      r.t = std::stod(fields[1]);
      r.residual = std::stod(fields[2]);
      if (!fields[3].empty()) r.error = std::stod(fields[3]);
      if (!fields[4].empty()) r.lyapunov = std::stod(fields[4]);
      records.push_back(r);
    } catch (const std::exception&) {
      throw Error(ErrorCode::io_error,
                  path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return records;
}

KeyValues certificate_fields(const ConvergenceCertificate& c) {
  KeyValues kv;
  kv.emplace_back("c", format_real(c.c));
  kv.emplace_back("eps_c", format_real(c.eps_c));
  kv.emplace_back("alpha1_window_lower", format_real(c.alpha1_window.lower));
  kv.emplace_back("alpha1_window_upper", format_real(c.alpha1_window.upper));
  kv.emplace_back("q1", format_real(c.q1));
  kv.emplace_back("q2", format_real(c.q2));
  kv.emplace_back("a1", format_real(c.a1));
  kv.emplace_back("a2", format_real(c.a2));
  kv.emplace_back("gamma1", format_real(c.gamma1));
  kv.emplace_back("gamma2", format_real(c.gamma2));
  if (c.t_bar) kv.emplace_back("t_bar", format_real(*c.t_bar));
  if (c.xi) kv.emplace_back("xi", format_real(*c.xi));
  if (c.t_bar_xi) kv.emplace_back("t_bar_xi", format_real(*c.t_bar_xi));
  if (c.k_star) kv.emplace_back("k_star", std::to_string(*c.k_star));
  kv.emplace_back("uncertified_alpha1", c.uncertified_alpha1 ? "true" : "false");
  kv.emplace_back("estimated_constants", c.estimated_constants ? "true" : "false");
  return kv;
}

KeyValues run_metadata(const ExperimentConfig& cfg, const RunOutcome& run,
                       const ParameterSetCertificate* cert) {
  KeyValues kv;
  auto vec = [](const Vector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
    return s;
  };
  const FlowParams& fp = cert ? cert->flow : cfg.flow;
  const DiscretizationParams& dp = cert ? cert->disc : cfg.disc;
  kv.emplace_back("experiment", to_string(cfg.experiment));
  kv.emplace_back("seed", std::to_string(cfg.seed));
  if (cfg.sweep) kv.emplace_back("sweep_axis", to_string(cfg.sweep->axis));
  if (run.sweep_value) kv.emplace_back("sweep_value", format_real(*run.sweep_value));
  kv.emplace_back("x0_index", std::to_string(run.x0_index));
  kv.emplace_back("x0", vec(run.x0));
  kv.emplace_back("lambda", format_real(fp.lambda()));
  kv.emplace_back("kappa1", format_real(fp.kappa1()));
  kv.emplace_back("kappa2", format_real(fp.kappa2()));
  kv.emplace_back("alpha1", format_real(fp.alpha1()));
  kv.emplace_back("alpha2", format_real(fp.alpha2()));
  kv.emplace_back("eta", format_real(dp.eta));
  kv.emplace_back("max_steps", std::to_string(dp.max_steps));
  kv.emplace_back("stop_residual", format_real(dp.stop_residual));
  kv.emplace_back("fix_threshold", format_real(dp.fix_threshold));
  kv.emplace_back("record_every", std::to_string(cfg.record_every));
  if (cfg.clamp_step) kv.emplace_back("clamp_step", format_real(*cfg.clamp_step));
  if (run.log) {
    const IterateRecord& last = run.log->records.back();
    kv.emplace_back("termination", to_string(run.log->termination));
    kv.emplace_back("final_k", std::to_string(last.k));
    kv.emplace_back("final_residual", format_real(last.residual));
    if (last.error) kv.emplace_back("final_error", format_real(*last.error));
    kv.emplace_back("final_state", vec(run.log->final_state));
  } else {
    kv.emplace_back("termination", "error");
    kv.emplace_back("error", run.error);
  }
  if (cert && cert->certificate) {
    for (auto& [k, v] : certificate_fields(*cert->certificate)) kv.emplace_back("cert_" + k, v);
  } else if (cert) {
    kv.emplace_back("cert_error", cert->error);
  }
  return kv;
}

void emit_metadata(const KeyValues& kv, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

}  // namespace fxt_mvi
