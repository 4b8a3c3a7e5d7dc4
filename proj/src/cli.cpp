#include "fxt_mvi/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "fxt_mvi/analysis.hpp"
#include "fxt_mvi/bench.hpp"
#include "fxt_mvi/verify.hpp"

namespace fxt_mvi::cli {

namespace {

constexpr std::array<const char*, 24> kKeys = {
    "preset",      "mu",         "L",           "lambda",       "kappa1",
    "kappa2",      "alpha1",     "alpha2",      "xi",           "eta",
    "max-steps",   "tol",        "x0",          "samples",      "seed",
    "out",         "sweep",      "record-every", "clamp-step",  "n",
    "d",           "estimate-constants", "fix-threshold", "monotonicity"};

bool known_key(const std::string& k) {
  for (const char* key : kKeys) {
    if (k == key) return true;
  }
  return false;
}

std::string normalise_key(std::string k) {
  for (char& c : k) {
    if (c == '_') c = '-';
  }
  return k;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_fail(const std::string& msg) { throw Error(ErrorCode::config_error, msg); }

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    config_fail("field '" + key + "': expected a finite number, got '" + text + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    // Accept integral values written in floating form, e.g. 1.402e6.
    const double d = parse_real(key, text);
    if (d != std::floor(d) || std::abs(d) > 9e18) {
      config_fail("field '" + key + "': expected an integer, got '" + text + "'");
    }
    return static_cast<std::int64_t>(d);
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  if (out.empty()) config_fail("field '" + key + "': empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  config_fail("field '" + key + "': expected true/false, got '" + text + "'");
}

// Value with the precedence layer it came from: 1 config file, 2 command line.
struct Setting {
  std::string value;
  int layer;
};

using Settings = std::map<std::string, Setting>;

struct Resolved {
  ExampleSetup setup;
  ExperimentConfig cfg;
  std::string preset;
  std::size_t n = 100;
  std::size_t d = 3;
  bool lambda_given = false;
};

Resolved resolve(const Settings& s) {
  auto get = [&](const char* k) -> const Setting* {
    const auto it = s.find(k);
    return it == s.end() ? nullptr : &it->second;
  };
  auto layer_of = [&](const char* k) {
    const Setting* v = get(k);
    return v ? v->layer : 0;
  };

  Resolved r;
  r.cfg.seed = 0;
  if (const Setting* v = get("seed")) {
    const std::int64_t seed = parse_int("seed", v->value);
    if (seed < 0) config_fail("field 'seed': must be nonnegative");
    r.cfg.seed = static_cast<std::uint64_t>(seed);
  }

  r.preset = get("preset") ? trim(get("preset")->value) : "custom";
  if (r.preset == "example1") {
    r.setup = build_example1();
    r.cfg.experiment = ExperimentKind::example1;
  } else if (r.preset == "example2") {
    r.setup = build_example2(r.cfg.seed);
    r.cfg.experiment = ExperimentKind::example2;
  } else if (r.preset == "custom") {
    r.cfg.experiment = ExperimentKind::custom;
    r.setup.kind = ExperimentKind::custom;
  } else {
    config_fail("field 'preset': unknown preset '" + r.preset + "' (example1, example2)");
  }

  if (const Setting* v = get("mu")) r.setup.problem.mu = parse_real("mu", v->value);
  if (const Setting* v = get("L")) r.setup.problem.lip = parse_real("L", v->value);
  if (const Setting* v = get("monotonicity")) {
    const std::string m = trim(v->value);
    if (m == "strong") r.setup.problem.monotonicity = MonotonicityKind::strong;
    else if (m == "pseudo") r.setup.problem.monotonicity = MonotonicityKind::strong_pseudo;
    else config_fail("field 'monotonicity': expected strong or pseudo");
  }

  const FlowParams base = r.setup.kind == ExperimentKind::custom
                               ? FlowParams(1.0, 20.0, 20.0, 0.8, 1.2)
                               : r.setup.flow;
  r.lambda_given = get("lambda") != nullptr;
  const double lambda = get("lambda") ? parse_real("lambda", get("lambda")->value) : base.lambda();
  const double k1 = get("kappa1") ? parse_real("kappa1", get("kappa1")->value) : base.kappa1();
  const double k2 = get("kappa2") ? parse_real("kappa2", get("kappa2")->value) : base.kappa2();
  double a1 = get("alpha1") ? parse_real("alpha1", get("alpha1")->value) : base.alpha1();
  double a2 = get("alpha2") ? parse_real("alpha2", get("alpha2")->value) : base.alpha2();
  const int xi_layer = layer_of("xi");
  const int alpha_layer = std::max(layer_of("alpha1"), layer_of("alpha2"));
  if (xi_layer > 0 && xi_layer == alpha_layer) {
    config_fail("--xi is mutually exclusive with --alpha1/--alpha2");
  }
  if (xi_layer > alpha_layer) {
    std::tie(a1, a2) = xi_params(parse_real("xi", get("xi")->value));
  }
  r.cfg.flow = FlowParams(lambda, k1, k2, a1, a2);
  r.setup.flow = r.cfg.flow;

  r.cfg.disc = r.setup.disc;
  if (const Setting* v = get("eta")) r.cfg.disc.eta = parse_real("eta", v->value);
  if (const Setting* v = get("max-steps")) r.cfg.disc.max_steps = parse_int("max-steps", v->value);
  if (const Setting* v = get("tol")) r.cfg.disc.stop_residual = parse_real("tol", v->value);
  if (const Setting* v = get("fix-threshold")) {
    r.cfg.disc.fix_threshold = parse_real("fix-threshold", v->value);
  }
  r.cfg.disc.check();

  if (const Setting* v = get("x0")) r.cfg.x0_list = {Vector(parse_list("x0", v->value))};
  if (const Setting* v = get("samples")) {
    const std::int64_t n = parse_int("samples", v->value);
    if (n < 1) config_fail("field 'samples': must be >= 1");
    r.cfg.x0_samples = static_cast<std::size_t>(n);
  }
  if (const Setting* v = get("record-every")) {
    r.cfg.record_every = parse_int("record-every", v->value);
    if (r.cfg.record_every < 1) config_fail("field 'record-every': must be >= 1");
  }
  if (const Setting* v = get("clamp-step")) {
    r.cfg.clamp_step = parse_real("clamp-step", v->value);
    if (!(*r.cfg.clamp_step > 0.0)) config_fail("field 'clamp-step': must be positive");
  }
  if (const Setting* v = get("sweep")) {
    const std::string spec = trim(v->value);
    const auto eq = spec.find('=');
    if (eq == std::string::npos) config_fail("field 'sweep': expected <axis>=<v1,v2,...>");
    const std::string axis = trim(spec.substr(0, eq));
    Sweep sw{SweepAxis::eta, parse_list("sweep", spec.substr(eq + 1))};
    if (axis == "eta") sw.axis = SweepAxis::eta;
    else if (axis == "xi") sw.axis = SweepAxis::xi;
    else if (axis == "x0") sw.axis = SweepAxis::x0;
    else config_fail("field 'sweep': unknown axis '" + axis + "' (eta, xi, x0)");
    r.cfg.sweep = sw;
  }

  if (const Setting* v = get("out")) {
    r.cfg.output_dir = trim(v->value);
  } else if (const char* env = std::getenv("FXT_MVI_OUT_DIR"); env && *env) {
    r.cfg.output_dir = env;
  } else {
    r.cfg.output_dir = "fxt_mvi_out";
  }

  if (const Setting* v = get("n")) r.n = static_cast<std::size_t>(std::max<std::int64_t>(0, parse_int("n", v->value)));
  if (const Setting* v = get("d")) r.d = static_cast<std::size_t>(std::max<std::int64_t>(0, parse_int("d", v->value)));

  if (get("estimate-constants") && parse_bool("estimate-constants", get("estimate-constants")->value)) {
    if (!r.setup.problem.op) {
      config_fail("--estimate-constants needs a preset operator to sample");
    }
    const std::size_t dim = r.setup.problem.dimension;
    SampleBox box{Vector(dim, -1.0), Vector(dim, 1.0)};
    if (r.setup.kind == ExperimentKind::example1) box = {Vector{1.0, 1.0}, Vector{3.0, 3.0}};
    r.setup.problem.lip = estimate_lipschitz(r.setup.problem.op, 2000, box, r.cfg.seed);
    r.setup.problem.mu = estimate_strong_monotonicity(r.setup.problem.op, 2000, box, r.cfg.seed);
    r.setup.problem.estimated_constants = true;
  }
  return r;
}

void print_kv(std::ostream& out, const std::string& k, const std::string& v) {
  out << k << '=' << v << '\n';
}

std::string window_text(double lo, double hi) {
  std::ostringstream os;
  os << "(" << lo << ", " << hi << ")";
  return os.str();
}

// Lambda-window validation shared by every computing verb. Returns an exit
// code when the verb must stop.
std::optional<int> check_lambda(const Resolved& r, std::ostream& err) {
  const ValidationReport report = validate_problem(r.setup.problem, r.cfg.flow);
  if (report.status == ValidationReport::Status::uncheckable) {
    err << "warning: mu/L not supplied; convergence certificates are unavailable\n";
    return std::nullopt;
  }
  if (!report.lambda_in_window) {
    err << "error: lambda outside " << window_text(0.0, *report.lambda_upper) << "\n";
    return kExitValidation;
  }
  if (r.setup.problem.estimated_constants) {
    err << "warning: mu/L are sampled estimates; the bounds below are not guarantees\n";
  }
  return std::nullopt;
}

int cmd_bounds(const Resolved& r, std::ostream& out, std::ostream& err) {
  if (r.setup.kind == ExperimentKind::custom && !r.lambda_given) {
    err << "error: config_error: field 'lambda': required when no preset is given\n";
    return kExitValidation;
  }
  if (!r.setup.problem.mu || !r.setup.problem.lip) {
    err << "error: missing_certificates: bounds needs --mu and --L (or a preset)\n";
    return kExitValidation;
  }
  if (auto code = check_lambda(r, err)) return *code;
  try {
    MviProblem constants_only = r.setup.problem;
    constants_only.dimension = std::max<std::size_t>(constants_only.dimension, 1);
    if (!constants_only.op) constants_only.op = [](const Vector& x) { return x; };
    if (!constants_only.prox) constants_only.prox = [](double, const Vector& x) { return x; };
    constants_only.check();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  const ConvergenceCertificate cert = certificate(r.setup.problem, r.cfg.flow, r.cfg.disc);
  const FlowParams& fp = r.cfg.flow;
  print_kv(out, "preset", r.preset);
  print_kv(out, "mu", format_real(*r.setup.problem.mu));
  print_kv(out, "L", format_real(*r.setup.problem.lip));
  print_kv(out, "lambda", format_real(fp.lambda()));
  print_kv(out, "lambda_window",
           window_text(0.0, lambda_upper_bound(*r.setup.problem.mu, *r.setup.problem.lip)));
  print_kv(out, "kappa1", format_real(fp.kappa1()));
  print_kv(out, "kappa2", format_real(fp.kappa2()));
  print_kv(out, "alpha1", format_real(fp.alpha1()));
  print_kv(out, "alpha2", format_real(fp.alpha2()));
  print_kv(out, "eta", format_real(r.cfg.disc.eta));
  for (const auto& [k, v] : certificate_fields(cert)) print_kv(out, k, v);
  if (r.setup.stated_t_bar) print_kv(out, "stated_t_bar", format_real(*r.setup.stated_t_bar));
  if (r.setup.stated_k_star) {
    print_kv(out, "stated_k_star", std::to_string(*r.setup.stated_k_star));
  }
  if (cert.uncertified_alpha1) {
    out << "flag=uncertified_alpha1\n";
    err << "warning: uncertified_alpha1: alpha1=" << fp.alpha1()
        << " lies outside the certified window " << window_text(cert.alpha1_window.lower, 1.0)
        << "; the settling-time bound and k* cannot be derived from these constants";
    if (r.setup.stated_t_bar) {
      err << " (stated value " << *r.setup.stated_t_bar << " is reported as-is)";
    }
    err << "\n";
  }
  if (cert.estimated_constants) out << "flag=estimated_constants\n";
  return kExitOk;
}

int cmd_run(const Resolved& r, bool sweep, std::ostream& out, std::ostream& err) {
  if (!r.setup.problem.op) {
    err << "error: run/sweep need --preset (custom operators are available through the library API)\n";
    return kExitValidation;
  }
  if (sweep && !r.cfg.sweep) {
    err << "error: sweep needs --sweep <axis>=<v1,v2,...>\n";
    return kExitValidation;
  }
  for (const Vector& x0 : r.cfg.x0_list) {
    if (x0.size() != r.setup.problem.dimension) {
      err << "error: field 'x0': expected " << r.setup.problem.dimension << " coordinates, got "
          << x0.size() << "\n";
      return kExitValidation;
    }
  }
  if (auto code = check_lambda(r, err)) return *code;

  ExperimentConfig cfg = r.cfg;
  if (!sweep) cfg.sweep.reset();
  const ExperimentResult res = run_experiment(r.setup, cfg);
  for (const ParameterSetCertificate& pc : res.certificates) {
    if (pc.certificate && pc.certificate->uncertified_alpha1) {
      err << "warning: uncertified_alpha1 for alpha1=" << pc.flow.alpha1()
          << "; fixed-time bounds do not apply\n";
    }
  }
  for (const RunOutcome& run : res.runs) {
    out << "run";
    if (run.sweep_value) out << " " << to_string(cfg.sweep->axis) << "=" << format_real(*run.sweep_value);
    out << " x0[" << run.x0_index << "]";
    if (run.log) {
      const IterateRecord& last = run.log->records.back();
      out << " termination=" << to_string(run.log->termination) << " steps=" << last.k
          << " residual=" << format_real(last.residual);
      if (last.error) out << " error=" << format_real(*last.error);
      out << " csv=" << run.csv_path.string();
    } else {
      out << " failed: " << run.error;
    }
    out << "\n";
  }
  for (const std::string& f : res.failures) err << "failure: " << f << "\n";
  return res.failures.empty() ? kExitOk : kExitRuntime;
}

int cmd_gen_data(const Resolved& r, std::ostream& out) {
  if (r.n < 1 || r.d < 1) config_fail("fields 'n' and 'd' must be >= 1");
  const Dataset data = generate_dataset(r.cfg.seed, r.n, r.d);
  std::filesystem::create_directories(r.cfg.output_dir);
  const auto path = r.cfg.output_dir / ("dataset_seed-" + std::to_string(r.cfg.seed) + "_n-" +
                                        std::to_string(r.n) + "_d-" + std::to_string(r.d) + ".txt");
  save_dataset(data, path);
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_verify(const Resolved& r, std::ostream& out) {
  const std::vector<PropertyResult> results = run_property_suite(r.cfg.seed);
  bool all = true;
  for (const PropertyResult& p : results) {
    out << (p.passed ? "PASS " : "FAIL ") << p.name << ": " << p.detail << "\n";
    all = all && p.passed;
  }
  out << (all ? "all properties passed" : "some properties FAILED") << "\n";
  return all ? kExitOk : kExitRuntime;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_fail("cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_fail(where + "expected key = value");
    const std::string key = normalise_key(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key)) config_fail(where + "unknown field '" + key + "'");
    if (value.empty()) config_fail(where + "field '" + key + "' has no value");
    if (key == "xi" && (kv.count("alpha1") || kv.count("alpha2"))) {
      config_fail(where + "xi is mutually exclusive with alpha1/alpha2");
    }
    if ((key == "alpha1" || key == "alpha2") && kv.count("xi")) {
      config_fail(where + "alpha1/alpha2 are mutually exclusive with xi");
    }
    kv[key] = value;
  }
  return kv;
}

int parse_and_dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-time proximal dynamics solver for mixed variational inequalities", "fxt-mvi"};
  app.require_subcommand(1);

  CliCommand command;
  std::string config_path;
  std::map<std::string, std::string> flag_values;
  app.add_option("--config", config_path, "flat key=value configuration file");
  const std::array<std::pair<const char*, const char*>, 22> string_flags = {{
      {"preset", "example1 | example2"},
      {"mu", "strong monotonicity modulus"},
      {"L", "Lipschitz constant"},
      {"lambda", "prox step"},
      {"kappa1", "gain of the finite-time term"},
      {"kappa2", "gain of the fixed-time term"},
      {"alpha1", "exponent in (0,1)"},
      {"alpha2", "exponent > 1"},
      {"xi", "sets alpha = (1 - 2/xi, 1 + 2/xi)"},
      {"eta", "forward-Euler time step"},
      {"max-steps", "step cap"},
      {"tol", "stop once |x - y(x)| falls below this"},
      {"x0", "comma-separated initial condition"},
      {"samples", "number of seeded random initial conditions"},
      {"seed", "dataset and x0 seed"},
      {"out", "output directory (default $FXT_MVI_OUT_DIR)"},
      {"sweep", "<eta|xi|x0>=v1,v2,..."},
      {"record-every", "log every n-th iterate"},
      {"clamp-step", "cap on the per-step displacement"},
      {"n", "gen-data: sample count"},
      {"d", "gen-data: feature dimension"},
      {"monotonicity", "strong | pseudo (custom problems)"},
  }};
  for (const auto& [name, help] : string_flags) {
    app.add_option_function<std::string>(
        std::string("--") + name,
        [&flag_values, key = std::string(name)](const std::string& v) { flag_values[key] = v; },
        help);
  }
  app.add_flag_function(
      "--estimate-constants",
      [&flag_values](std::int64_t) { flag_values["estimate-constants"] = "true"; },
      "replace mu/L by sampled estimates (bounds become heuristic)");

  for (const char* verb : {"run", "bounds", "sweep", "gen-data", "verify"}) {
    app.add_subcommand(verb)->fallthrough();
  }

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }
  command.verb = app.get_subcommands().front()->get_name();
  if (!config_path.empty()) command.config_path = config_path;
  command.overrides = flag_values;

  try {
    Settings settings;
    if (command.config_path) {
      for (auto& [k, v] : parse_config_file(*command.config_path)) settings[k] = {v, 1};
    }
    if (command.overrides.count("xi") &&
        (command.overrides.count("alpha1") || command.overrides.count("alpha2"))) {
      config_fail("--xi is mutually exclusive with --alpha1/--alpha2");
    }
    for (auto& [k, v] : command.overrides) settings[k] = {v, 2};
    const Resolved r = resolve(settings);

    if (command.verb == "bounds") return cmd_bounds(r, out, err);
    if (command.verb == "run") return cmd_run(r, false, out, err);
    if (command.verb == "sweep") return cmd_run(r, true, out, err);
    if (command.verb == "gen-data") return cmd_gen_data(r, out);
    return cmd_verify(r, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::non_finite:
      case ErrorCode::no_convergence:
      case ErrorCode::io_error:
        return kExitRuntime;
      default:
        return kExitValidation;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace fxt_mvi::cli
