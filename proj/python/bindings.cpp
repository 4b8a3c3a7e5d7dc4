#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fxt_mvi/analysis.hpp"
#include "fxt_mvi/bench.hpp"
#include "fxt_mvi/cli.hpp"
#include "fxt_mvi/flow.hpp"
#include "fxt_mvi/operators.hpp"
#include "fxt_mvi/prox.hpp"
#include "fxt_mvi/verify.hpp"

namespace py = pybind11;
using namespace fxt_mvi;

namespace {

Vector vec(const std::vector<double>& v) { return Vector(v); }

ExampleSetup preset(const std::string& name, std::uint64_t seed) {
  if (name == "example1") return build_example1();
  if (name == "example2") return build_example2(seed);
  throw Error(ErrorCode::invalid_argument, "unknown preset '" + name + "'");
}

py::dict certificate_dict(const ConvergenceCertificate& c) {
  py::dict d;
  d["c"] = c.c;
  d["eps_c"] = c.eps_c;
  d["alpha1_window"] = py::make_tuple(c.alpha1_window.lower, c.alpha1_window.upper);
  d["q1"] = c.q1;
  d["q2"] = c.q2;
  d["a1"] = c.a1;
  d["a2"] = c.a2;
  d["gamma1"] = c.gamma1;
  d["gamma2"] = c.gamma2;
  d["t_bar"] = c.t_bar;
  d["xi"] = c.xi;
  d["t_bar_xi"] = c.t_bar_xi;
  d["k_star"] = c.k_star;
  d["uncertified_alpha1"] = c.uncertified_alpha1;
  d["estimated_constants"] = c.estimated_constants;
  return d;
}

py::dict bounds(double mu, double lip, double lambda, double kappa1, double kappa2, double alpha1,
                double alpha2, double eta) {
  MviProblem p;
  p.mu = mu;
  p.lip = lip;
  DiscretizationParams dp;
  dp.eta = eta;
  return certificate_dict(certificate(p, FlowParams(lambda, kappa1, kappa2, alpha1, alpha2), dp));
}

py::dict solve_preset(const std::string& name, const std::vector<double>& x0, double eta,
                      std::int64_t max_steps, double tol, std::int64_t record_every,
                      std::uint64_t seed, std::optional<double> xi, bool nominal) {
  ExampleSetup s = preset(name, seed);
  s.problem.reference_solution = reference_solution(s.problem, s.flow.lambda());
  DiscretizationParams dp = s.disc;
  dp.eta = eta;
  dp.max_steps = max_steps;
  dp.stop_residual = tol;
  FlowParams fp = s.flow;
  if (xi) {
    const auto [a1, a2] = xi_params(*xi);
    fp = fp.with_alphas(a1, a2);
  }
  SolveOptions opts;
  opts.record_every = record_every;
  RhsKind rk = fp;
  if (nominal) rk = NominalRhs{fp.kappa1() + fp.kappa2(), fp.lambda()};
  RunLog log;
  {
    py::gil_scoped_release release;
    log = solve(s.problem, rk, dp, vec(x0), opts);
  }
  py::list k, t, residual, error;
  for (const IterateRecord& r : log.records) {
    k.append(r.k);
    t.append(r.t);
    residual.append(r.residual);
    error.append(r.error);
  }
  py::dict d;
  d["k"] = k;
  d["t"] = t;
  d["residual"] = residual;
  d["error"] = error;
  d["termination"] = std::string(to_string(log.termination));
  d["final_state"] = log.final_state.to_std();
  d["reference"] = s.problem.reference_solution->to_std();
  return d;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv{"fxt-mvi"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = cli::parse_and_dispatch(argv, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fixed-time proximal dynamics for mixed variational inequalities";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("contraction_factor", &contraction_factor, py::arg("mu"), py::arg("L"), py::arg("lam"));
  m.def("lambda_upper_bound", &lambda_upper_bound, py::arg("mu"), py::arg("L"));
  m.def("epsilon_of_c", &epsilon_of_c, py::arg("c"));
  m.def("alpha1_window", [](double c) {
    const OpenInterval w = alpha1_window(c);
    return py::make_tuple(w.lower, w.upper);
  }, py::arg("c"));
  m.def("q_coef", &q_coef, py::arg("kappa"), py::arg("alpha"), py::arg("c"));
  m.def("a_coef", &a_coef, py::arg("kappa"), py::arg("alpha"), py::arg("c"));
  m.def("xi_params", &xi_params, py::arg("xi"));
  m.def("settling_time_bound_xi", &settling_time_bound_xi, py::arg("a"), py::arg("b"), py::arg("xi"));
  m.def("k_star", &k_star, py::arg("xi"), py::arg("eta"), py::arg("a"), py::arg("b"));
  m.def("bounds", &bounds, py::arg("mu"), py::arg("L"), py::arg("lam"), py::arg("kappa1"),
        py::arg("kappa2"), py::arg("alpha1"), py::arg("alpha2"), py::arg("eta") = 1e-4,
        "Certificate for a parameter set as a dict; absent values are None.");
  m.def("preset_certificate", [](const std::string& name, std::uint64_t seed) {
    const ExampleSetup s = preset(name, seed);
    return certificate_dict(certificate(s.problem, s.flow, s.disc));
  }, py::arg("preset"), py::arg("seed") = 0);

  m.def("prox_l1", [](const std::vector<double>& x, double tau) { return prox_l1(vec(x), tau).to_std(); },
        py::arg("x"), py::arg("tau"));
  m.def("project_ball", [](const std::vector<double>& x, const std::vector<double>& center, double r) {
    return project_ball(vec(x), vec(center), r).to_std();
  }, py::arg("x"), py::arg("center"), py::arg("radius"));
  m.def("project_box", [](const std::vector<double>& x, const std::vector<double>& lo,
                          const std::vector<double>& hi) {
    return project_box(vec(x), vec(lo), vec(hi)).to_std();
  }, py::arg("x"), py::arg("lower"), py::arg("upper"));

  m.def("example1_operator", [](const std::vector<double>& x) { return example1_operator(vec(x)).to_std(); },
        py::arg("x"));
  m.def("generate_dataset", [](std::uint64_t seed, std::size_t n, std::size_t d) {
    const Dataset data = generate_dataset(seed, n, d);
    std::vector<std::vector<double>> features;
    for (const Vector& f : data.features) features.push_back(f.to_std());
    return py::make_tuple(data.labels, features);
  }, py::arg("seed"), py::arg("n") = 100, py::arg("d") = 3);
  m.def("reference_solution", [](const std::string& name, std::uint64_t seed) {
    const ExampleSetup s = preset(name, seed);
    return reference_solution(s.problem, s.flow.lambda()).to_std();
  }, py::arg("preset"), py::arg("seed") = 0);

  m.def("solve", &solve_preset, py::arg("preset"), py::arg("x0"), py::arg("eta") = 1e-4,
        py::arg("max_steps") = 100000, py::arg("tol") = 0.0, py::arg("record_every") = 100,
        py::arg("seed") = 0, py::arg("xi") = py::none(), py::arg("nominal") = false,
        "Forward-Euler run of a preset problem; returns the logged trajectory.");
  m.def("run_cli", &run_cli, py::arg("args"),
        "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
  m.def("property_suite", [](std::uint64_t seed) {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const PropertyResult& r : run_property_suite(seed)) out.emplace_back(r.name, r.passed, r.detail);
    return out;
  }, py::arg("seed") = 0);
}
