#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hallmhd/commands.hpp"
#include "hallmhd/experiments.hpp"
#include "hallmhd/littlewood_paley.hpp"
#include "hallmhd/mild_solver.hpp"
#include "hallmhd/nonlinearity.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random_fields.hpp"

namespace py = pybind11;
using namespace hallmhd;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

// (components, band, band, band), k1 slowest
ComplexArray coefficients_of(const SpectralField& f) {
  const auto b = static_cast<py::ssize_t>(f.grid().band());
  ComplexArray out({static_cast<py::ssize_t>(f.components()), b, b, b});
  auto src = f.coefficients();
  std::copy(src.begin(), src.end(), out.mutable_data());
  return out;
}

SpectralField field_from(const Grid3& g, ComplexArray a) {
  const auto b = static_cast<py::ssize_t>(g.band());
  if (a.ndim() != 4 || (a.shape(0) != 1 && a.shape(0) != 3) || a.shape(1) != b || a.shape(2) != b || a.shape(3) != b)
    throw std::invalid_argument("coefficients must have shape (1 or 3, band, band, band)");
  SpectralField f(g, a.shape(0) == 1 ? Rank::scalar : Rank::vector3);
  std::copy(a.data(), a.data() + a.size(), f.coefficients().begin());
  f.symmetrize();
  return f;
}

py::dict as_dict(const ExperimentResult& r) {
  py::dict d;
  d["name"] = r.name;
  d["parameters"] = r.parameters;
  d["target"] = r.target;
  d["measured"] = r.measured;
  d["tolerance"] = r.tolerance;
  d["passed"] = r.pass;
  d["note"] = r.note;
  py::dict details;
  for (const auto& [k, v] : r.details) details[py::str(k)] = v;
  d["details"] = details;
  d["series_header"] = r.series_header;
  d["series"] = r.series;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hallmhd, m) {
  m.doc() = "Spectral mild-solution solver for the Hall-MHD system";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Grid3>(m, "Grid")
      .def(py::init([](int n, double box, double dealias) {
             Grid3 g{n, box, dealias};
             g.validate();
             return g;
           }),
           py::arg("n") = 32, py::arg("box_length") = 2.0 * std::numbers::pi, py::arg("dealias_fraction") = 2.0 / 3.0)
      .def_readonly("n", &Grid3::n)
      .def_readonly("box_length", &Grid3::box_length)
      .def_readonly("dealias_fraction", &Grid3::dealias_fraction)
      .def_property_readonly("kmax", &Grid3::kmax)
      .def_property_readonly("band", &Grid3::band)
      .def("__repr__", [](const Grid3& g) {
        std::ostringstream os;
        os << "Grid(n=" << g.n << ", box_length=" << g.box_length << ")";
        return os.str();
      });

  py::class_<SpectralField>(m, "Field")
      .def_property_readonly("grid", &SpectralField::grid)
      .def_property_readonly("components", &SpectralField::components)
      .def("coefficients", &coefficients_of)
      .def_static("from_coefficients", &field_from, py::arg("grid"), py::arg("coefficients"))
      .def("l2_norm", [](const SpectralField& f) { return l2_norm(f); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(double() * py::self)
      .def("__mul__", [](const SpectralField& f, double a) { return a * f; });

  py::class_<StateTriple>(m, "State")
      .def(py::init([](const SpectralField& u, const SpectralField& B, const SpectralField& J) {
             return StateTriple{u, B, J};
           }),
           py::arg("u"), py::arg("B"), py::arg("J"))
      .def_readwrite("u", &StateTriple::u)
      .def_readwrite("B", &StateTriple::B)
      .def_readwrite("J", &StateTriple::J)
      .def("l2_norm", [](const StateTriple& s) { return l2_norm(s); });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def("__len__", &Trajectory::size)
      .def("sup_norm", [](const Trajectory& t) { return sup_norm(t); });
  m.def("sup_relative_difference", &sup_relative_difference);

  m.def("random_solenoidal", &random_solenoidal, py::arg("grid"), py::arg("kcut"), py::arg("rms"), py::arg("seed"));
  m.def("random_coupled_state", &random_coupled_state, py::arg("grid"), py::arg("kcut"), py::arg("rms"),
        py::arg("seed"));
  m.def("sample_coupled_data", &sample_coupled_data, py::arg("grid"), py::arg("amplitude"));
  m.def("leray_project", &leray_project);
  m.def("curl", &curl);
  m.def("divergence_ratio", &divergence_ratio);
  m.def("heat", [](const SpectralField& f, double t) { return apply_multiplier(Multiplier::heat(t), f); });

  m.def(
      "verify_vector_identities",
      [](const SpectralField& U, const SpectralField& V) {
        py::dict d;
        for (const auto& r : verify_vector_identities(U, V)) d[py::str(r.name)] = r.residual;
        return d;
      },
      py::arg("U"), py::arg("V"));
  m.def("omega", [](const StateTriple& K, const StateTriple& L, double jgradj) {
    NonlinearOptions o;
    o.jgradj_coefficient = jgradj;
    return omega(K, L, o);
  }, py::arg("K"), py::arg("L"), py::arg("jgradj_coefficient") = -1.0);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](double T, int steps, int max_iter, double tol, const std::string& quadrature, int etd_order,
                       int etd_substeps, double jgradj) {
             SolverConfig c;
             c.T = T;
             c.steps = steps;
             c.max_iter = max_iter;
             c.tol = tol;
             c.quadrature = parse_quadrature(quadrature);
             c.etd_order = etd_order;
             c.etd_substeps = etd_substeps;
             c.nonlinear.jgradj_coefficient = jgradj;
             return c;
           }),
           py::arg("T") = 1.0, py::arg("steps") = 32, py::arg("max_iter") = 60, py::arg("tol") = 1e-10,
           py::arg("quadrature") = "trapezoid", py::arg("etd_order") = 2, py::arg("etd_substeps") = 1,
           py::arg("jgradj_coefficient") = -1.0)
      .def_readwrite("T", &SolverConfig::T)
      .def_readwrite("steps", &SolverConfig::steps)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("tol", &SolverConfig::tol);

  py::class_<IterationTrace>(m, "IterationTrace")
      .def_readonly("residuals", &IterationTrace::residuals)
      .def_readonly("contraction_estimates", &IterationTrace::contraction_estimates)
      .def_readonly("norms", &IterationTrace::norms)
      .def_readonly("converged", &IterationTrace::converged)
      .def_readonly("outcome", &IterationTrace::outcome)
      .def_readonly("eta_hat", &IterationTrace::eta_hat)
      .def_readonly("lambda_hat", &IterationTrace::lambda_hat)
      .def_readonly("data_norm", &IterationTrace::data_norm)
      .def_readonly("final_T", &IterationTrace::final_T)
      .def("to_csv", [](const IterationTrace& t) {
        std::ostringstream os;
        write_trace_csv(os, t);
        return os.str();
      });

  auto solve = [](SolveResult r) { return py::make_tuple(r.trajectory, r.trace); };
  m.def("picard_solve", [solve](const StateTriple& U0, const SolverConfig& c) { return solve(picard_solve(U0, c)); },
        py::arg("U0"), py::arg("config"));
  m.def(
      "coupled_picard_solve",
      [solve](const SpectralField& u0, const SpectralField& B0, const SolverConfig& c) {
        return solve(coupled_picard_solve(u0, B0, c));
      },
      py::arg("u0"), py::arg("B0"), py::arg("config"));
  m.def(
      "perturbative_solve",
      [solve](const StateTriple& U0, const SolverConfig& c, int b) { return solve(perturbative_solve(U0, c, b)); },
      py::arg("U0"), py::arg("config"), py::arg("max_bisections") = 10);
  m.def("etd_timestep_oracle", [](const StateTriple& U0, const SolverConfig& c) { return etd_timestep_oracle(U0, c); },
        py::arg("U0"), py::arg("config"));
  m.def("duhamel_residual", [](const StateTriple& U0, const Trajectory& U) { return duhamel_residual(U0, U); });

  m.def(
      "abstract_fixed_point",
      [](const std::string& mode, double eta, double y, double lambda_, double gamma, double x0, double y0, double T) {
        AbstractParameters p;
        p.eta = eta;
        p.y = y;
        p.lambda = lambda_;
        p.gamma = gamma;
        p.x0 = x0;
        p.y0 = y0;
        p.T = T;
        const AbstractResult r = abstract_fixed_point(parse_fixed_point_mode(mode), p);
        py::dict d;
        d["solution"] = r.solution;
        d["converged"] = r.trace.converged;
        d["iterations"] = r.trace.iterations();
        d["hypothesis_holds"] = r.hypothesis_holds;
        d["ball_radius"] = r.ball_radius;
        d["in_ball"] = r.in_ball;
        return d;
      },
      py::arg("mode"), py::arg("eta") = 1.0, py::arg("y") = 0.1, py::arg("lambda_") = 0.5, py::arg("gamma") = 1.0,
      py::arg("x0") = 0.0, py::arg("y0") = 0.0, py::arg("T") = 1.0);

  m.def(
      "norm",
      [](const SpectralField& f, const std::string& family, double s, double p, double r) {
        NormSpec spec{parse_norm_family(family), s, p, r, kInf};
        return compute_norm(spec, build_partition(f.grid()), f).value;
      },
      py::arg("field"), py::arg("family") = "besov", py::arg("s") = 0.0, py::arg("p") = 2.0, py::arg("r") = 2.0);
  m.def("lp_hat_norm", &lp_hat_norm, py::arg("field"), py::arg("p"));

  m.def(
      "decay_experiment",
      [](double p, const std::string& profile, double beta, int samples) {
        if (profile != "critical" && profile != "custom") throw std::invalid_argument("profile: critical or custom");
        return as_dict(decay_experiment(p, profile == "critical" ? DecayProfile::critical : DecayProfile::custom, beta,
                                        samples));
      },
      py::arg("p"), py::arg("profile") = "critical", py::arg("beta") = 2.0, py::arg("samples") = 21);
  m.def("kernel_beta_check", [](double p) { return as_dict(kernel_beta_check(p)); }, py::arg("p"));
  m.def(
      "scaling_experiment",
      [](const StateTriple& U0, int lambda, const SolverConfig& c, bool linear) {
        return as_dict(scaling_experiment(U0, lambda, c, linear));
      },
      py::arg("U0"), py::arg("lambda_"), py::arg("config"), py::arg("linear") = false);
  m.def(
      "smallness_experiment",
      [](const StateTriple& shape, const std::vector<double>& amps, const SolverConfig& c,
         const std::vector<double>& times) { return as_dict(smallness_experiment(shape, amps, c, times)); },
      py::arg("shape"), py::arg("amplitudes"), py::arg("config"), py::arg("final_times"));

  m.def(
      "run",
      [](const std::string& command, const std::string& config_text, const std::vector<std::string>& overrides) {
        RunConfig c = parse_config(config_text, "<string>");
        for (const auto& o : overrides) apply_override(c, o);
        c.command = command;
        std::ostringstream log;
        const int code = run_command(c, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("command"), py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{},
      "Runs a CLI command from config text; returns (exit_code, log).");
}
