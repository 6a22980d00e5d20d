#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "effham/experiment.hpp"

namespace py = pybind11;
using namespace effham;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Effective-Hamiltonian search toolkit";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::enum_<Axis>(m, "Axis")
      .value("I", Axis::I)
      .value("X", Axis::X)
      .value("Y", Axis::Y)
      .value("Z", Axis::Z);

  py::class_<PauliString>(m, "PauliString")
      .def(py::init<int>(), py::arg("n_sites"))
      .def_static("parse", &PauliString::parse, py::arg("text"))
      .def_static("single", &PauliString::single, py::arg("n_sites"), py::arg("site"),
                  py::arg("axis"))
      .def_property_readonly("n_sites", &PauliString::n_sites)
      .def("axis", &PauliString::axis, py::arg("site"))
      .def("set_axis", &PauliString::set_axis, py::arg("site"), py::arg("axis"))
      .def("weight", &PauliString::weight)
      .def("__str__", &PauliString::str)
      .def("__repr__", [](const PauliString& p) { return "PauliString('" + p.str() + "')"; })
      .def(py::self == py::self)
      .def(py::self < py::self);

  py::class_<HamiltonianTerm>(m, "HamiltonianTerm")
      .def(py::init([](double c, const PauliString& p) {
             return HamiltonianTerm{c, p};
           }),
           py::arg("coefficient"), py::arg("string"))
      .def_readonly("coefficient", &HamiltonianTerm::coefficient)
      .def_readonly("string", &HamiltonianTerm::string);

  py::class_<HamiltonianSum>(m, "HamiltonianSum")
      .def(py::init<int>(), py::arg("n_sites"))
      .def("add", &HamiltonianSum::add, py::arg("coefficient"), py::arg("string"))
      .def("canonicalized", &HamiltonianSum::canonicalized)
      .def_property_readonly("n_sites", &HamiltonianSum::n_sites)
      .def_property_readonly("dimension", &HamiltonianSum::dimension)
      .def("terms", &HamiltonianSum::terms)
      .def("empty", &HamiltonianSum::empty)
      .def("__len__", &HamiltonianSum::size)
      .def("one_norm", &HamiltonianSum::one_norm)
      .def("to_text", &HamiltonianSum::to_text)
      .def_static("from_text", &HamiltonianSum::from_text, py::arg("text"));

  m.def("subtract", &subtract, py::arg("a"), py::arg("b"));
  m.def("apply_pauli", &apply_pauli, py::arg("string"), py::arg("amplitudes"));
  m.def("apply_sum", &apply_sum, py::arg("hamiltonian"), py::arg("amplitudes"));
  m.def("dense_matrix", py::overload_cast<const PauliString&>(&dense_matrix), py::arg("string"));
  m.def("dense_matrix", py::overload_cast<const HamiltonianSum&, int>(&dense_matrix),
        py::arg("hamiltonian"), py::arg("site_limit") = kDenseSiteLimit);

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<int, Eigen::VectorXcd>(), py::arg("n_sites"), py::arg("amplitudes"))
      .def_static("basis_state", &StateVector::basis_state, py::arg("n_sites"), py::arg("index"))
      .def_static("from_bitstring", &StateVector::from_bitstring, py::arg("bits"))
      .def_static("normalized", &StateVector::normalized, py::arg("n_sites"), py::arg("raw"))
      .def_property_readonly("n_sites", &StateVector::n_sites)
      .def_property_readonly("dimension", &StateVector::dimension)
      .def_property_readonly("amplitudes",
                             [](const StateVector& s) { return s.amplitudes(); });

  m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));

  py::class_<EvolutionMethod> method(m, "EvolutionMethod");
  method.def_static("exact", &EvolutionMethod::exact)
      .def_static("trotter", &EvolutionMethod::trotter, py::arg("steps"))
      .def_readonly("trotter_steps", &EvolutionMethod::trotter_steps);

  py::class_<ExactPropagator>(m, "ExactPropagator")
      .def(py::init<const HamiltonianSum&, int>(), py::arg("hamiltonian"),
           py::arg("site_limit") = kDenseSiteLimit)
      .def("evolve", &ExactPropagator::evolve, py::arg("state"), py::arg("t"))
      .def_property_readonly("eigenvalues", &ExactPropagator::eigenvalues);

  m.def("exact_evolve", &exact_evolve, py::arg("hamiltonian"), py::arg("state"), py::arg("t"));
  m.def("apply_exp_pauli_term", &apply_exp_pauli_term, py::arg("term"), py::arg("tau"),
        py::arg("state"));
  m.def("trotter_evolve", &trotter_evolve, py::arg("hamiltonian"), py::arg("state"),
        py::arg("t"), py::arg("n"));

  py::class_<Trial>(m, "Trial")
      .def(py::init([](const StateVector& s, double t) {
             return Trial{s, t};
           }),
           py::arg("initial"), py::arg("time"))
      .def_readonly("initial", &Trial::initial)
      .def_readonly("time", &Trial::time);

  py::class_<TrialSet>(m, "TrialSet")
      .def(py::init<std::vector<Trial>>(), py::arg("trials"))
      .def("__len__", &TrialSet::size)
      .def_property_readonly("n_sites", &TrialSet::n_sites);

  m.def("trial_fidelity", &trial_fidelity, py::arg("h_test"), py::arg("trial"),
        py::arg("method"));
  m.def("trial_fidelities", &trial_fidelities, py::arg("h_test"), py::arg("trials"),
        py::arg("method"));
  m.def("overall_fidelity", &overall_fidelity, py::arg("h_test"), py::arg("trials"),
        py::arg("method"));
  m.def("average_fidelity", &average_fidelity, py::arg("h_test"), py::arg("trials"),
        py::arg("method"));
  m.def("composite_fidelity", &composite_fidelity, py::arg("h_test"), py::arg("trials"),
        py::arg("method"));

  py::class_<PhaseGrid>(m, "PhaseGrid")
      .def(py::init<int>(), py::arg("k"))
      .def_property_readonly("size", &PhaseGrid::size)
      .def_property_readonly("m_min", &PhaseGrid::m_min)
      .def_property_readonly("m_max", &PhaseGrid::m_max)
      .def_property_readonly("spacing", &PhaseGrid::spacing)
      .def("theta", &PhaseGrid::theta, py::arg("m"))
      .def("index_of", &PhaseGrid::index_of, py::arg("m"))
      .def("m_at", &PhaseGrid::m_at, py::arg("index"));

  py::class_<PhaseDistribution>(m, "PhaseDistribution")
      .def_readonly("grid", &PhaseDistribution::grid)
      .def_readonly("theta_x", &PhaseDistribution::theta_x)
      .def_readonly("on_grid", &PhaseDistribution::on_grid)
      .def_readonly("f", &PhaseDistribution::f);

  m.def("theta_of_fidelity", &theta_of_fidelity, py::arg("fidelity"));
  m.def("phase_distribution", &phase_distribution, py::arg("theta_x"), py::arg("k"));
  m.def("phase_distribution_direct", &phase_distribution_direct, py::arg("theta_x"),
        py::arg("k"));
  m.def("threshold_window_radius", &threshold_window_radius, py::arg("k"), py::arg("theta_th"));
  m.def("flip_coefficient", &flip_coefficient, py::arg("theta_x"), py::arg("k"),
        py::arg("theta_th"));
  m.def("flip_coefficient_direct", &flip_coefficient_direct, py::arg("theta_x"), py::arg("k"),
        py::arg("theta_th"));
  m.def("ideal_flip", &ideal_flip, py::arg("theta_x"), py::arg("theta_th"));

  py::class_<GroverState>(m, "GroverState")
      .def_static("uniform", &GroverState::uniform, py::arg("n_candidates"))
      .def_readonly("amplitudes", &GroverState::amplitudes)
      .def_readonly("leaked_probability", &GroverState::leaked_probability)
      .def("subspace_probability", &GroverState::subspace_probability)
      .def("probability", &GroverState::probability, py::arg("index"));

  m.def("grover_iterate", &grover_iterate, py::arg("state"), py::arg("flips"));
  m.def("optimal_iterations", &optimal_iterations, py::arg("n_candidates"), py::arg("n_marked"));

  py::class_<CandidateSet>(m, "CandidateSet")
      .def_static("from_hamiltonians",
                  py::overload_cast<std::vector<HamiltonianSum>>(
                      &CandidateSet::from_hamiltonians),
                  py::arg("hamiltonians"))
      .def_static("from_fidelities", &CandidateSet::from_fidelities, py::arg("fidelities"))
      .def_static("from_thetas", &CandidateSet::from_thetas, py::arg("thetas"))
      .def("__len__", &CandidateSet::size)
      .def("label", &CandidateSet::label, py::arg("index"))
      .def("hamiltonian", &CandidateSet::hamiltonian, py::arg("index"))
      .def("fidelity", &CandidateSet::fidelity, py::arg("index"))
      .def("theta", &CandidateSet::theta, py::arg("index"))
      .def("lambda_of", &CandidateSet::lambda_of, py::arg("index"))
      .def("kappa_of", &CandidateSet::kappa_of, py::arg("index"))
      .def("set_fidelities", &CandidateSet::set_fidelities, py::arg("fidelities"));

  m.def("cache_fidelities", &cache_fidelities, py::arg("candidates"), py::arg("h_full"),
        py::arg("trials"), py::arg("method"), py::arg("threads") = 1);

  py::enum_<SearchMode>(m, "SearchMode")
      .value("Ideal", SearchMode::Ideal)
      .value("Leaky", SearchMode::Leaky);

  py::class_<SearchIteration>(m, "SearchIteration")
      .def_readonly("iteration", &SearchIteration::iteration)
      .def_readonly("marked_probability", &SearchIteration::marked_probability)
      .def_readonly("leaked_probability", &SearchIteration::leaked_probability);

  py::class_<SearchReport>(m, "SearchReport")
      .def_readonly("iterations", &SearchReport::iterations)
      .def_readonly("final_probabilities", &SearchReport::final_probabilities)
      .def_readonly("marked", &SearchReport::marked)
      .def_readonly("within_radius", &SearchReport::within_radius)
      .def_readonly("no_marked", &SearchReport::no_marked)
      .def_readonly("best_index", &SearchReport::best_index)
      .def_readonly("iterations_used", &SearchReport::iterations_used)
      .def_readonly("theta_threshold", &SearchReport::theta_threshold)
      .def_readonly("k", &SearchReport::k);

  m.def("run_search", &run_search, py::arg("candidates"), py::arg("theta_th"), py::arg("k"),
        py::arg("iterations"), py::arg("mode"));
  m.def("error_bound", &error_bound, py::arg("candidates"), py::arg("theta_th"), py::arg("k"),
        py::arg("iterations"));

  py::class_<TFIMParams>(m, "TFIMParams")
      .def(py::init([](int n, double delta, double j) {
             return TFIMParams{n, delta, j};
           }),
           py::arg("n_sites"), py::arg("delta"), py::arg("j"))
      .def_readonly("n_sites", &TFIMParams::n_sites)
      .def_readonly("delta", &TFIMParams::delta)
      .def_readonly("j", &TFIMParams::j);

  py::class_<EffectiveParams>(m, "EffectiveParams")
      .def(py::init([](double lambda, double kappa) {
             return EffectiveParams{lambda, kappa};
           }),
           py::arg("lambda_"), py::arg("kappa"))
      .def_readonly("lambda_", &EffectiveParams::lambda)
      .def_readonly("kappa", &EffectiveParams::kappa);

  m.def("is_perturbative_regime", &is_perturbative_regime, py::arg("params"));
  m.def("build_tfim", &build_tfim, py::arg("params"));
  m.def("build_sw_effective", &build_sw_effective, py::arg("params"), py::arg("n_sites"));
  m.def("exact_sw_coefficients", &exact_sw_coefficients, py::arg("delta"), py::arg("j"));
  m.def("initial_states", &initial_states, py::arg("n_sites"));

  py::class_<GridAxis>(m, "GridAxis")
      .def(py::init([](double lo, double hi, int steps) {
             return GridAxis{lo, hi, steps};
           }),
           py::arg("lo"), py::arg("hi"), py::arg("steps"))
      .def_readonly("lo", &GridAxis::lo)
      .def_readonly("hi", &GridAxis::hi)
      .def_readonly("steps", &GridAxis::steps);

  m.def("grid_points", &grid_points, py::arg("axis"));
  m.def("candidate_grid", &candidate_grid, py::arg("lambda_axis"), py::arg("kappa_axis"),
        py::arg("n_sites"));

  py::class_<AnsatzGate>(m, "AnsatzGate")
      .def_readonly("generator", &AnsatzGate::generator)
      .def_readonly("parameter_index", &AnsatzGate::parameter_index);

  py::class_<AnsatzCircuit>(m, "AnsatzCircuit")
      .def_static("trotter_layers", &AnsatzCircuit::trotter_layers, py::arg("template_sum"),
                  py::arg("layers"))
      .def_property_readonly("n_sites", &AnsatzCircuit::n_sites)
      .def_property_readonly("n_parameters", &AnsatzCircuit::n_parameters)
      .def_property_readonly("layout", &AnsatzCircuit::layout)
      .def("gates", &AnsatzCircuit::gates);

  m.def("prepare_state", &prepare_state, py::arg("ansatz"), py::arg("theta"),
        py::arg("initial"));
  m.def("derivative_state", &derivative_state, py::arg("ansatz"), py::arg("theta"),
        py::arg("k"), py::arg("initial"));
  m.def("build_A", &build_A, py::arg("ansatz"), py::arg("theta"), py::arg("initial"));
  m.def("build_C", &build_C, py::arg("ansatz"), py::arg("theta"), py::arg("h_test"),
        py::arg("initial"));
  m.def("vqs_step", &vqs_step, py::arg("theta"), py::arg("a_matrix"), py::arg("c_vector"),
        py::arg("dt"), py::arg("lambda_reg") = kDefaultRegularization);

  py::class_<VariationalOptions>(m, "VariationalOptions")
      .def(py::init<>())
      .def_readwrite("t_final", &VariationalOptions::t_final)
      .def_readwrite("dt", &VariationalOptions::dt)
      .def_readwrite("lambda_reg", &VariationalOptions::lambda_reg)
      .def_readwrite("store_parameters", &VariationalOptions::store_parameters);

  py::class_<VariationalTrajectory>(m, "VariationalTrajectory")
      .def_readonly("times", &VariationalTrajectory::times)
      .def_readonly("f_ave", &VariationalTrajectory::f_ave)
      .def_readonly("per_trial", &VariationalTrajectory::per_trial)
      .def_readonly("parameters", &VariationalTrajectory::parameters)
      .def_readonly("dt", &VariationalTrajectory::dt);

  m.def("evolve_trajectory", &evolve_trajectory, py::arg("ansatz"), py::arg("theta0"),
        py::arg("h_test"), py::arg("trials"), py::arg("options"));

  py::enum_<ScanMethod>(m, "ScanMethod")
      .value("Exact", ScanMethod::Exact)
      .value("Trotter", ScanMethod::Trotter)
      .value("Variational", ScanMethod::Variational);

  py::class_<ScanOptions>(m, "ScanOptions")
      .def(py::init<>())
      .def_readwrite("trotter_steps", &ScanOptions::trotter_steps)
      .def_readwrite("tau", &ScanOptions::tau)
      .def_readwrite("dt", &ScanOptions::dt)
      .def_readwrite("layers", &ScanOptions::layers)
      .def_readwrite("lambda_reg", &ScanOptions::lambda_reg)
      .def_readwrite("threads", &ScanOptions::threads);

  py::class_<ScanPoint>(m, "ScanPoint")
      .def_readonly("lambda_", &ScanPoint::lambda)
      .def_readonly("kappa", &ScanPoint::kappa)
      .def_readonly("f_ave", &ScanPoint::f_ave);

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("lambdas", &ScanResult::lambdas)
      .def_readonly("kappas", &ScanResult::kappas)
      .def_readonly("points", &ScanResult::points)
      .def_readonly("best_index", &ScanResult::best_index);

  m.def("landscape_scan", &landscape_scan, py::arg("lambdas"), py::arg("kappas"),
        py::arg("model"), py::arg("trial_states"), py::arg("t"), py::arg("method"),
        py::arg("options") = ScanOptions{});

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_static(
          "from_file",
          [](const std::filesystem::path& p) { return ExperimentConfig::from_file(p); },
          py::arg("path"))
      .def_static(
          "from_json_text",
          [](const std::string& text) {
            return ExperimentConfig::from_json(nlohmann::ordered_json::parse(text));
          },
          py::arg("text"))
      .def_readonly("output_dir", &ExperimentConfig::output_dir);

  m.def(
      "run_scan",
      [](const ExperimentConfig& c, const std::filesystem::path& out, int threads) {
        return run_scan(c, out, threads);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("threads") = 1);
  m.def("run_grover", &run_grover, py::arg("config"), py::arg("out_dir"),
        py::arg("threads") = 1);
  m.def("run_variational", &run_variational, py::arg("config"), py::arg("out_dir"));
  m.def(
      "run_oracle",
      [](const ExperimentConfig& c, const std::filesystem::path& out, int threads) {
        return run_oracle(c, out, threads).dump();
      },
      py::arg("config"), py::arg("out_dir"), py::arg("threads") = 1);

  py::class_<ScanRunSummary>(m, "ScanRunSummary")
      .def_readonly("result", &ScanRunSummary::result)
      .def_readonly("method", &ScanRunSummary::method);

  py::class_<GroverRunSummary>(m, "GroverRunSummary")
      .def_readonly("report", &GroverRunSummary::report)
      .def_readonly("theta_threshold", &GroverRunSummary::theta_threshold)
      .def_readonly("n_candidates", &GroverRunSummary::n_candidates)
      .def_readonly("n_marked", &GroverRunSummary::n_marked)
      .def_readonly("best_label", &GroverRunSummary::best_label)
      .def_readonly("best_lambda", &GroverRunSummary::best_lambda)
      .def_readonly("best_kappa", &GroverRunSummary::best_kappa)
      .def_readonly("best_fidelity", &GroverRunSummary::best_fidelity)
      .def_readonly("best_probability", &GroverRunSummary::best_probability)
      .def_readonly("error_bound", &GroverRunSummary::bound);

  py::class_<VariationalRunSummary>(m, "VariationalRunSummary")
      .def_readonly("trajectory", &VariationalRunSummary::trajectory)
      .def_readonly("trotter_f_ave", &VariationalRunSummary::trotter_f_ave)
      .def_readonly("max_deviation", &VariationalRunSummary::max_deviation);
}
