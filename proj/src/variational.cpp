#include "effham/variational.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "effham/errors.hpp"
#include "effham/numfmt.hpp"
#include "effham/parallel.hpp"

namespace effham {

AnsatzCircuit::AnsatzCircuit(int n_sites, std::vector<AnsatzGate> gates, int n_parameters,
                             std::string layout)
    : n_sites_(n_sites),
      n_parameters_(n_parameters),
      gates_(std::move(gates)),
      layout_(std::move(layout)) {
  if (gates_.empty()) throw std::invalid_argument("ansatz needs at least one gate");
  if (n_parameters_ < 1) throw std::invalid_argument("ansatz needs at least one parameter");
  std::vector<bool> used(static_cast<std::size_t>(n_parameters_), false);
  for (const auto& g : gates_) {
    if (g.generator.n_sites() != n_sites_)
      throw std::invalid_argument("gate generator register does not match ansatz");
    if (g.parameter_index < 0 || g.parameter_index >= n_parameters_)
      throw std::invalid_argument("gate parameter index out of range");
    used[static_cast<std::size_t>(g.parameter_index)] = true;
  }
  for (std::size_t k = 0; k < used.size(); ++k)
    if (!used[k])
      throw std::invalid_argument("parameter " + std::to_string(k) + " drives no gate");
}

AnsatzCircuit AnsatzCircuit::trotter_layers(const HamiltonianSum& template_sum, int layers) {
  if (layers < 1) throw std::invalid_argument("layer count must be >= 1");
  HamiltonianSum canon = template_sum.canonicalized();
  if (canon.empty())
    throw std::invalid_argument("ansatz template must contain at least one term");
  int n_terms = static_cast<int>(canon.size());
  std::vector<AnsatzGate> gates;
  gates.reserve(static_cast<std::size_t>(layers * n_terms));
  for (int layer = 0; layer < layers; ++layer)
    for (int j = 0; j < n_terms; ++j)
      gates.push_back({canon.terms()[static_cast<std::size_t>(j)].string,
                       layer * n_terms + j});
  return AnsatzCircuit(template_sum.n_sites(), std::move(gates), layers * n_terms,
                       "trotter-layers:" + std::to_string(layers) + "x" +
                           std::to_string(n_terms));
}

namespace {

void check_theta(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta) {
  if (theta.size() != ansatz.n_parameters())
    throw std::invalid_argument("parameter vector length does not match ansatz");
}

// x <- cos(angle) x - i sin(angle) G x.
void gate_in_place(const PauliString& generator, double angle, Eigen::VectorXcd& x) {
  const std::complex<double> mi{0.0, -1.0};
  Eigen::VectorXcd gx = apply_pauli(generator, x);
  x = std::cos(angle) * x + (mi * std::sin(angle)) * gx;
}

struct CircuitPass {
  Eigen::VectorXcd psi;           // |Psi(theta)>
  Eigen::MatrixXcd derivatives;   // column k = d|Psi>/d theta_k
};

// Prefix-state sweep: one forward pass for |Psi>, then each gate's -iG
// insertion is pushed through the remaining gates. O(m^2) gate applications
// for m gates.
CircuitPass circuit_pass(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                         const StateVector& initial) {
  check_theta(ansatz, theta);
  if (initial.n_sites() != ansatz.n_sites())
    throw std::invalid_argument("initial state register does not match ansatz");
  const auto& gates = ansatz.gates();
  const auto m = static_cast<int>(gates.size());
  const auto dim = initial.dimension();
  const std::complex<double> mi{0.0, -1.0};

  std::vector<Eigen::VectorXcd> prefix;
  prefix.reserve(static_cast<std::size_t>(m) + 1);
  prefix.push_back(initial.amplitudes());
  for (int g = 0; g < m; ++g) {
    Eigen::VectorXcd next = prefix.back();
    gate_in_place(gates[static_cast<std::size_t>(g)].generator,
                  theta[gates[static_cast<std::size_t>(g)].parameter_index], next);
    prefix.push_back(std::move(next));
  }

  CircuitPass pass;
  pass.psi = prefix.back();
  pass.derivatives = Eigen::MatrixXcd::Zero(dim, ansatz.n_parameters());
  for (int g = 0; g < m; ++g) {
    const auto& gate = gates[static_cast<std::size_t>(g)];
    Eigen::VectorXcd v =
        mi * apply_pauli(gate.generator, prefix[static_cast<std::size_t>(g) + 1]);
    for (int h = g + 1; h < m; ++h)
      gate_in_place(gates[static_cast<std::size_t>(h)].generator,
                    theta[gates[static_cast<std::size_t>(h)].parameter_index], v);
    pass.derivatives.col(gate.parameter_index) += v;
  }
  return pass;
}

}  // namespace

StateVector prepare_state(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                          const StateVector& initial) {
  check_theta(ansatz, theta);
  if (initial.n_sites() != ansatz.n_sites())
    throw std::invalid_argument("initial state register does not match ansatz");
  Eigen::VectorXcd x = initial.amplitudes();
  for (const auto& gate : ansatz.gates())
    gate_in_place(gate.generator, theta[gate.parameter_index], x);
  return StateVector(initial.n_sites(), std::move(x));
}

Eigen::VectorXcd derivative_state(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                                  int k, const StateVector& initial) {
  if (k < 0 || k >= ansatz.n_parameters())
    throw std::invalid_argument("parameter index out of range");
  return circuit_pass(ansatz, theta, initial).derivatives.col(k);
}

Eigen::MatrixXcd build_A(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                         const StateVector& initial) {
  CircuitPass pass = circuit_pass(ansatz, theta, initial);
  return pass.derivatives.adjoint() * pass.derivatives;
}

Eigen::VectorXcd build_C(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                         const HamiltonianSum& h_test, const StateVector& initial) {
  if (h_test.n_sites() != ansatz.n_sites())
    throw std::invalid_argument("Hamiltonian register does not match ansatz");
  CircuitPass pass = circuit_pass(ansatz, theta, initial);
  return pass.derivatives.adjoint() * apply_sum(h_test, pass.psi);
}

namespace {

Eigen::VectorXd solve_update(const Eigen::MatrixXcd& a_matrix, const Eigen::VectorXcd& c_vector,
                             double lambda_reg) {
  if (a_matrix.rows() != a_matrix.cols() || a_matrix.rows() != c_vector.size())
    throw std::invalid_argument("equation-of-motion dimensions are inconsistent");
  if (lambda_reg < 0.0) throw std::invalid_argument("regularization must be >= 0");
  if (!a_matrix.allFinite() || !c_vector.allFinite())
    throw NumericError("equation of motion contains non-finite entries");
  Eigen::MatrixXd m = a_matrix.real();
  m.diagonal().array() += lambda_reg;
  Eigen::VectorXd rhs = c_vector.imag();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  bool ok = ldlt.info() == Eigen::Success;
  Eigen::VectorXd update;
  if (ok) {
    update = ldlt.solve(rhs);
    ok = update.allFinite() && (m * update - rhs).norm() <= 1e-6 * std::max(1.0, rhs.norm());
  }
  if (!ok) {
    double d_max = ldlt.vectorD().cwiseAbs().maxCoeff();
    double d_min = ldlt.vectorD().cwiseAbs().minCoeff();
    throw NumericError("equation-of-motion solve failed beyond regularization " +
                       format_double(lambda_reg) + " (pivot ratio " +
                       format_double(d_min > 0.0 ? d_max / d_min : 0.0) + ")");
  }
  return update;
}

}  // namespace

Eigen::VectorXd vqs_step(const Eigen::VectorXd& theta, const Eigen::MatrixXcd& a_matrix,
                         const Eigen::VectorXcd& c_vector, double dt, double lambda_reg) {
  if (theta.size() != a_matrix.rows())
    throw std::invalid_argument("parameter vector does not match equation of motion");
  return theta + dt * solve_update(a_matrix, c_vector, lambda_reg);
}

VariationalTrajectory evolve_trajectory(const AnsatzCircuit& ansatz,
                                        const Eigen::VectorXd& theta0,
                                        const HamiltonianSum& h_test, const TrialSet& trials,
                                        const VariationalOptions& options) {
  check_theta(ansatz, theta0);
  if (h_test.n_sites() != ansatz.n_sites())
    throw std::invalid_argument("Hamiltonian register does not match ansatz");
  if (trials.n_sites() != ansatz.n_sites())
    throw std::invalid_argument("trial register does not match ansatz");
  if (!(options.dt > 0.0)) throw std::invalid_argument("time step must be > 0");
  if (options.t_final < 0.0) throw std::invalid_argument("final time must be >= 0");

  const auto steps = static_cast<int>(std::llround(options.t_final / options.dt));
  const auto n_trials = static_cast<int>(trials.size());
  HamiltonianSum h_canon = h_test.canonicalized();

  VariationalTrajectory out;
  out.dt = options.dt;
  out.times.resize(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k)
    out.times[static_cast<std::size_t>(k)] = k * options.dt;
  out.per_trial.resize(steps + 1, n_trials);
  if (options.store_parameters)
    out.parameters.assign(static_cast<std::size_t>(n_trials),
                          Eigen::MatrixXd(steps + 1, ansatz.n_parameters()));

  // The equation-of-motion velocity at a given parameter point. Forward
  // Euler at practical step sizes is unstable for stiff test Hamiltonians,
  // so the trajectory advances this field with one classical RK4 update per
  // step; the step size itself stays fixed at options.dt.
  auto velocity = [&](const Eigen::VectorXd& theta, const StateVector& initial) {
    CircuitPass pass = circuit_pass(ansatz, theta, initial);
    Eigen::MatrixXcd a_matrix = pass.derivatives.adjoint() * pass.derivatives;
    Eigen::VectorXcd c_vector = pass.derivatives.adjoint() * apply_sum(h_canon, pass.psi);
    return solve_update(a_matrix, c_vector, options.lambda_reg);
  };

  const double dt = options.dt;
  for (int trial_index = 0; trial_index < n_trials; ++trial_index) {
    const Trial& trial = trials.trials()[static_cast<std::size_t>(trial_index)];
    Eigen::VectorXd theta = theta0;
    for (int k = 0; k <= steps; ++k) {
      CircuitPass pass = circuit_pass(ansatz, theta, trial.initial);
      std::complex<double> f = trial.initial.amplitudes().dot(pass.psi);
      out.per_trial(k, trial_index) = std::norm(f);
      if (options.store_parameters)
        out.parameters[static_cast<std::size_t>(trial_index)].row(k) = theta.transpose();
      if (k == steps) break;
      Eigen::MatrixXcd a_matrix = pass.derivatives.adjoint() * pass.derivatives;
      Eigen::VectorXcd c_vector = pass.derivatives.adjoint() * apply_sum(h_canon, pass.psi);
      Eigen::VectorXd v1 = solve_update(a_matrix, c_vector, options.lambda_reg);
      Eigen::VectorXd v2 = velocity(theta + 0.5 * dt * v1, trial.initial);
      Eigen::VectorXd v3 = velocity(theta + 0.5 * dt * v2, trial.initial);
      Eigen::VectorXd v4 = velocity(theta + dt * v3, trial.initial);
      theta += (dt / 6.0) * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
    }
  }

  out.f_ave.resize(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k)
    out.f_ave[static_cast<std::size_t>(k)] = out.per_trial.row(k).mean();
  return out;
}

ScanResult landscape_scan(const std::vector<double>& lambdas, const std::vector<double>& kappas,
                          const TFIMParams& model, const std::vector<StateVector>& trial_states,
                          double t, ScanMethod method, const ScanOptions& options) {
  validate(model);
  if (lambdas.empty() || kappas.empty())
    throw std::invalid_argument("scan needs at least one grid point on each axis");
  if (trial_states.empty()) throw std::invalid_argument("scan needs at least one trial state");
  if (t < 0.0) throw std::invalid_argument("evolution time must be >= 0");

  std::vector<Trial> trial_list;
  trial_list.reserve(trial_states.size());
  for (const auto& s : trial_states) trial_list.push_back({s, t});
  TrialSet trials(std::move(trial_list));

  int trotter_steps = options.trotter_steps;
  if (method == ScanMethod::Trotter && trotter_steps <= 0) {
    if (!(options.tau > 0.0)) throw std::invalid_argument("trotter slice must be > 0");
    trotter_steps = std::max(1, static_cast<int>(std::llround(t / options.tau)));
  }

  HamiltonianSum h_full = build_tfim(model);
  ScanResult result;
  result.lambdas = lambdas;
  result.kappas = kappas;
  result.points.resize(lambdas.size() * kappas.size());

  detail::parallel_for(
      static_cast<int>(result.points.size()), options.threads, [&](int index) {
        auto u = static_cast<std::size_t>(index);
        double lambda = lambdas[u % lambdas.size()];
        double kappa = kappas[u / lambdas.size()];
        HamiltonianSum h_test =
            subtract(h_full, build_sw_effective({lambda, kappa}, model.n_sites));
        double f_ave = 0.0;
        switch (method) {
          case ScanMethod::Exact:
            f_ave = average_fidelity(h_test, trials, EvolutionMethod::exact());
            break;
          case ScanMethod::Trotter:
            f_ave = average_fidelity(h_test, trials, EvolutionMethod::trotter(trotter_steps));
            break;
          case ScanMethod::Variational: {
            AnsatzCircuit ansatz = AnsatzCircuit::trotter_layers(h_test, options.layers);
            VariationalOptions vo;
            vo.t_final = t;
            vo.dt = options.dt;
            vo.lambda_reg = options.lambda_reg;
            VariationalTrajectory trajectory =
                evolve_trajectory(ansatz, Eigen::VectorXd::Zero(ansatz.n_parameters()),
                                  h_test, trials, vo);
            f_ave = trajectory.f_ave.back();
            break;
          }
        }
        result.points[u] = {lambda, kappa, f_ave};
      });

  result.best_index = 0;
  for (std::size_t i = 1; i < result.points.size(); ++i)
    if (result.points[i].f_ave > result.points[static_cast<std::size_t>(result.best_index)].f_ave)
      result.best_index = static_cast<int>(i);
  return result;
}

}  // namespace effham
