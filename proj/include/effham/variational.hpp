#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "effham/fidelity.hpp"
#include "effham/tfim.hpp"

namespace effham {

// One rotation exp(-i theta_k G) with a unit-norm Pauli generator G.
struct AnsatzGate {
  PauliString generator;
  int parameter_index = 0;
};

class AnsatzCircuit {
 public:
  AnsatzCircuit(int n_sites, std::vector<AnsatzGate> gates, int n_parameters,
                std::string layout);

  // `layers` copies of one rotation per canonical term of the template sum,
  // each gate owning its own parameter.
  static AnsatzCircuit trotter_layers(const HamiltonianSum& template_sum, int layers);

  int n_sites() const { return n_sites_; }
  int n_parameters() const { return n_parameters_; }
  const std::vector<AnsatzGate>& gates() const { return gates_; }
  const std::string& layout() const { return layout_; }

 private:
  int n_sites_;
  int n_parameters_;
  std::vector<AnsatzGate> gates_;
  std::string layout_;
};

// |Psi(theta)> with gates applied in circuit order.
StateVector prepare_state(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                          const StateVector& initial);

// d|Psi>/d theta_k: a -iG insertion after each gate holding parameter k.
// Unnormalized by construction.
Eigen::VectorXcd derivative_state(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                                  int k, const StateVector& initial);

// A_ij = <d_i Psi | d_j Psi>; Hermitian positive semidefinite.
Eigen::MatrixXcd build_A(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                         const StateVector& initial);

// C_i = <d_i Psi | H | Psi>.
Eigen::VectorXcd build_C(const AnsatzCircuit& ansatz, const Eigen::VectorXd& theta,
                         const HamiltonianSum& h_test, const StateVector& initial);

inline constexpr double kDefaultRegularization = 1e-8;

// Euler update theta + dt * thetadot where
// (Re A + lambda_reg) thetadot = Im C. Throws NumericError when the
// regularized system still fails to solve.
Eigen::VectorXd vqs_step(const Eigen::VectorXd& theta, const Eigen::MatrixXcd& a_matrix,
                         const Eigen::VectorXcd& c_vector, double dt,
                         double lambda_reg = kDefaultRegularization);

struct VariationalOptions {
  double t_final = 0.0;
  double dt = 2.0 * std::numbers::pi / 1000.0;
  double lambda_reg = kDefaultRegularization;
  bool store_parameters = false;
};

struct VariationalTrajectory {
  std::vector<double> times;            // k * dt, k = 0..steps
  std::vector<double> f_ave;            // mean over trials of |f_i|^2
  Eigen::MatrixXd per_trial;            // (steps+1) x n_trials, |f_i|^2
  std::vector<Eigen::MatrixXd> parameters;  // per trial, (steps+1) x n_params
  double dt = 0.0;
};

// Independent McLachlan trajectory per trial, all starting from theta0.
// Parameters advance once per dt with a classical RK4 update of the
// equation-of-motion velocity field; plain Euler is unstable at the
// default step for stiff test Hamiltonians.
VariationalTrajectory evolve_trajectory(const AnsatzCircuit& ansatz,
                                        const Eigen::VectorXd& theta0,
                                        const HamiltonianSum& h_test, const TrialSet& trials,
                                        const VariationalOptions& options);

enum class ScanMethod { Exact, Trotter, Variational };

struct ScanOptions {
  int trotter_steps = 0;                          // used when > 0
  double tau = 2.0 * std::numbers::pi / 1000.0;   // else steps = round(t / tau)
  double dt = 2.0 * std::numbers::pi / 1000.0;
  int layers = 3;
  double lambda_reg = kDefaultRegularization;
  int threads = 1;
};

struct ScanPoint {
  double lambda = 0.0;
  double kappa = 0.0;
  double f_ave = 0.0;
};

struct ScanResult {
  std::vector<double> lambdas, kappas;
  std::vector<ScanPoint> points;  // row-major, lambda fastest
  int best_index = -1;            // argmax of f_ave (first on ties)
};

// F_ave(lambda, kappa) for H_test = H - H_eff(lambda, kappa), every trial
// evolved for time t.
ScanResult landscape_scan(const std::vector<double>& lambdas, const std::vector<double>& kappas,
                          const TFIMParams& model, const std::vector<StateVector>& trial_states,
                          double t, ScanMethod method, const ScanOptions& options = {});

}  // namespace effham
