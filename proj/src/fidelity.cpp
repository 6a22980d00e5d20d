#include "effham/fidelity.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace effham {

TrialSet::TrialSet(std::vector<Trial> trials) : trials_(std::move(trials)) {
  if (trials_.empty()) throw std::invalid_argument("trial set must be nonempty");
  int n = trials_.front().initial.n_sites();
  for (const auto& t : trials_) {
    if (t.initial.n_sites() != n)
      throw std::invalid_argument("trials mix registers of different size");
    if (!std::isfinite(t.time)) throw std::invalid_argument("trial time must be finite");
  }
}

std::vector<std::complex<double>> trial_fidelities(const HamiltonianSum& h_test,
                                                   const TrialSet& trials,
                                                   const EvolutionMethod& method) {
  if (h_test.n_sites() != trials.n_sites())
    throw std::invalid_argument("trial states and Hamiltonian registers differ");
  std::unique_ptr<ExactPropagator> propagator;
  if (method.kind == EvolutionMethod::Kind::Exact)
    propagator = std::make_unique<ExactPropagator>(h_test);
  std::vector<std::complex<double>> out;
  out.reserve(trials.size());
  for (const auto& trial : trials.trials()) {
    StateVector evolved = propagator ? propagator->evolve(trial.initial, trial.time)
                                     : trotter_evolve(h_test, trial.initial, trial.time,
                                                      method.trotter_steps);
    out.push_back(inner_product(trial.initial, evolved));
  }
  return out;
}

std::complex<double> trial_fidelity(const HamiltonianSum& h_test, const Trial& trial,
                                    const EvolutionMethod& method) {
  return trial_fidelities(h_test, TrialSet({trial}), method).front();
}

double overall_fidelity(const HamiltonianSum& h_test, const TrialSet& trials,
                        const EvolutionMethod& method) {
  std::complex<double> mean{0.0, 0.0};
  for (const auto& f : trial_fidelities(h_test, trials, method)) mean += f;
  mean /= static_cast<double>(trials.size());
  return std::abs(mean);
}

double average_fidelity(const HamiltonianSum& h_test, const TrialSet& trials,
                        const EvolutionMethod& method) {
  double sum = 0.0;
  for (const auto& f : trial_fidelities(h_test, trials, method)) sum += std::norm(f);
  return sum / static_cast<double>(trials.size());
}

double composite_fidelity(const HamiltonianSum& h_test, const TrialSet& trials,
                          const EvolutionMethod& method) {
  if (h_test.n_sites() != trials.n_sites())
    throw std::invalid_argument("trial states and Hamiltonian registers differ");
  std::unique_ptr<ExactPropagator> propagator;
  if (method.kind == EvolutionMethod::Kind::Exact)
    propagator = std::make_unique<ExactPropagator>(h_test);
  double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(trials.size()));
  std::complex<double> total{0.0, 0.0};
  for (const auto& trial : trials.trials()) {
    Eigen::VectorXcd block = inv_sqrt_n * trial.initial.amplitudes();
    Eigen::VectorXcd evolved =
        propagator ? propagator->evolve_raw(block, trial.time)
                   : trotter_evolve_raw(h_test, block, trial.time, method.trotter_steps);
    total += block.dot(evolved);
  }
  return std::abs(total);
}

}  // namespace effham
