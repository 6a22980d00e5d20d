#pragma once

#include <complex>
#include <vector>

#include "effham/statevector.hpp"

namespace effham {

struct Trial {
  StateVector initial;
  double time = 0.0;
};

// Nonempty list of (initial state, evolution time) pairs on one register.
class TrialSet {
 public:
  explicit TrialSet(std::vector<Trial> trials);

  const std::vector<Trial>& trials() const { return trials_; }
  std::size_t size() const { return trials_.size(); }
  int n_sites() const { return trials_.front().initial.n_sites(); }

 private:
  std::vector<Trial> trials_;
};

// f_i = <psi_i| exp(-i H_test t_i) |psi_i>; |f_i| <= 1 up to rounding.
std::complex<double> trial_fidelity(const HamiltonianSum& h_test, const Trial& trial,
                                    const EvolutionMethod& method);

// All f_i, sharing one propagator across trials when the method is exact.
std::vector<std::complex<double>> trial_fidelities(const HamiltonianSum& h_test,
                                                   const TrialSet& trials,
                                                   const EvolutionMethod& method);

// F = |(1/N) sum_i f_i|.
double overall_fidelity(const HamiltonianSum& h_test, const TrialSet& trials,
                        const EvolutionMethod& method);

// F_ave = (1/N) sum_i |f_i|^2.
double average_fidelity(const HamiltonianSum& h_test, const TrialSet& trials,
                        const EvolutionMethod& method);

// Same number as overall_fidelity, computed on the block direct sum
// |psi~> = (1/sqrt N) (psi_1 ++ ... ++ psi_N) evolved block by block.
double composite_fidelity(const HamiltonianSum& h_test, const TrialSet& trials,
                          const EvolutionMethod& method);

}  // namespace effham
