#pragma once

#include <complex>
#include <iosfwd>
#include <string_view>

#include "effham/pauli.hpp"

namespace effham {

// Normalized pure state on n sites. Site i occupies bit (n - i) of the basis
// index, so |b_1 b_2 ... b_n> has index sum_i b_i 2^(n-i); |0...0> is index 0.
class StateVector {
 public:
  StateVector(int n_sites, Eigen::VectorXcd amplitudes);

  static StateVector basis_state(int n_sites, std::uint64_t index);
  static StateVector from_bitstring(std::string_view bits);
  // Divides by the norm; rejects the zero vector.
  static StateVector normalized(int n_sites, Eigen::VectorXcd raw);

  int n_sites() const { return n_sites_; }
  std::int64_t dimension() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

 private:
  int n_sites_;
  Eigen::VectorXcd amps_;
};

// <a|b>; conjugates the first argument.
std::complex<double> inner_product(const StateVector& a, const StateVector& b);

struct EvolutionMethod {
  enum class Kind { Exact, Trotter };
  Kind kind = Kind::Exact;
  int trotter_steps = 1;

  static EvolutionMethod exact() { return {Kind::Exact, 1}; }
  static EvolutionMethod trotter(int steps);
};

// One evolution problem, bundled for configs and runners.
struct EvolutionSpec {
  HamiltonianSum hamiltonian;
  double total_time = 0.0;
  EvolutionMethod method;
};

// U(t) = exp(-i H t) through a cached dense Hermitian eigendecomposition.
class ExactPropagator {
 public:
  explicit ExactPropagator(const HamiltonianSum& h, int site_limit = kDenseSiteLimit);

  StateVector evolve(const StateVector& s, double t) const;
  Eigen::VectorXcd evolve_raw(const Eigen::VectorXcd& x, double t) const;

  int n_sites() const { return n_sites_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  int n_sites_;
  bool identity_;  // empty sum: U(t) = 1 exactly
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

StateVector exact_evolve(const HamiltonianSum& h, const StateVector& s, double t);

// exp(-i c tau P)|s> = cos(c tau)|s> - i sin(c tau) P|s>, exactly unitary.
StateVector apply_exp_pauli_term(const HamiltonianTerm& term, double tau, const StateVector& s);

// First-order product formula with n equal slices; terms are applied in
// canonical order within each slice.
StateVector trotter_evolve(const HamiltonianSum& h, const StateVector& s, double t, int n);
Eigen::VectorXcd trotter_evolve_raw(const HamiltonianSum& h, Eigen::VectorXcd x, double t, int n);

StateVector evolve(const HamiltonianSum& h, const StateVector& s, double t,
                   const EvolutionMethod& method);
StateVector evolve(const EvolutionSpec& spec, const StateVector& s);

// Debug export: one "index,real,imag" row per amplitude.
void write_state_csv(std::ostream& out, const StateVector& s);

}  // namespace effham
