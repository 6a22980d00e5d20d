#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "effham/fidelity.hpp"

namespace effham {

// Uniform phase grid theta_m = 2 pi m / K with m in {-K/2+1, ..., K/2};
// exactly K points, K even, and |-pi> is identified with |pi>.
class PhaseGrid {
 public:
  explicit PhaseGrid(int k);

  int size() const { return k_; }
  int m_min() const { return -k_ / 2 + 1; }
  int m_max() const { return k_ / 2; }
  double spacing() const;      // 2 pi / K
  double theta(int m) const;   // m in [m_min, m_max]
  int index_of(int m) const { return m - m_min(); }
  int m_at(int index) const { return index + m_min(); }

 private:
  int k_;
};

// theta = 2 arccos(F), clamping rounding excursions outside [0, 1].
double theta_of_fidelity(double fidelity);

// Phase-register amplitudes after estimation of a state with phase theta_x:
// f_theta = (1/K) sum_k exp(i (theta_x - theta) k).
struct PhaseDistribution {
  PhaseGrid grid;
  double theta_x = 0.0;
  bool on_grid = false;       // theta_x coincides with a grid point
  Eigen::VectorXcd f;         // amplitude per grid index
};

// Closed-form evaluation (geometric series).
PhaseDistribution phase_distribution(double theta_x, int k);
// Direct K-term summation; reference route for the closed form.
PhaseDistribution phase_distribution_direct(double theta_x, int k);

// Largest grid index strictly inside (-theta_th, theta_th). Boundary ties
// resolve to outside with a 1e-9 grid-unit guard, so a threshold placed on a
// grid point excludes that point deterministically.
int threshold_window_radius(int k, double theta_th);

// a_x = sum_theta |f_theta|^2 u(theta) with u = -1 strictly inside
// (-theta_th, theta_th) and +1 outside; always in [-1, 1].
double flip_coefficient(double theta_x, int k, double theta_th);

// Reference route for flip_coefficient: the window mass comes from direct
// K-term sums instead of the closed form.
double flip_coefficient_direct(double theta_x, int k, double theta_th);

// eta_x: -1 when |theta_x| < theta_th, +1 otherwise (boundary counts as +1).
int ideal_flip(double theta_x, double theta_th);

// Candidate register amplitudes plus the probability that has leaked out of
// the candidate subspace; sum |alpha|^2 + leaked == 1.
struct GroverState {
  Eigen::VectorXcd amplitudes;
  double leaked_probability = 0.0;

  static GroverState uniform(int n_candidates);
  double subspace_probability() const { return amplitudes.squaredNorm(); }
  double probability(int index) const { return std::norm(amplitudes[index]); }
};

// One amplification step: alpha <- V_X diag(flips) alpha, where
// V_X = 1 - 2|X><X| reflects about the uniform state. |flips| <= 1; any
// contraction by |flip| < 1 is accounted to leaked_probability.
GroverState grover_iterate(const GroverState& state, const std::vector<double>& flips);

// max(1, floor((pi/4) sqrt(N/M))).
int optimal_iterations(std::int64_t n_candidates, std::int64_t n_marked);

// Candidate effective Hamiltonians (or directly their fidelities) labeled
// 1..N; angles theta_x = 2 arccos F(x) drive the search.
class CandidateSet {
 public:
  static CandidateSet from_hamiltonians(std::vector<HamiltonianSum> hamiltonians);
  static CandidateSet from_hamiltonians(std::vector<HamiltonianSum> hamiltonians,
                                        std::vector<double> lambdas,
                                        std::vector<double> kappas);
  static CandidateSet from_fidelities(std::vector<double> fidelities);
  static CandidateSet from_thetas(std::vector<double> thetas);

  int size() const { return static_cast<int>(std::max(hamiltonians_.size(), thetas_.size())); }
  int label(int index) const { return index + 1; }

  bool has_hamiltonians() const { return !hamiltonians_.empty(); }
  bool has_fidelities() const { return !thetas_.empty(); }
  bool has_grid_params() const { return !lambdas_.empty(); }

  const HamiltonianSum& hamiltonian(int index) const;
  double fidelity(int index) const;
  double theta(int index) const;
  double lambda_of(int index) const;
  double kappa_of(int index) const;

  void set_fidelities(std::vector<double> fidelities);

 private:
  CandidateSet() = default;
  std::vector<HamiltonianSum> hamiltonians_;
  std::vector<double> lambdas_, kappas_;
  std::vector<double> fidelities_, thetas_;
};

// Computes F(x) = overall_fidelity(h_full - h_eff(x), trials) once per
// candidate and stores it on the set.
void cache_fidelities(CandidateSet& candidates, const HamiltonianSum& h_full,
                      const TrialSet& trials, const EvolutionMethod& method, int threads = 1);

enum class SearchMode { Ideal, Leaky };

struct SearchIteration {
  int iteration = 0;              // 0 is the state before any amplification
  double marked_probability = 0.0;
  double leaked_probability = 0.0;
};

struct SearchReport {
  std::vector<SearchIteration> iterations;
  std::vector<double> final_probabilities;
  std::vector<int> marked;         // indices with theta_x < theta_th
  std::vector<int> within_radius;  // indices with |theta_x - theta_th| < 2 spacings
  bool no_marked = false;
  int best_index = -1;             // argmax of the final distribution
  int iterations_used = 0;
  double theta_threshold = 0.0;
  int k = 0;
  SearchMode mode = SearchMode::Ideal;
};

// Runs `iterations` amplification steps from the uniform superposition.
// Ideal mode flips by eta_x; leaky mode scales by a_x and tracks leakage.
SearchReport run_search(const CandidateSet& candidates, double theta_th, int k, int iterations,
                        SearchMode mode);

// Accumulated bound sum_i epsilon_i on the distance between the leaky and
// ideal register states after `iterations` steps, evaluated along the ideal
// trajectory: epsilon = sqrt(sum_x |alpha_x|^2 |eta_x - a_x|).
double error_bound(const CandidateSet& candidates, double theta_th, int k, int iterations);

}  // namespace effham
