#pragma once

#include <vector>

#include "effham/qpe_grover.hpp"
#include "effham/statevector.hpp"

namespace effham {

// Transverse-field Ising chain with open boundary:
// H = -(delta/2) sum_{i=1..N} Z_i - j sum_{i=1..N-1} X_i X_{i+1}.
struct TFIMParams {
  int n_sites = 2;
  double delta = 0.0;
  double j = 0.0;
};

void validate(const TFIMParams& params);

// The second-order effective chain assumes a strong field. Callers should
// warn (not reject) when delta < 5 |j|.
bool is_perturbative_regime(const TFIMParams& params);

struct EffectiveParams {
  double lambda = 0.0;
  double kappa = 0.0;
};

HamiltonianSum build_tfim(const TFIMParams& params);

// Hopping chain on the same register:
// -(lambda/2) sum_nn (XX+YY) - (kappa/2) sum_nnn (XX+YY) - Z_1 - Z_N.
HamiltonianSum build_sw_effective(const EffectiveParams& params, int n_sites);

// lambda = j, kappa = j^2 / (2 delta). delta must be nonzero.
EffectiveParams exact_sw_coefficients(double delta, double j);

// Single spin flips on the polarized background: sigma^x_i |0...0>, i = 1..N.
std::vector<StateVector> initial_states(int n_sites);

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;
};

// steps evenly spaced points from lo to hi inclusive (just lo when steps = 1).
std::vector<double> grid_points(const GridAxis& axis);

// Effective-Hamiltonian candidates over the parameter grid, enumerated
// row-major with lambda fastest; labels run 1..N.
CandidateSet candidate_grid(const GridAxis& lambda_axis, const GridAxis& kappa_axis, int n_sites);

}  // namespace effham
