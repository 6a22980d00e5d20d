#include "effham/tfim.hpp"

#include <cmath>
#include <stdexcept>

namespace effham {

void validate(const TFIMParams& params) {
  if (params.n_sites < 2)
    throw std::invalid_argument("chain needs at least 2 sites, got " +
                                std::to_string(params.n_sites));
  if (!std::isfinite(params.delta) || !std::isfinite(params.j))
    throw std::invalid_argument("chain couplings must be finite");
}

bool is_perturbative_regime(const TFIMParams& params) {
  return params.delta >= 5.0 * std::abs(params.j);
}

HamiltonianSum build_tfim(const TFIMParams& params) {
  validate(params);
  int n = params.n_sites;
  HamiltonianSum h(n);
  for (int i = 1; i <= n; ++i)
    h.add(-0.5 * params.delta, PauliString::single(n, i, Axis::Z));
  for (int i = 1; i < n; ++i) {
    PauliString xx(n);
    xx.set_axis(i, Axis::X);
    xx.set_axis(i + 1, Axis::X);
    h.add(-params.j, xx);
  }
  return h.canonicalized();
}

HamiltonianSum build_sw_effective(const EffectiveParams& params, int n_sites) {
  if (n_sites < 2)
    throw std::invalid_argument("effective chain needs at least 2 sites");
  if (!std::isfinite(params.lambda) || !std::isfinite(params.kappa))
    throw std::invalid_argument("effective couplings must be finite");
  HamiltonianSum h(n_sites);
  auto add_hopping = [&](int a, int b, double coefficient) {
    PauliString xx(n_sites), yy(n_sites);
    xx.set_axis(a, Axis::X);
    xx.set_axis(b, Axis::X);
    yy.set_axis(a, Axis::Y);
    yy.set_axis(b, Axis::Y);
    h.add(coefficient, xx);
    h.add(coefficient, yy);
  };
  for (int i = 1; i < n_sites; ++i) add_hopping(i, i + 1, -0.5 * params.lambda);
  for (int i = 1; i + 2 <= n_sites; ++i) add_hopping(i, i + 2, -0.5 * params.kappa);
  h.add(-1.0, PauliString::single(n_sites, 1, Axis::Z));
  h.add(-1.0, PauliString::single(n_sites, n_sites, Axis::Z));
  return h.canonicalized();
}

EffectiveParams exact_sw_coefficients(double delta, double j) {
  if (delta == 0.0)
    throw std::invalid_argument("exact effective couplings need a nonzero field");
  return {j, j * j / (2.0 * delta)};
}

std::vector<StateVector> initial_states(int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("site count must be >= 1");
  std::vector<StateVector> states;
  states.reserve(static_cast<std::size_t>(n_sites));
  for (int i = 1; i <= n_sites; ++i)
    states.push_back(StateVector::basis_state(n_sites, std::uint64_t{1} << (n_sites - i)));
  return states;
}

std::vector<double> grid_points(const GridAxis& axis) {
  if (axis.steps < 1) throw std::invalid_argument("grid axis needs at least 1 step");
  if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi) || axis.lo > axis.hi)
    throw std::invalid_argument("grid axis range is invalid");
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(axis.steps));
  if (axis.steps == 1) {
    points.push_back(axis.lo);
    return points;
  }
  for (int i = 0; i < axis.steps; ++i) {
    double w = static_cast<double>(i);
    double n = static_cast<double>(axis.steps - 1);
    points.push_back((axis.lo * (n - w) + axis.hi * w) / n);
  }
  return points;
}

CandidateSet candidate_grid(const GridAxis& lambda_axis, const GridAxis& kappa_axis, int n_sites) {
  std::vector<double> lambdas = grid_points(lambda_axis);
  std::vector<double> kappas = grid_points(kappa_axis);
  std::vector<HamiltonianSum> hams;
  std::vector<double> lambda_col, kappa_col;
  hams.reserve(lambdas.size() * kappas.size());
  for (double kappa : kappas) {
    for (double lambda : lambdas) {
      hams.push_back(build_sw_effective({lambda, kappa}, n_sites));
      lambda_col.push_back(lambda);
      kappa_col.push_back(kappa);
    }
  }
  return CandidateSet::from_hamiltonians(std::move(hams), std::move(lambda_col),
                                         std::move(kappa_col));
}

}  // namespace effham
