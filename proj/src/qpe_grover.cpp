#include "effham/qpe_grover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "effham/parallel.hpp"

namespace effham {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = std::numbers::pi_v<long double>;

void check_grid_size(int k) {
  if (k < 2 || (k % 2) != 0)
    throw std::invalid_argument("phase grid size K must be even and >= 2, got " +
                                std::to_string(k));
}

// Wraps into (-pi, pi]; the -pi representative maps to +pi.
double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace

PhaseGrid::PhaseGrid(int k) : k_(k) { check_grid_size(k); }

double PhaseGrid::spacing() const { return 2.0 * kPi / k_; }

double PhaseGrid::theta(int m) const {
  if (m < m_min() || m > m_max())
    throw std::invalid_argument("grid index " + std::to_string(m) + " out of range");
  return 2.0 * kPi * m / k_;
}

double theta_of_fidelity(double fidelity) {
  if (fidelity < -1e-9 || fidelity > 1.0 + 1e-9)
    throw std::invalid_argument("fidelity outside [0, 1]");
  return 2.0 * std::acos(std::clamp(fidelity, 0.0, 1.0));
}

namespace {

// Nearest grid index to theta_x, and whether theta_x lies on the grid to
// within 1e-9 grid units. m is wrapped into the grid's index range.
struct GridAlignment {
  int m_nearest = 0;
  bool on_grid = false;
};

GridAlignment align_to_grid(double theta_x, const PhaseGrid& grid) {
  double position = wrap_angle(theta_x) / grid.spacing();
  auto m = static_cast<int>(std::llround(position));
  GridAlignment out;
  out.on_grid = std::abs(position - m) < 1e-9;
  if (m < grid.m_min()) m += grid.size();
  if (m > grid.m_max()) m -= grid.size();
  out.m_nearest = m;
  return out;
}

PhaseDistribution delta_distribution(double theta_x, const PhaseGrid& grid, int m_at) {
  PhaseDistribution out{grid, theta_x, true, Eigen::VectorXcd::Zero(grid.size())};
  out.f[grid.index_of(m_at)] = 1.0;
  return out;
}

}  // namespace

PhaseDistribution phase_distribution(double theta_x, int k) {
  PhaseGrid grid(k);
  GridAlignment align = align_to_grid(theta_x, grid);
  if (align.on_grid) return delta_distribution(theta_x, grid, align.m_nearest);

  PhaseDistribution out{grid, theta_x, false, Eigen::VectorXcd(grid.size())};
  const auto theta_xl = static_cast<long double>(wrap_angle(theta_x));
  for (int m = grid.m_min(); m <= grid.m_max(); ++m) {
    long double delta = theta_xl - 2.0L * kPiL * m / k;
    // (1/K) sum_k e^(i delta k) = e^(i delta (K-1)/2) sin(K delta/2) / (K sin(delta/2))
    long double magnitude = std::sin(0.5L * k * delta) / (k * std::sin(0.5L * delta));
    long double phase = 0.5L * delta * (k - 1);
    out.f[grid.index_of(m)] = {static_cast<double>(magnitude * std::cos(phase)),
                               static_cast<double>(magnitude * std::sin(phase))};
  }
  return out;
}

PhaseDistribution phase_distribution_direct(double theta_x, int k) {
  PhaseGrid grid(k);
  GridAlignment align = align_to_grid(theta_x, grid);
  if (align.on_grid) return delta_distribution(theta_x, grid, align.m_nearest);

  PhaseDistribution out{grid, theta_x, false, Eigen::VectorXcd(grid.size())};
  const auto theta_xl = static_cast<long double>(wrap_angle(theta_x));
  for (int m = grid.m_min(); m <= grid.m_max(); ++m) {
    long double delta = theta_xl - 2.0L * kPiL * m / k;
    // Incrementally rotated phasor, accumulated in extended precision.
    const long double step_re = std::cos(delta), step_im = std::sin(delta);
    long double rot_re = 1.0L, rot_im = 0.0L;
    long double sum_re = 0.0L, sum_im = 0.0L;
    for (int j = 0; j < k; ++j) {
      sum_re += rot_re;
      sum_im += rot_im;
      long double next_re = rot_re * step_re - rot_im * step_im;
      rot_im = rot_re * step_im + rot_im * step_re;
      rot_re = next_re;
    }
    out.f[grid.index_of(m)] = {static_cast<double>(sum_re / k), static_cast<double>(sum_im / k)};
  }
  return out;
}

namespace {

void check_threshold(double theta_th) {
  if (!(theta_th > 0.0) || !(theta_th < kPi))
    throw std::invalid_argument("threshold angle must lie in (0, pi)");
}

}  // namespace

int threshold_window_radius(int k, double theta_th) {
  PhaseGrid grid(k);
  check_threshold(theta_th);
  double q = theta_th / grid.spacing();
  return static_cast<int>(std::ceil(q - 1e-9)) - 1;
}

namespace {

template <typename WindowTerm>
double flip_from_window(double theta_x, int k, double theta_th, WindowTerm term_mass) {
  PhaseGrid grid(k);
  int m_in = threshold_window_radius(k, theta_th);

  GridAlignment align = align_to_grid(theta_x, grid);
  if (align.on_grid) return std::abs(align.m_nearest) <= m_in ? -1.0 : 1.0;

  const auto theta_xl = static_cast<long double>(wrap_angle(theta_x));
  long double inside = 0.0L;
  for (int m = -m_in; m <= m_in; ++m) {
    long double delta = theta_xl - 2.0L * kPiL * m / k;
    inside += term_mass(delta);
  }
  inside = std::clamp(inside, 0.0L, 1.0L);
  return static_cast<double>(1.0L - 2.0L * inside);
}

}  // namespace

double flip_coefficient(double theta_x, int k, double theta_th) {
  return flip_from_window(theta_x, k, theta_th, [k](long double delta) {
    long double amplitude = std::sin(0.5L * k * delta) / (k * std::sin(0.5L * delta));
    return amplitude * amplitude;
  });
}

double flip_coefficient_direct(double theta_x, int k, double theta_th) {
  return flip_from_window(theta_x, k, theta_th, [k](long double delta) {
    const long double step_re = std::cos(delta), step_im = std::sin(delta);
    long double rot_re = 1.0L, rot_im = 0.0L;
    long double sum_re = 0.0L, sum_im = 0.0L;
    for (int j = 0; j < k; ++j) {
      sum_re += rot_re;
      sum_im += rot_im;
      long double next_re = rot_re * step_re - rot_im * step_im;
      rot_im = rot_re * step_im + rot_im * step_re;
      rot_re = next_re;
    }
    return (sum_re * sum_re + sum_im * sum_im) / (static_cast<long double>(k) * k);
  });
}

int ideal_flip(double theta_x, double theta_th) {
  check_threshold(theta_th);
  // Boundary ties (to 1e-12 relative) count as unmarked, matching the
  // outside-guard used by flip_coefficient.
  return std::abs(wrap_angle(theta_x)) < theta_th * (1.0 - 1e-12) ? -1 : 1;
}

GroverState GroverState::uniform(int n_candidates) {
  if (n_candidates < 1) throw std::invalid_argument("candidate count must be >= 1");
  GroverState s;
  s.amplitudes =
      Eigen::VectorXcd::Constant(n_candidates, 1.0 / std::sqrt(static_cast<double>(n_candidates)));
  s.leaked_probability = 0.0;
  return s;
}

GroverState grover_iterate(const GroverState& state, const std::vector<double>& flips) {
  const auto n = state.amplitudes.size();
  if (static_cast<Eigen::Index>(flips.size()) != n)
    throw std::invalid_argument("flip vector length does not match candidate register");
  GroverState next = state;
  for (Eigen::Index i = 0; i < n; ++i) {
    double f = flips[static_cast<std::size_t>(i)];
    if (std::abs(f) > 1.0 + 1e-12)
      throw std::invalid_argument("flip coefficients must have modulus <= 1");
    next.amplitudes[i] *= std::clamp(f, -1.0, 1.0);
  }
  next.leaked_probability +=
      std::max(0.0, state.amplitudes.squaredNorm() - next.amplitudes.squaredNorm());
  // V_X = 1 - 2|X><X| with |X> the uniform state.
  std::complex<double> mean = next.amplitudes.mean();
  next.amplitudes = next.amplitudes.array() - 2.0 * mean;
  return next;
}

int optimal_iterations(std::int64_t n_candidates, std::int64_t n_marked) {
  if (n_marked < 1 || n_marked > n_candidates)
    throw std::invalid_argument("marked count must lie in [1, N]");
  double ratio = static_cast<double>(n_candidates) / static_cast<double>(n_marked);
  return std::max(1, static_cast<int>(std::floor(kPi / 4.0 * std::sqrt(ratio))));
}

CandidateSet CandidateSet::from_hamiltonians(std::vector<HamiltonianSum> hamiltonians) {
  if (hamiltonians.empty()) throw std::invalid_argument("candidate set must be nonempty");
  CandidateSet c;
  c.hamiltonians_ = std::move(hamiltonians);
  return c;
}

CandidateSet CandidateSet::from_hamiltonians(std::vector<HamiltonianSum> hamiltonians,
                                             std::vector<double> lambdas,
                                             std::vector<double> kappas) {
  if (lambdas.size() != hamiltonians.size() || kappas.size() != hamiltonians.size())
    throw std::invalid_argument("parameter columns must match the candidate count");
  CandidateSet c = from_hamiltonians(std::move(hamiltonians));
  c.lambdas_ = std::move(lambdas);
  c.kappas_ = std::move(kappas);
  return c;
}

CandidateSet CandidateSet::from_fidelities(std::vector<double> fidelities) {
  if (fidelities.empty()) throw std::invalid_argument("candidate set must be nonempty");
  CandidateSet c;
  c.set_fidelities(std::move(fidelities));
  return c;
}

CandidateSet CandidateSet::from_thetas(std::vector<double> thetas) {
  if (thetas.empty()) throw std::invalid_argument("candidate set must be nonempty");
  CandidateSet c;
  c.thetas_ = std::move(thetas);
  c.fidelities_.reserve(c.thetas_.size());
  for (double& t : c.thetas_) {
    if (!(t >= -1e-12) || !(t <= kPi + 1e-12))
      throw std::invalid_argument("candidate angle outside [0, pi]");
    t = std::clamp(t, 0.0, kPi);
    c.fidelities_.push_back(std::cos(0.5 * t));
  }
  return c;
}

const HamiltonianSum& CandidateSet::hamiltonian(int index) const {
  return hamiltonians_.at(static_cast<std::size_t>(index));
}

double CandidateSet::fidelity(int index) const {
  if (!has_fidelities()) throw std::logic_error("candidate fidelities not computed");
  return fidelities_.at(static_cast<std::size_t>(index));
}

double CandidateSet::theta(int index) const {
  if (!has_fidelities()) throw std::logic_error("candidate fidelities not computed");
  return thetas_.at(static_cast<std::size_t>(index));
}

double CandidateSet::lambda_of(int index) const {
  return lambdas_.at(static_cast<std::size_t>(index));
}

double CandidateSet::kappa_of(int index) const {
  return kappas_.at(static_cast<std::size_t>(index));
}

void CandidateSet::set_fidelities(std::vector<double> fidelities) {
  if (has_hamiltonians() && fidelities.size() != hamiltonians_.size())
    throw std::invalid_argument("fidelity column must match the candidate count");
  fidelities_ = std::move(fidelities);
  thetas_.clear();
  thetas_.reserve(fidelities_.size());
  for (double f : fidelities_) thetas_.push_back(theta_of_fidelity(f));
}

void cache_fidelities(CandidateSet& candidates, const HamiltonianSum& h_full,
                      const TrialSet& trials, const EvolutionMethod& method, int threads) {
  if (!candidates.has_hamiltonians())
    throw std::invalid_argument("candidate set carries no Hamiltonians");
  std::vector<double> fidelities(static_cast<std::size_t>(candidates.size()));
  detail::parallel_for(candidates.size(), threads, [&](int i) {
    HamiltonianSum h_test = subtract(h_full, candidates.hamiltonian(i));
    fidelities[static_cast<std::size_t>(i)] = overall_fidelity(h_test, trials, method);
  });
  candidates.set_fidelities(std::move(fidelities));
}

namespace {

struct FlipTable {
  std::vector<double> ideal;
  std::vector<double> leaky;
  std::vector<int> marked;
  std::vector<int> within_radius;
};

FlipTable flip_table(const CandidateSet& candidates, double theta_th, int k) {
  PhaseGrid grid(k);
  FlipTable t;
  int n = candidates.size();
  t.ideal.reserve(n);
  t.leaky.reserve(n);
  for (int i = 0; i < n; ++i) {
    double theta = candidates.theta(i);
    int eta = ideal_flip(theta, theta_th);
    t.ideal.push_back(static_cast<double>(eta));
    t.leaky.push_back(flip_coefficient(theta, k, theta_th));
    if (eta < 0) t.marked.push_back(i);
    if (std::abs(std::abs(wrap_angle(theta)) - theta_th) < 2.0 * grid.spacing())
      t.within_radius.push_back(i);
  }
  return t;
}

double marked_probability(const GroverState& s, const std::vector<int>& marked) {
  double p = 0.0;
  for (int i : marked) p += s.probability(i);
  return p;
}

}  // namespace

SearchReport run_search(const CandidateSet& candidates, double theta_th, int k, int iterations,
                        SearchMode mode) {
  if (!candidates.has_fidelities())
    throw std::invalid_argument("candidate fidelities not computed; cache them first");
  if (iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
  FlipTable table = flip_table(candidates, theta_th, k);

  SearchReport report;
  report.theta_threshold = theta_th;
  report.k = k;
  report.mode = mode;
  report.marked = table.marked;
  report.within_radius = table.within_radius;
  report.no_marked = table.marked.empty();
  report.iterations_used = iterations;

  const std::vector<double>& flips = mode == SearchMode::Ideal ? table.ideal : table.leaky;
  GroverState state = GroverState::uniform(candidates.size());
  report.iterations.push_back({0, marked_probability(state, table.marked), 0.0});
  for (int j = 1; j <= iterations; ++j) {
    state = grover_iterate(state, flips);
    report.iterations.push_back({j, marked_probability(state, table.marked),
                                 state.leaked_probability});
  }

  report.final_probabilities.resize(static_cast<std::size_t>(candidates.size()));
  for (int i = 0; i < candidates.size(); ++i)
    report.final_probabilities[static_cast<std::size_t>(i)] = state.probability(i);
  report.best_index = static_cast<int>(
      std::max_element(report.final_probabilities.begin(), report.final_probabilities.end()) -
      report.final_probabilities.begin());
  return report;
}

double error_bound(const CandidateSet& candidates, double theta_th, int k, int iterations) {
  if (!candidates.has_fidelities())
    throw std::invalid_argument("candidate fidelities not computed; cache them first");
  if (iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
  FlipTable table = flip_table(candidates, theta_th, k);

  GroverState state = GroverState::uniform(candidates.size());
  double bound = 0.0;
  for (int j = 1; j <= iterations; ++j) {
    double weighted = 0.0;
    for (int i = 0; i < candidates.size(); ++i) {
      std::size_t u = static_cast<std::size_t>(i);
      weighted += state.probability(i) * std::abs(table.ideal[u] - table.leaky[u]);
    }
    bound += std::sqrt(weighted);
    state = grover_iterate(state, table.ideal);
  }
  return bound;
}

}  // namespace effham
