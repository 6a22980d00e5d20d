#include "effham/statevector.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "effham/numfmt.hpp"

namespace effham {

namespace {

constexpr double kNormTolerance = 1e-10;

void check_register(int n_sites, std::int64_t dim) {
  if (n_sites < 1 || n_sites > 28)
    throw std::invalid_argument("site count out of range: " + std::to_string(n_sites));
  if (dim != (std::int64_t{1} << n_sites))
    throw std::invalid_argument("amplitude vector has dimension " + std::to_string(dim) +
                                ", expected 2^" + std::to_string(n_sites));
}

}  // namespace

StateVector::StateVector(int n_sites, Eigen::VectorXcd amplitudes)
    : n_sites_(n_sites), amps_(std::move(amplitudes)) {
  check_register(n_sites_, amps_.size());
  double norm_sq = amps_.squaredNorm();
  if (std::abs(norm_sq - 1.0) > kNormTolerance)
    throw std::invalid_argument("state is not normalized: |amplitudes|^2 = " +
                                format_double(norm_sq));
}

StateVector StateVector::basis_state(int n_sites, std::uint64_t index) {
  std::int64_t dim = std::int64_t{1} << n_sites;
  if (static_cast<std::int64_t>(index) >= dim)
    throw std::invalid_argument("basis index out of range");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dim);
  a[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(n_sites, std::move(a));
}

StateVector StateVector::from_bitstring(std::string_view bits) {
  if (bits.empty()) throw std::invalid_argument("empty bitstring");
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw std::invalid_argument(std::string("bad bitstring character '") + c + "'");
    index = (index << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return basis_state(static_cast<int>(bits.size()), index);
}

StateVector StateVector::normalized(int n_sites, Eigen::VectorXcd raw) {
  check_register(n_sites, raw.size());
  double norm = raw.norm();
  if (norm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  raw /= norm;
  return StateVector(n_sites, std::move(raw));
}

std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("inner product of states on different registers");
  return a.amplitudes().dot(b.amplitudes());
}

EvolutionMethod EvolutionMethod::trotter(int steps) {
  if (steps < 1) throw std::invalid_argument("trotter step count must be >= 1");
  return {Kind::Trotter, steps};
}

ExactPropagator::ExactPropagator(const HamiltonianSum& h, int site_limit)
    : n_sites_(h.n_sites()), identity_(h.canonicalized().empty()) {
  if (identity_) return;
  Eigen::MatrixXcd m = dense_matrix(h, site_limit);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::VectorXcd ExactPropagator::evolve_raw(const Eigen::VectorXcd& x, double t) const {
  if (x.size() != (std::int64_t{1} << n_sites_))
    throw std::invalid_argument("state dimension does not match propagator register");
  if (identity_ || t == 0.0) return x;
  const std::complex<double> mi{0.0, -1.0};
  Eigen::VectorXcd modes = eigenvectors_.adjoint() * x;
  modes.array() *= (mi * t * eigenvalues_.array().cast<std::complex<double>>()).exp();
  return eigenvectors_ * modes;
}

StateVector ExactPropagator::evolve(const StateVector& s, double t) const {
  return StateVector(s.n_sites(), evolve_raw(s.amplitudes(), t));
}

StateVector exact_evolve(const HamiltonianSum& h, const StateVector& s, double t) {
  if (h.n_sites() != s.n_sites())
    throw std::invalid_argument("state and Hamiltonian registers differ");
  return ExactPropagator(h).evolve(s, t);
}

namespace {

// x <- cos(angle) x - i sin(angle) P x. P is an involution, so this is the
// exact one-term exponential.
void exp_pauli_in_place(const PauliString& p, double angle, Eigen::VectorXcd& x) {
  const std::complex<double> mi{0.0, -1.0};
  Eigen::VectorXcd px = apply_pauli(p, x);
  x = std::cos(angle) * x + (mi * std::sin(angle)) * px;
}

}  // namespace

StateVector apply_exp_pauli_term(const HamiltonianTerm& term, double tau, const StateVector& s) {
  if (term.string.n_sites() != s.n_sites())
    throw std::invalid_argument("state and term registers differ");
  Eigen::VectorXcd x = s.amplitudes();
  exp_pauli_in_place(term.string, term.coefficient * tau, x);
  return StateVector(s.n_sites(), std::move(x));
}

Eigen::VectorXcd trotter_evolve_raw(const HamiltonianSum& h, Eigen::VectorXcd x, double t, int n) {
  if (n < 1) throw std::invalid_argument("trotter step count must be >= 1");
  if (x.size() != h.dimension())
    throw std::invalid_argument("state dimension does not match Hamiltonian register");
  HamiltonianSum canon = h.canonicalized();
  double tau = t / n;
  for (int rep = 0; rep < n; ++rep)
    for (const auto& term : canon.terms())
      exp_pauli_in_place(term.string, term.coefficient * tau, x);
  return x;
}

StateVector trotter_evolve(const HamiltonianSum& h, const StateVector& s, double t, int n) {
  if (h.n_sites() != s.n_sites())
    throw std::invalid_argument("state and Hamiltonian registers differ");
  return StateVector(s.n_sites(), trotter_evolve_raw(h, s.amplitudes(), t, n));
}

StateVector evolve(const HamiltonianSum& h, const StateVector& s, double t,
                   const EvolutionMethod& method) {
  switch (method.kind) {
    case EvolutionMethod::Kind::Exact: return exact_evolve(h, s, t);
    case EvolutionMethod::Kind::Trotter: return trotter_evolve(h, s, t, method.trotter_steps);
  }
  throw std::invalid_argument("bad evolution method");
}

StateVector evolve(const EvolutionSpec& spec, const StateVector& s) {
  return evolve(spec.hamiltonian, s, spec.total_time, spec.method);
}

void write_state_csv(std::ostream& out, const StateVector& s) {
  out << "index,real,imag\n";
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    const auto& a = s.amplitudes()[i];
    out << i << ',' << format_double_17(a.real()) << ',' << format_double_17(a.imag()) << '\n';
  }
}

}  // namespace effham
