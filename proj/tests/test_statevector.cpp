#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "effham/statevector.hpp"
#include "effham/tfim.hpp"

using namespace effham;
using cd = std::complex<double>;

namespace {

StateVector random_normalized(std::mt19937& rng, int n_sites) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(std::int64_t{1} << n_sites);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cd(g(rng), g(rng));
  return StateVector::normalized(n_sites, v);
}

HamiltonianSum random_sum(std::mt19937& rng, int n_sites, int n_terms) {
  std::uniform_int_distribution<int> axis(0, 3);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  HamiltonianSum h(n_sites);
  for (int t = 0; t < n_terms; ++t) {
    PauliString p(n_sites);
    for (int s = 1; s <= n_sites; ++s) p.set_axis(s, static_cast<Axis>(axis(rng)));
    h.add(coeff(rng), p);
  }
  return h;
}

}  // namespace

TEST_CASE("state construction and validation") {
  StateVector zero = StateVector::basis_state(2, 0);
  CHECK(zero.amplitudes()[0] == cd(1.0, 0.0));
  CHECK(zero.dimension() == 4);

  StateVector bits = StateVector::from_bitstring("10");
  CHECK(bits.amplitudes()[2] == cd(1.0, 0.0));  // site 1 is the high bit

  Eigen::VectorXcd bad = Eigen::VectorXcd::Zero(4);
  bad[0] = 0.5;
  CHECK_THROWS_AS(StateVector(2, bad), std::invalid_argument);
  CHECK_THROWS_AS(StateVector(2, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::basis_state(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::from_bitstring("012"), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::normalized(2, Eigen::VectorXcd::Zero(4)),
                  std::invalid_argument);
}

TEST_CASE("inner product conjugates the first argument") {
  StateVector zero = StateVector::basis_state(1, 0);
  StateVector one = StateVector::basis_state(1, 1);
  CHECK(inner_product(zero, zero) == cd(1.0, 0.0));
  CHECK(inner_product(zero, one) == cd(0.0, 0.0));

  Eigen::VectorXcd v(2);
  v << cd(0.0, 1.0), cd(0.0, 0.0);
  StateVector iz(1, v);
  CHECK(inner_product(zero, iz) == cd(0.0, 1.0));
  CHECK(inner_product(iz, zero) == cd(0.0, -1.0));

  std::mt19937 rng(1);
  for (int rep = 0; rep < 5; ++rep) {
    StateVector a = random_normalized(rng, 3), b = random_normalized(rng, 3);
    CHECK(std::abs(inner_product(a, b)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("exact evolution basics") {
  HamiltonianSum empty(3);
  StateVector s = StateVector::basis_state(3, 5);
  StateVector evolved = exact_evolve(empty, s, 1.7);
  CHECK(evolved.amplitudes() == s.amplitudes());  // bitwise identity

  HamiltonianSum z(1);
  z.add(1.0, PauliString::parse("Z"));
  StateVector zero = StateVector::basis_state(1, 0);
  StateVector ph = exact_evolve(z, zero, 0.3);
  CHECK(std::abs(ph.amplitudes()[0] - std::exp(cd(0.0, -0.3))) < 1e-14);

  std::mt19937 rng(5);
  HamiltonianSum h = random_sum(rng, 3, 5);
  StateVector r = random_normalized(rng, 3);
  StateVector same = exact_evolve(h, r, 0.0);
  CHECK((same.amplitudes() - r.amplitudes()).norm() == 0.0);
}

TEST_CASE("exact evolution is unitary and has the group property") {
  std::mt19937 rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    HamiltonianSum h = random_sum(rng, 4, 8);
    StateVector s = random_normalized(rng, 4);
    ExactPropagator prop(h);
    StateVector a = prop.evolve(s, 0.7);
    CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-10);
    StateVector b = prop.evolve(a, 0.55);
    StateVector direct = prop.evolve(s, 1.25);
    CHECK((b.amplitudes() - direct.amplitudes()).norm() < 1e-9);
  }
}

TEST_CASE("single-term exponential") {
  HamiltonianTerm zero_term{0.0, PauliString::parse("XX")};
  StateVector s = StateVector::basis_state(2, 1);
  CHECK(apply_exp_pauli_term(zero_term, 0.8, s).amplitudes() == s.amplitudes());

  // half X rotation sends |0> to -i|1>
  HamiltonianTerm x{1.0, PauliString::parse("X")};
  StateVector zero = StateVector::basis_state(1, 0);
  StateVector rot = apply_exp_pauli_term(x, std::numbers::pi / 2, zero);
  CHECK(std::abs(rot.amplitudes()[0]) < 1e-15);
  CHECK(std::abs(rot.amplitudes()[1] - cd(0.0, -1.0)) < 1e-15);

  std::mt19937 rng(13);
  for (int rep = 0; rep < 6; ++rep) {
    HamiltonianSum h = random_sum(rng, 3, 1).canonicalized();
    if (h.empty()) continue;
    StateVector s3 = random_normalized(rng, 3);
    StateVector term = apply_exp_pauli_term(h.terms()[0], 0.37, s3);
    StateVector exact = exact_evolve(h, s3, 0.37);
    CHECK((term.amplitudes() - exact.amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("trotter evolution is exact for commuting sums") {
  HamiltonianSum zs(3);
  zs.add(0.7, PauliString::parse("ZII"));
  zs.add(-1.1, PauliString::parse("IZI"));
  zs.add(0.4, PauliString::parse("ZZZ"));
  std::mt19937 rng(17);
  StateVector s = random_normalized(rng, 3);
  for (int n : {1, 3, 10}) {
    StateVector t = trotter_evolve(zs, s, 1.3, n);
    StateVector e = exact_evolve(zs, s, 1.3);
    CHECK((t.amplitudes() - e.amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("trotter error halves when steps double") {
  TFIMParams p{3, 10.0, 1.0};
  HamiltonianSum h = build_tfim(p);
  StateVector s = initial_states(3)[0];
  StateVector exact = exact_evolve(h, s, 1.0);
  double prev = 0.0;
  for (int n : {100, 200, 400, 800, 1600}) {
    double err = (trotter_evolve(h, s, 1.0, n).amplitudes() - exact.amplitudes()).norm();
    if (prev > 0.0) {
      double ratio = prev / err;
      CHECK(ratio > 1.8);
      CHECK(ratio < 2.2);
    }
    prev = err;
  }
}

TEST_CASE("trotter preserves norm and is deterministic") {
  std::mt19937 rng(21);
  HamiltonianSum h = random_sum(rng, 4, 6);
  StateVector s = random_normalized(rng, 4);
  StateVector a = trotter_evolve(h, s, 2.1, 37);
  StateVector b = trotter_evolve(h, s, 2.1, 37);
  CHECK(a.amplitudes() == b.amplitudes());
  CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-10);
}

TEST_CASE("evolution method validation") {
  CHECK_THROWS_AS(EvolutionMethod::trotter(0), std::invalid_argument);
  CHECK(EvolutionMethod::trotter(5).trotter_steps == 5);
}
