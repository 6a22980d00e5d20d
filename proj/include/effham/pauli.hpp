#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace effham {

// Single-site Pauli axis. The numeric order I < X < Y < Z fixes the
// lexicographic canonical ordering used for serialization and Trotter
// sequencing.
enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char axis_to_char(Axis a);
Axis axis_from_char(char c);

// Tensor product of single-site Paulis, written like "ZIIXI". Site 1 is the
// first character and maps to the most significant bit of a basis index.
class PauliString {
 public:
  explicit PauliString(int n_sites);

  static PauliString parse(std::string_view text);
  static PauliString single(int n_sites, int site, Axis axis);

  int n_sites() const { return static_cast<int>(axes_.size()); }
  Axis axis(int site) const;           // sites are 1-based
  void set_axis(int site, Axis axis);  // sites are 1-based
  int weight() const;                  // number of non-identity sites
  bool is_identity() const { return weight() == 0; }
  std::string str() const;

  friend bool operator==(const PauliString& a, const PauliString& b) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    return a.axes_ <=> b.axes_;
  }

 private:
  std::vector<Axis> axes_;
};

struct HamiltonianTerm {
  double coefficient = 0.0;
  PauliString string{1};
};

// Real-weighted sum of Pauli strings on a fixed register. The container
// tolerates repeated strings while a sum is being assembled; canonicalized()
// merges duplicates, drops zeros and sorts terms lexicographically.
class HamiltonianSum {
 public:
  explicit HamiltonianSum(int n_sites);
  HamiltonianSum(int n_sites, std::vector<HamiltonianTerm> terms);

  void add(double coefficient, const PauliString& string);
  HamiltonianSum canonicalized() const;

  int n_sites() const { return n_sites_; }
  std::int64_t dimension() const { return std::int64_t{1} << n_sites_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  double one_norm() const;  // sum of |coefficient|

  // Structured text: "sites N" header, then one "<coefficient> <axes>" line
  // per canonical term. Round-trips exactly.
  std::string to_text() const;
  static HamiltonianSum from_text(std::string_view text);

 private:
  int n_sites_;
  std::vector<HamiltonianTerm> terms_;
};

// Canonical difference a - b; terms that cancel disappear.
HamiltonianSum subtract(const HamiltonianSum& a, const HamiltonianSum& b);

// y = P x without forming the matrix.
Eigen::VectorXcd apply_pauli(const PauliString& p, const Eigen::VectorXcd& x);

// y = H x, one sparse pass per term.
Eigen::VectorXcd apply_sum(const HamiltonianSum& h, const Eigen::VectorXcd& x);

inline constexpr int kDenseSiteLimit = 12;

// Explicit matrices via Kronecker products. This route shares no code with
// apply_sum(), so the two can cross-check each other.
Eigen::MatrixXcd dense_matrix(const PauliString& p);
Eigen::MatrixXcd dense_matrix(const HamiltonianSum& h, int site_limit = kDenseSiteLimit);

}  // namespace effham
