#include "effham/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "effham/numfmt.hpp"

namespace effham {

namespace {

constexpr int kMaxSites = 28;

void check_site_count(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("site count must be in [1, " + std::to_string(kMaxSites) +
                                "], got " + std::to_string(n_sites));
}

}  // namespace

char axis_to_char(Axis a) {
  switch (a) {
    case Axis::I: return 'I';
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  throw std::invalid_argument("bad axis value");
}

Axis axis_from_char(char c) {
  switch (c) {
    case 'I': return Axis::I;
    case 'X': return Axis::X;
    case 'Y': return Axis::Y;
    case 'Z': return Axis::Z;
    default:
      throw std::invalid_argument(std::string("bad axis character '") + c + "'");
  }
}

PauliString::PauliString(int n_sites) {
  check_site_count(n_sites);
  axes_.assign(static_cast<std::size_t>(n_sites), Axis::I);
}

PauliString PauliString::parse(std::string_view text) {
  PauliString p(static_cast<int>(text.empty() ? 1 : text.size()));
  if (text.empty()) throw std::invalid_argument("empty Pauli string");
  for (std::size_t i = 0; i < text.size(); ++i) p.axes_[i] = axis_from_char(text[i]);
  return p;
}

PauliString PauliString::single(int n_sites, int site, Axis axis) {
  PauliString p(n_sites);
  p.set_axis(site, axis);
  return p;
}

Axis PauliString::axis(int site) const {
  if (site < 1 || site > n_sites())
    throw std::invalid_argument("site index " + std::to_string(site) + " out of range");
  return axes_[static_cast<std::size_t>(site - 1)];
}

void PauliString::set_axis(int site, Axis axis) {
  if (site < 1 || site > n_sites())
    throw std::invalid_argument("site index " + std::to_string(site) + " out of range");
  axes_[static_cast<std::size_t>(site - 1)] = axis;
}

int PauliString::weight() const {
  return static_cast<int>(
      std::count_if(axes_.begin(), axes_.end(), [](Axis a) { return a != Axis::I; }));
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(axes_.size());
  for (Axis a : axes_) s.push_back(axis_to_char(a));
  return s;
}

HamiltonianSum::HamiltonianSum(int n_sites) : n_sites_(n_sites) { check_site_count(n_sites); }

HamiltonianSum::HamiltonianSum(int n_sites, std::vector<HamiltonianTerm> terms)
    : n_sites_(n_sites) {
  check_site_count(n_sites);
  for (auto& t : terms) add(t.coefficient, t.string);
}

void HamiltonianSum::add(double coefficient, const PauliString& string) {
  if (!std::isfinite(coefficient))
    throw std::invalid_argument("term coefficient must be finite");
  if (string.n_sites() != n_sites_)
    throw std::invalid_argument("term acts on " + std::to_string(string.n_sites()) +
                                " sites, sum is on " + std::to_string(n_sites_));
  terms_.push_back({coefficient, string});
}

HamiltonianSum HamiltonianSum::canonicalized() const {
  std::map<PauliString, double> merged;
  for (const auto& t : terms_) merged[t.string] += t.coefficient;
  HamiltonianSum out(n_sites_);
  for (const auto& [string, coefficient] : merged)
    if (coefficient != 0.0) out.terms_.push_back({coefficient, string});
  return out;
}

double HamiltonianSum::one_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

std::string HamiltonianSum::to_text() const {
  HamiltonianSum canon = canonicalized();
  std::string out = "sites " + std::to_string(n_sites_) + "\n";
  for (const auto& t : canon.terms_)
    out += format_double(t.coefficient) + " " + t.string.str() + "\n";
  return out;
}

HamiltonianSum HamiltonianSum::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty Hamiltonian text");
  std::istringstream header(line);
  std::string tag;
  int n_sites = 0;
  if (!(header >> tag >> n_sites) || tag != "sites")
    throw std::invalid_argument("expected 'sites N' header, got '" + line + "'");
  HamiltonianSum h(n_sites);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto space = line.find(' ');
    if (space == std::string::npos)
      throw std::invalid_argument("bad term line '" + line + "'");
    double c = parse_double(std::string_view(line).substr(0, space));
    PauliString p = PauliString::parse(std::string_view(line).substr(space + 1));
    h.add(c, p);
  }
  return h;
}

HamiltonianSum subtract(const HamiltonianSum& a, const HamiltonianSum& b) {
  if (a.n_sites() != b.n_sites())
    throw std::invalid_argument("cannot subtract sums on different registers");
  HamiltonianSum out(a.n_sites());
  for (const auto& t : a.terms()) out.add(t.coefficient, t.string);
  for (const auto& t : b.terms()) out.add(-t.coefficient, t.string);
  return out.canonicalized();
}

namespace {

struct TermMasks {
  std::uint64_t flip = 0;   // X and Y sites toggle the basis index
  std::uint64_t phase = 0;  // Z and Y sites contribute (-1)^bit
  std::complex<double> unit{1.0, 0.0};  // i^(#Y)
};

TermMasks masks_of(const PauliString& p) {
  TermMasks m;
  int n = p.n_sites();
  int n_y = 0;
  for (int site = 1; site <= n; ++site) {
    std::uint64_t bit = std::uint64_t{1} << (n - site);
    switch (p.axis(site)) {
      case Axis::I: break;
      case Axis::X: m.flip |= bit; break;
      case Axis::Y: m.flip |= bit; m.phase |= bit; ++n_y; break;
      case Axis::Z: m.phase |= bit; break;
    }
  }
  static const std::complex<double> units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  m.unit = units[n_y & 3];
  return m;
}

void accumulate_term(std::complex<double> scale, const TermMasks& m,
                     const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
  const auto dim = static_cast<std::uint64_t>(x.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    double sign = (std::popcount(b & m.phase) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(b ^ m.flip)] +=
        scale * sign * x[static_cast<Eigen::Index>(b)];
  }
}

}  // namespace

Eigen::VectorXcd apply_pauli(const PauliString& p, const Eigen::VectorXcd& x) {
  const auto dim = std::int64_t{1} << p.n_sites();
  if (x.size() != dim)
    throw std::invalid_argument("state dimension does not match Pauli string register");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  TermMasks m = masks_of(p);
  accumulate_term(m.unit, m, x, out);
  return out;
}

Eigen::VectorXcd apply_sum(const HamiltonianSum& h, const Eigen::VectorXcd& x) {
  if (x.size() != h.dimension())
    throw std::invalid_argument("state dimension does not match Hamiltonian register");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(x.size());
  for (const auto& t : h.terms()) {
    TermMasks m = masks_of(t.string);
    accumulate_term(t.coefficient * m.unit, m, x, out);
  }
  return out;
}

namespace {

Eigen::Matrix2cd single_site_matrix(Axis a) {
  const std::complex<double> i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (a) {
    case Axis::I: m << 1, 0, 0, 1; break;
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, -i, i, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Eigen::MatrixXcd dense_matrix(const PauliString& p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
  for (int site = 1; site <= p.n_sites(); ++site)
    m = kron(m, single_site_matrix(p.axis(site)));
  return m;
}

Eigen::MatrixXcd dense_matrix(const HamiltonianSum& h, int site_limit) {
  if (h.n_sites() > site_limit)
    throw std::invalid_argument("dense matrix limited to " + std::to_string(site_limit) +
                                " sites, sum is on " + std::to_string(h.n_sites()));
  const auto dim = h.dimension();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.coefficient * dense_matrix(t.string);
  return m;
}

}  // namespace effham
