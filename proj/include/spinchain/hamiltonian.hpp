#pragma once

#include <optional>
#include <vector>

#include "spinchain/hilbert.hpp"

namespace spinchain {

/// spin_half uses s = sigma/2 in both the exchange and the Zeeman term;
/// pauli uses the bare Pauli matrices. H_pauli(J, B) == H_spin_half(4J, 2B).
enum class Convention { spin_half, pauli };

struct ChainSpec {
  int n_sites = 4;
  double coupling = 1.0;  // J; positive is ferromagnetic
  double field = 1.0;     // B
  Convention convention = Convention::spin_half;

  /// Throws std::invalid_argument for fewer than two sites or more than the dense limit.
  void validate() const;
};

/// -J sum_i S_i.S_{i+1} + B sum_i S_z,i over an open chain of spec.n_sites sites.
Matrix build_channel_hamiltonian(const ChainSpec& spec);

/// Same operator form for the chain including the injection site 0; spec.n_sites counts sites 0..N.
Matrix build_full_hamiltonian(const ChainSpec& spec);

/// Eigen-decomposition of a Hermitian operator.
///
/// Columns of vectors() are eigenvectors ordered by ascending energy. When built
/// per magnetization sector each column carries the up-spin count of its block,
/// and each eigenvector is supported on that block only.
class Spectrum {
 public:
  Spectrum(RealVector energies, Matrix vectors, std::optional<std::vector<int>> sector_tags = std::nullopt);

  const RealVector& energies() const { return energies_; }
  const Matrix& vectors() const { return vectors_; }
  const std::optional<std::vector<int>>& sector_tags() const { return sector_tags_; }

  Eigen::Index dimension() const { return energies_.size(); }
  int n_sites() const { return n_sites_; }
  double energy(Eigen::Index level) const { return energies_(level); }
  Vector state(Eigen::Index level) const { return vectors_.col(level); }

  /// Reassembles V diag(E) V^dagger.
  Matrix reconstruct() const;

 private:
  RealVector energies_;
  Matrix vectors_;
  std::optional<std::vector<int>> sector_tags_;
  int n_sites_ = 0;
};

/// Throws std::invalid_argument if H is not Hermitian to 1e-10, or if
/// use_sectors is set and H couples different magnetization sectors.
Spectrum diagonalize(const Matrix& hamiltonian, bool use_sectors = false);

/// V e^{-i diag(E) t} V^dagger psi, with hbar = 1.
Vector evolve(const Spectrum& spectrum, double t, const Vector& psi);
PureState evolve(const Spectrum& spectrum, double t, const PureState& psi);

/// Dense e^{-iHt}.
Matrix propagator(const Spectrum& spectrum, double t);

struct SymmetryReport {
  double jz_commutator = 0.0;         // ||[H, J_z]||
  double inversion_commutator = 0.0;  // ||[H, Lambda]||
  double jz_inversion_commutator = 0.0;
  double field_flip_residual = 0.0;   // ||X H(J,B) - H(J,-B) X||, X = sigma_x on every site

  double max_residual() const;
};

/// Operator norms of the symmetry residuals of the chain Hamiltonian.
SymmetryReport symmetry_checks(const ChainSpec& spec);

}  // namespace spinchain
