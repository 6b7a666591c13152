#pragma once

// Computational-basis bookkeeping for chains of spin-1/2 sites.
//
// Basis convention: site 0 is the most significant bit of a basis index and a
// set bit means spin-up, so the binary literal of an index reads the chain
// left to right. For a single site this gives |down> = index 0, |up> = index 1.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinchain {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest chain handled with dense Hamiltonians.
inline constexpr int kDenseSiteLimit = 14;
/// Largest composite system evolved as a full density matrix.
inline constexpr int kDensityMatrixSiteLimit = 10;

enum class Spin : std::uint8_t { down = 0, up = 1 };

class BasisIndex {
 public:
  constexpr BasisIndex() = default;
  constexpr explicit BasisIndex(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }
  constexpr auto operator<=>(const BasisIndex&) const = default;

 private:
  std::uint64_t value_ = 0;
};

/// Dimension 2^n, checked against the dense limit.
std::size_t hilbert_dimension(int n_sites);

BasisIndex basis_index(std::span<const Spin> config);
std::vector<Spin> configuration(BasisIndex index, int n_sites);

/// Bit mask selecting `site` in a basis index of an n-site system.
constexpr std::uint64_t site_mask(int site, int n_sites) {
  return std::uint64_t{1} << (n_sites - 1 - site);
}

enum class SiteOperator { sz, s_plus, s_minus, sx, sy, sigma_z, sigma_plus, sigma_minus, sigma_x, sigma_y };

/// Embeds a one-site operator at `site`, identity elsewhere.
Matrix single_site_operator(SiteOperator kind, int site, int n_sites);

/// The 2x2 matrix of `kind` in the (down, up) basis.
Eigen::Matrix2cd local_operator(SiteOperator kind);

/// Total S_z = sum of sz over all sites (diagonal).
Matrix total_sz(int n_sites);

/// Mirror operator |s_0,...,s_{n-1}> -> |s_{n-1},...,s_0>.
Matrix inversion_operator(int n_sites);

/// sigma_x on every site.
Matrix global_flip_operator(int n_sites);

Matrix kron(const Matrix& a, const Matrix& b);
double operator_norm(const Matrix& a);

class PureState {
 public:
  /// Throws std::invalid_argument unless the length is a power of two and the norm is 1.
  explicit PureState(Vector amplitudes);

  static PureState basis_state(BasisIndex index, int n_sites);
  static PureState from_spins(std::span<const Spin> config);

  const Vector& amplitudes() const { return amplitudes_; }
  int n_sites() const { return n_sites_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }

 private:
  Vector amplitudes_;
  int n_sites_ = 0;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity and unit trace to 1e-12 and positivity to -1e-10.
  explicit DensityMatrix(Matrix entries);

  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_sites);

  const Matrix& entries() const { return entries_; }
  int n_sites() const { return n_sites_; }

 private:
  Matrix entries_;
  int n_sites_ = 0;
};

/// Diagnostic form of the DensityMatrix invariants; does not throw.
bool is_density_matrix(const Matrix& m, double tol = 1e-10);

/// Trace norm distance (1/2)||a - b||_1 of Hermitian operators.
double trace_distance(const Matrix& a, const Matrix& b);

/// Places `qubit` at site 0 in front of the channel state.
PureState embed_pair(const Eigen::Vector2cd& qubit, const PureState& channel_state);

/// Partial trace keeping the listed sites (strictly increasing) in their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
/// Operator-level variant, used where the input is not normalised.
Matrix partial_trace(const Matrix& op, int n_sites, std::span<const int> keep);

struct MagnetizationSector {
  int up_count = 0;
  std::vector<BasisIndex> members;  // ascending
};

struct SectorDecomposition {
  int n_sites = 0;
  std::vector<MagnetizationSector> sectors;  // indexed by up_count
};

SectorDecomposition magnetization_sectors(int n_sites);

}  // namespace spinchain
