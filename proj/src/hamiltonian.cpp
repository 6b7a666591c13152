#include "spinchain/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spinchain {

void ChainSpec::validate() const {
  if (n_sites < 2) throw std::invalid_argument("chain needs at least two sites");
  if (n_sites > kDenseSiteLimit) {
    throw std::invalid_argument("chain of " + std::to_string(n_sites) + " sites exceeds the dense limit of " +
                                std::to_string(kDenseSiteLimit));
  }
  if (!std::isfinite(coupling) || !std::isfinite(field)) {
    throw std::invalid_argument("coupling and field must be finite");
  }
}

namespace {

// The exchange term is built directly on basis indices: for an open bond (a, b)
// with S = sigma/2, S_a.S_b = Sz_a Sz_b + (S+_a S-_b + S-_a S+_b)/2.
Matrix heisenberg_chain(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
  // sigma = 2 s, so the pauli convention is the spin_half one at (4J, 2B).
  const double scale_j = spec.convention == Convention::pauli ? 4.0 : 1.0;
  const double scale_b = spec.convention == Convention::pauli ? 2.0 : 1.0;
  const double J = scale_j * spec.coupling;
  const double B = scale_b * spec.field;

  Matrix h = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto c = static_cast<std::uint64_t>(col);
    const int ups = std::popcount(c);
    h(col, col) += B * 0.5 * (2 * ups - n);
    for (int site = 0; site + 1 < n; ++site) {
      const std::uint64_t ma = site_mask(site, n);
      const std::uint64_t mb = site_mask(site + 1, n);
      const bool a = c & ma;
      const bool b = c & mb;
      h(col, col) += -J * (a == b ? 0.25 : -0.25);
      if (a != b) {
        const auto flipped = static_cast<Eigen::Index>(c ^ ma ^ mb);
        h(flipped, col) += -J * 0.5;
      }
    }
  }
  return h;
}

void check_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: matrix is not square");
  if (h.size() > 0 && (h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("diagonalize: matrix is not Hermitian");
  }
}

}  // namespace

Matrix build_channel_hamiltonian(const ChainSpec& spec) { return heisenberg_chain(spec); }

Matrix build_full_hamiltonian(const ChainSpec& spec) { return heisenberg_chain(spec); }

Spectrum::Spectrum(RealVector energies, Matrix vectors, std::optional<std::vector<int>> sector_tags)
    : energies_(std::move(energies)), vectors_(std::move(vectors)), sector_tags_(std::move(sector_tags)) {
  if (vectors_.rows() != energies_.size() || vectors_.cols() != energies_.size()) {
    throw std::invalid_argument("Spectrum: eigenvector matrix does not match energy count");
  }
  if (sector_tags_ && static_cast<Eigen::Index>(sector_tags_->size()) != energies_.size()) {
    throw std::invalid_argument("Spectrum: sector tag count does not match energy count");
  }
  const auto dim = static_cast<std::uint64_t>(energies_.size());
  n_sites_ = std::has_single_bit(dim) ? std::bit_width(dim) - 1 : -1;
}

Matrix Spectrum::reconstruct() const {
  return vectors_ * energies_.cast<Complex>().asDiagonal() * vectors_.adjoint();
}

Spectrum diagonalize(const Matrix& hamiltonian, bool use_sectors) {
  check_hermitian(hamiltonian);
  const Eigen::Index dim = hamiltonian.rows();
  const Matrix herm = 0.5 * (hamiltonian + hamiltonian.adjoint());

  if (!use_sectors) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
    return Spectrum(es.eigenvalues(), es.eigenvectors());
  }

  const auto udim = static_cast<std::uint64_t>(dim);
  if (!std::has_single_bit(udim)) throw std::invalid_argument("diagonalize: sectors need a 2^n dimension");
  const int n = std::bit_width(udim) - 1;

  const double scale = std::max(1.0, herm.cwiseAbs().maxCoeff());
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (std::popcount(static_cast<std::uint64_t>(r)) != std::popcount(static_cast<std::uint64_t>(c)) &&
          std::abs(herm(r, c)) > 1e-12 * scale) {
        throw std::invalid_argument("diagonalize: operator does not conserve magnetization");
      }
    }
  }

  RealVector energies(dim);
  Matrix vectors = Matrix::Zero(dim, dim);
  std::vector<int> tags(static_cast<std::size_t>(dim));
  Eigen::Index next = 0;
  for (const auto& sector : magnetization_sectors(n).sectors) {
    const auto m = static_cast<Eigen::Index>(sector.members.size());
    Matrix block(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        block(i, j) = herm(static_cast<Eigen::Index>(sector.members[static_cast<std::size_t>(i)].value()),
                           static_cast<Eigen::Index>(sector.members[static_cast<std::size_t>(j)].value()));
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
    for (Eigen::Index j = 0; j < m; ++j) {
      energies(next) = es.eigenvalues()(j);
      for (Eigen::Index i = 0; i < m; ++i) {
        vectors(static_cast<Eigen::Index>(sector.members[static_cast<std::size_t>(i)].value()), next) =
            es.eigenvectors()(i, j);
      }
      tags[static_cast<std::size_t>(next)] = sector.up_count;
      ++next;
    }
  }

  // Global ascending order; stable so exact ties keep sector order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return energies(a) < energies(b); });
  RealVector sorted_e(dim);
  Matrix sorted_v(dim, dim);
  std::vector<int> sorted_tags(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    sorted_e(k) = energies(src);
    sorted_v.col(k) = vectors.col(src);
    sorted_tags[static_cast<std::size_t>(k)] = tags[static_cast<std::size_t>(src)];
  }
  return Spectrum(std::move(sorted_e), std::move(sorted_v), std::move(sorted_tags));
}

Vector evolve(const Spectrum& spectrum, double t, const Vector& psi) {
  if (psi.size() != spectrum.dimension()) throw std::invalid_argument("evolve: dimension mismatch");
  Vector coeffs = spectrum.vectors().adjoint() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -spectrum.energy(k) * t);
  }
  return spectrum.vectors() * coeffs;
}

PureState evolve(const Spectrum& spectrum, double t, const PureState& psi) {
  return PureState(evolve(spectrum, t, psi.amplitudes()));
}

Matrix propagator(const Spectrum& spectrum, double t) {
  Vector phases(spectrum.dimension());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -spectrum.energy(k) * t);
  return spectrum.vectors() * phases.asDiagonal() * spectrum.vectors().adjoint();
}

double SymmetryReport::max_residual() const {
  return std::max({jz_commutator, inversion_commutator, jz_inversion_commutator, field_flip_residual});
}

SymmetryReport symmetry_checks(const ChainSpec& spec) {
  const Matrix h = build_full_hamiltonian(spec);
  ChainSpec flipped = spec;
  flipped.field = -spec.field;
  const Matrix h_flipped = build_full_hamiltonian(flipped);

  const Matrix jz = total_sz(spec.n_sites);
  const Matrix inv = inversion_operator(spec.n_sites);
  const Matrix flip = global_flip_operator(spec.n_sites);

  SymmetryReport report;
  report.jz_commutator = operator_norm(h * jz - jz * h);
  report.inversion_commutator = operator_norm(h * inv - inv * h);
  report.jz_inversion_commutator = operator_norm(jz * inv - inv * jz);
  report.field_flip_residual = operator_norm(flip * h - h_flipped * flip);
  return report;
}

}  // namespace spinchain
