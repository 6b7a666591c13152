#include "spinchain/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinchain {

namespace {

int sites_for_dimension(Eigen::Index dim) {
  if (dim <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return std::bit_width(static_cast<std::uint64_t>(dim)) - 1;
}

}  // namespace

std::size_t hilbert_dimension(int n_sites) {
  if (n_sites < 0 || n_sites > 30) {
    throw std::invalid_argument("site count " + std::to_string(n_sites) + " out of range");
  }
  return std::size_t{1} << n_sites;
}

BasisIndex basis_index(std::span<const Spin> config) {
  if (config.empty()) throw std::invalid_argument("basis_index: empty configuration");
  std::uint64_t value = 0;
  for (Spin s : config) value = (value << 1) | static_cast<std::uint64_t>(s);
  return BasisIndex{value};
}

std::vector<Spin> configuration(BasisIndex index, int n_sites) {
  if (index.value() >= hilbert_dimension(n_sites)) {
    throw std::invalid_argument("basis index out of range for site count");
  }
  std::vector<Spin> config(static_cast<std::size_t>(n_sites));
  for (int site = 0; site < n_sites; ++site) {
    config[static_cast<std::size_t>(site)] =
        (index.value() & site_mask(site, n_sites)) ? Spin::up : Spin::down;
  }
  return config;
}

Eigen::Matrix2cd local_operator(SiteOperator kind) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  // Rows/columns: 0 = down, 1 = up.
  switch (kind) {
    case SiteOperator::sigma_z:
      m(0, 0) = -1.0;
      m(1, 1) = 1.0;
      break;
    case SiteOperator::sigma_plus:
      m(1, 0) = 1.0;
      break;
    case SiteOperator::sigma_minus:
      m(0, 1) = 1.0;
      break;
    case SiteOperator::sigma_x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case SiteOperator::sigma_y:
      // <up|sigma_y|down> = -i
      m(1, 0) = -i;
      m(0, 1) = i;
      break;
    case SiteOperator::sz:
      return 0.5 * local_operator(SiteOperator::sigma_z);
    case SiteOperator::s_plus:  // sx + i sy, the same matrix as sigma_plus
      return local_operator(SiteOperator::sigma_plus);
    case SiteOperator::s_minus:
      return local_operator(SiteOperator::sigma_minus);
    case SiteOperator::sx:
      return 0.5 * local_operator(SiteOperator::sigma_x);
    case SiteOperator::sy:
      return 0.5 * local_operator(SiteOperator::sigma_y);
  }
  return m;
}

Matrix single_site_operator(SiteOperator kind, int site, int n_sites) {
  if (n_sites < 1 || site < 0 || site >= n_sites) {
    throw std::invalid_argument("single_site_operator: site " + std::to_string(site) +
                                " out of range for " + std::to_string(n_sites) + " sites");
  }
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  const Eigen::Matrix2cd local = local_operator(kind);
  const std::uint64_t mask = site_mask(site, n_sites);

  // Only the target bit changes; every column has at most two nonzeros.
  Matrix op = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto c = static_cast<std::uint64_t>(col);
    const int in_bit = (c & mask) ? 1 : 0;
    for (int out_bit = 0; out_bit < 2; ++out_bit) {
      const Complex amp = local(out_bit, in_bit);
      if (amp == Complex{}) continue;
      const std::uint64_t row = out_bit ? (c | mask) : (c & ~mask);
      op(static_cast<Eigen::Index>(row), col) += amp;
    }
  }
  return op;
}

Matrix total_sz(int n_sites) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  Matrix op = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const int ups = std::popcount(static_cast<std::uint64_t>(k));
    op(k, k) = 0.5 * (2 * ups - n_sites);
  }
  return op;
}

Matrix inversion_operator(int n_sites) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  Matrix op = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    std::uint64_t mirrored = 0;
    for (int b = 0; b < n_sites; ++b) {
      if (static_cast<std::uint64_t>(k) & (std::uint64_t{1} << b)) {
        mirrored |= std::uint64_t{1} << (n_sites - 1 - b);
      }
    }
    op(static_cast<Eigen::Index>(mirrored), k) = 1.0;
  }
  return op;
}

Matrix global_flip_operator(int n_sites) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  Matrix op = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) op(dim - 1 - k, k) = 1.0;
  return op;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  n_sites_ = sites_for_dimension(amplitudes_.size());
  const double norm = amplitudes_.norm();
  if (std::abs(norm * norm - 1.0) > 1e-12) {
    throw std::invalid_argument("PureState: squared norm " + std::to_string(norm * norm) + " != 1");
  }
}

PureState PureState::basis_state(BasisIndex index, int n_sites) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  if (index.value() >= static_cast<std::uint64_t>(dim)) {
    throw std::invalid_argument("basis_state: index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(static_cast<Eigen::Index>(index.value())) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::from_spins(std::span<const Spin> config) {
  return basis_state(basis_index(config), static_cast<int>(config.size()));
}

bool is_density_matrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(m.trace() - Complex{1.0}) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw std::invalid_argument("DensityMatrix: not square");
  n_sites_ = sites_for_dimension(entries_.rows());
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex{1.0}) > 1e-12) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_sites) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix d = a - b;
  const Matrix herm = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

PureState embed_pair(const Eigen::Vector2cd& qubit, const PureState& channel_state) {
  if (std::abs(qubit.squaredNorm() - 1.0) > 1e-12) {
    throw std::invalid_argument("embed_pair: qubit not normalised");
  }
  const Vector& chan = channel_state.amplitudes();
  const Eigen::Index d = chan.size();
  Vector out(2 * d);
  out.head(d) = qubit(0) * chan;
  out.tail(d) = qubit(1) * chan;
  return PureState(std::move(out));
}

Matrix partial_trace(const Matrix& op, int n_sites, std::span<const int> keep) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  if (op.rows() != dim || op.cols() != dim) {
    throw std::invalid_argument("partial_trace: operator does not match site count");
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep list is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n_sites || (i > 0 && keep[i] <= keep[i - 1])) {
      throw std::invalid_argument("partial_trace: keep list must be strictly increasing and in range");
    }
  }

  const int n_keep = static_cast<int>(keep.size());
  const int n_trace = n_sites - n_keep;
  std::vector<int> traced;
  for (int s = 0; s < n_sites; ++s) {
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);
  }

  // Scatter the bits of a compact index into the positions of `sites`.
  auto spread = [n_sites](std::uint64_t compact, const auto& sites) {
    std::uint64_t full = 0;
    const int m = static_cast<int>(sites.size());
    for (int j = 0; j < m; ++j) {
      if (compact & (std::uint64_t{1} << (m - 1 - j))) full |= site_mask(sites[static_cast<std::size_t>(j)], n_sites);
    }
    return full;
  };

  const std::uint64_t keep_dim = std::uint64_t{1} << n_keep;
  const std::uint64_t trace_dim = std::uint64_t{1} << n_trace;
  std::vector<std::uint64_t> keep_bits(keep_dim), trace_bits(trace_dim);
  for (std::uint64_t k = 0; k < keep_dim; ++k) keep_bits[k] = spread(k, keep);
  for (std::uint64_t k = 0; k < trace_dim; ++k) trace_bits[k] = spread(k, traced);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(keep_dim));
  for (std::uint64_t r = 0; r < keep_dim; ++r) {
    for (std::uint64_t c = 0; c < keep_dim; ++c) {
      Complex acc{};
      for (std::uint64_t e : trace_bits) {
        acc += op(static_cast<Eigen::Index>(keep_bits[r] | e), static_cast<Eigen::Index>(keep_bits[c] | e));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  Matrix reduced = partial_trace(rho.entries(), rho.n_sites(), keep);
  // Restore exact Hermiticity lost to summation order.
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  return DensityMatrix(std::move(reduced));
}

SectorDecomposition magnetization_sectors(int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("magnetization_sectors: need at least one site");
  const std::uint64_t dim = hilbert_dimension(n_sites);
  SectorDecomposition dec;
  dec.n_sites = n_sites;
  dec.sectors.resize(static_cast<std::size_t>(n_sites) + 1);
  for (int k = 0; k <= n_sites; ++k) dec.sectors[static_cast<std::size_t>(k)].up_count = k;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    dec.sectors[static_cast<std::size_t>(std::popcount(idx))].members.emplace_back(idx);
  }
  return dec;
}

}  // namespace spinchain
