#include "spinchain/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinchain {

namespace {

void check_pair(const EndpointPairState& p) {
  const double tol = 1e-10;
  for (double v : {p.u_plus, p.u_minus, p.w_plus, p.w_minus}) {
    if (!(v >= -tol)) throw std::invalid_argument("pair state: negative population");
  }
  if (std::abs(p.total() - 1.0) > tol) throw std::invalid_argument("pair state: populations do not sum to 1");
  if (std::norm(p.z) > p.w_plus * p.w_minus + 1e-12) {
    throw std::invalid_argument("pair state: coherence exceeds the positivity bound");
  }
}

}  // namespace

Eigen::Vector4cd bell_vector(BellState bell) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  if (bell == BellState::anti_aligned) {
    v(1) = r;
    v(2) = r;
  } else {
    v(0) = r;
    v(3) = r;
  }
  return v;
}

Eigen::Matrix4cd EndpointPairState::to_matrix() const {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = u_minus;
  m(1, 1) = w_minus;
  m(2, 2) = w_plus;
  m(3, 3) = u_plus;
  m(2, 1) = z;
  m(1, 2) = std::conj(z);
  return m;
}

EndpointPairState& EndpointPairState::operator+=(const EndpointPairState& other) {
  u_plus += other.u_plus;
  u_minus += other.u_minus;
  w_plus += other.w_plus;
  w_minus += other.w_minus;
  z += other.z;
  return *this;
}

EndpointPairState EndpointPairState::operator*(double weight) const {
  return {u_plus * weight, u_minus * weight, w_plus * weight, w_minus * weight, z * weight};
}

EndpointPairState pair_state_from_matrix(const Eigen::Matrix4cd& rho) {
  return {rho(3, 3).real(), rho(0, 0).real(), rho(2, 2).real(), rho(1, 1).real(), rho(2, 1)};
}

Eigen::Matrix4cd endpoint_pair_matrix(const QubitChannel& channel, BellState bell) {
  // Block (a, b) over qubit 0' is (1/2) E(|j_a><j_b|) with j the partner on site 0.
  const Eigen::Matrix4cd& g = channel.gram();
  Eigen::Matrix4cd rho;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int ja = bell == BellState::anti_aligned ? 1 - a : a;
      const int jb = bell == BellState::anti_aligned ? 1 - b : b;
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) rho(2 * a + k, 2 * b + l) = 0.5 * g(2 * ja + k, 2 * jb + l);
      }
    }
  }
  return rho;
}

EndpointPairState endpoint_pair_state(const Spectrum& full, const ThermalEnsemble& ensemble, double t) {
  return pair_state_from_matrix(endpoint_pair_matrix(transfer_map(full, ensemble, t)));
}

EndpointPairState level_correlators(const Spectrum& full, const PureState& alpha_state, double t) {
  const int total = full.n_sites();
  if (alpha_state.n_sites() + 1 != total) throw std::invalid_argument("level_correlators: dimension mismatch");
  const int last = total - 1;

  // labels here: |0> = up, |1> = down on the injected site.
  const Vector psi0 = evolve(full, t, embed_pair(Eigen::Vector2cd(0.0, 1.0), alpha_state).amplitudes());
  const Vector psi1 = evolve(full, t, embed_pair(Eigen::Vector2cd(1.0, 0.0), alpha_state).amplitudes());

  const Matrix sz = single_site_operator(SiteOperator::sigma_z, last, total);
  const Matrix sp = single_site_operator(SiteOperator::sigma_plus, last, total);
  auto expect = [](const Vector& bra, const Matrix& op, const Vector& ket) { return bra.dot(op * ket); };

  const double z1 = expect(psi1, sz, psi1).real();
  const double z0 = expect(psi0, sz, psi0).real();
  const double n1 = psi1.squaredNorm();
  const double n0 = psi0.squaredNorm();

  EndpointPairState p;
  p.u_plus = 0.25 * (n1 + z1);
  p.w_plus = 0.25 * (n1 - z1);
  p.u_minus = 0.25 * (n0 - z0);
  p.w_minus = 0.25 * (n0 + z0);
  p.z = 0.5 * expect(psi0, sp, psi1);
  return p;
}

EndpointPairState correlator_pair_state(const Spectrum& full, const ThermalEnsemble& ensemble, double t) {
  const Spectrum& channel = ensemble.channel();
  EndpointPairState sum;
  for (const auto& w : ensemble.weights()) {
    sum += level_correlators(full, PureState(channel.state(w.level)), t) * w.probability;
  }
  return sum;
}

Eigen::Matrix4cd brute_force_pair_state(const Spectrum& full, const Matrix& channel_density, double t,
                                        BellState bell) {
  const int chain = full.n_sites();
  if (chain + 1 > kDensityMatrixSiteLimit) {
    throw std::invalid_argument("brute_force_pair_state: composite exceeds the density-matrix limit");
  }
  if (channel_density.rows() * 2 != full.dimension()) {
    throw std::invalid_argument("brute_force_pair_state: dimension mismatch");
  }
  const Eigen::Vector4cd bv = bell_vector(bell);
  const Matrix bell_projector = bv * bv.adjoint();
  const Matrix initial = kron(bell_projector, channel_density);
  const Matrix u = kron(Matrix::Identity(2, 2), propagator(full, t));
  const Matrix evolved = u * initial * u.adjoint();
  const int keep[] = {0, chain};
  return partial_trace(evolved, chain + 1, keep);
}

double concurrence_x_state(const EndpointPairState& pair) {
  check_pair(pair);
  return 2.0 * std::max(0.0, std::abs(pair.z) - std::sqrt(std::max(0.0, pair.u_plus * pair.u_minus)));
}

double x_state_concurrence(const Eigen::Matrix4cd& rho) {
  auto pop = [&](int i) { return std::max(0.0, rho(i, i).real()); };
  const double inner = std::abs(rho(2, 1)) - std::sqrt(pop(0) * pop(3));
  const double outer = std::abs(rho(3, 0)) - std::sqrt(pop(1) * pop(2));
  return 2.0 * std::max({0.0, inner, outer});
}

double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.n_sites() != 2) throw std::invalid_argument("wootters_concurrence: need a two-qubit state");
  // The square roots of the eigenvalues of rho Y rho* Y are the singular values
  // of sqrt(rho) Y conj(sqrt(rho)), which avoids square roots of noisy eigenvalues.
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries());
  const RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_rho = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();

  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;

  const Matrix a = sqrt_rho * yy * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Matrix> svd(a);
  const RealVector s = svd.singularValues();  // descending
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

}  // namespace spinchain
