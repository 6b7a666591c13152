#pragma once

// Entanglement distribution through the thermal channel.
//
// Qubit 0' never interacts; its partner on site 0 is injected into the chain.
// The joint state of (0', N) is obtained in three independent ways: from the
// qubit channel's Gram tensor, from Heisenberg-picture correlators per channel
// level, and from brute-force evolution of the whole composite.
//
// Correlator labels follow the convention in which the qubit ket |0> is spin-up
// and |1> is spin-down on site 0:
//
//   u+ = 1/4 <1,a|(1 + sz_N(t))|1,a>      w+ = 1/4 <1,a|(1 - sz_N(t))|1,a>
//   u- = 1/4 <0,a|(1 - sz_N(t))|0,a>      w- = 1/4 <0,a|(1 + sz_N(t))|0,a>
//   z  = 1/2 <0,a| s+_N(t) |1,a>          (sigma operators, s+|down> = |up>)
//
// Under that labelling the anti-aligned Bell pair (|0,1> + |1,0>)/sqrt2 gives an
// X-state whose coherence sits between the w+ and w- populations.

#include "spinchain/thermal.hpp"

namespace spinchain {

enum class BellState {
  anti_aligned,  // (|0,1> + |1,0>)/sqrt2: one spin up, one down
  aligned,       // (|0,0> + |1,1>)/sqrt2
};

/// Bell pair on (0', 0) as a 4-vector in basis-index order (0' most significant).
Eigen::Vector4cd bell_vector(BellState bell);

struct EndpointPairState {
  double u_plus = 0.0;
  double u_minus = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  Complex z;

  /// The 4x4 density matrix in basis-index order over (0', N):
  /// diag(u-, w-, w+, u+), with z at (2,1) and conj(z) at (1,2).
  Eigen::Matrix4cd to_matrix() const;
  double total() const { return u_plus + u_minus + w_plus + w_minus; }

  EndpointPairState& operator+=(const EndpointPairState& other);
  EndpointPairState operator*(double weight) const;
};

/// Reads the X-state fields off a 4x4 matrix in basis-index order.
EndpointPairState pair_state_from_matrix(const Eigen::Matrix4cd& rho);

/// rho_{0',N} from a qubit channel, for either Bell pair.
Eigen::Matrix4cd endpoint_pair_matrix(const QubitChannel& channel, BellState bell = BellState::anti_aligned);

/// sum_{I,a} (1 x M) |Bell><Bell| (1 x M)^dagger for the anti-aligned pair.
EndpointPairState endpoint_pair_state(const Spectrum& full, const ThermalEnsemble& ensemble, double t);

/// The five correlators of one channel state.
EndpointPairState level_correlators(const Spectrum& full, const PureState& alpha_state, double t);

/// Ensemble-weighted sum of level_correlators.
EndpointPairState correlator_pair_state(const Spectrum& full, const ThermalEnsemble& ensemble, double t);

/// Evolves Bell(0',0) (x) channel_density with 1 (x) e^{-iHt} and traces down to (0', N).
Eigen::Matrix4cd brute_force_pair_state(const Spectrum& full, const Matrix& channel_density, double t,
                                        BellState bell = BellState::anti_aligned);

/// 2 max(0, |z| - sqrt(u+ u-)).
double concurrence_x_state(const EndpointPairState& pair);

/// Closed form for any X-shaped two-qubit matrix (either coherence block).
double x_state_concurrence(const Eigen::Matrix4cd& rho);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4) of a general two-qubit state.
double wootters_concurrence(const DensityMatrix& rho);

}  // namespace spinchain
