#pragma once

// Thermal qubit channel of a spin chain.
//
// A qubit placed on site 0 in front of a channel prepared in its Gibbs state
// is carried to site N by the full-chain dynamics. The resulting map on the
// qubit has the operator-sum form
//
//   rho_N(t) = sum_{I, alpha} M_{I,alpha} rho_0 M_{I,alpha}^dagger,
//   <k|M_{I,alpha}|j> = sqrt(p_alpha) <I,k| e^{-iHt} |j,alpha>,
//
// with I running over configurations of sites 0..N-1 and alpha over channel
// eigenstates. Nothing here enumerates I explicitly: for every retained level
// the two evolved vectors e^{-iHt}|0,alpha>, e^{-iHt}|1,alpha> are viewed as
// 2 x 2^N arrays (site N is the least significant bit) and contracted over I.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spinchain/hamiltonian.hpp"

namespace spinchain {

struct FullSum {};
struct LowestLevels {
  int count = 0;
};
struct WeightFloor {
  double floor = 0.0;
};
using Truncation = std::variant<FullSum, LowestLevels, WeightFloor>;

/// Parses "full", "levels=K" or "floor=EPS".
Truncation parse_truncation(std::string_view text);
std::string to_string(const Truncation& truncation);

struct LevelWeight {
  Eigen::Index level = 0;  // column of the channel spectrum
  double probability = 0.0;
};

/// Boltzmann weights of the retained channel levels.
///
/// The partition function always runs over every channel level; truncation
/// only drops levels from weights() and books their mass in discarded_weight().
class ThermalEnsemble {
 public:
  ThermalEnsemble(std::shared_ptr<const Spectrum> channel, double kT, double log_partition_function,
                  std::vector<LevelWeight> weights, double discarded_weight);

  const Spectrum& channel() const { return *channel_; }
  const std::shared_ptr<const Spectrum>& channel_ptr() const { return channel_; }
  double kT() const { return kT_; }
  /// 1/kT; +infinity at kT = 0.
  double beta() const;
  double log_partition_function() const { return log_z_; }
  double partition_function() const;
  std::span<const LevelWeight> weights() const { return weights_; }
  double discarded_weight() const { return discarded_; }
  bool truncated() const { return truncated_; }

 private:
  std::shared_ptr<const Spectrum> channel_;
  double kT_ = 0.0;
  double log_z_ = 0.0;
  std::vector<LevelWeight> weights_;
  double discarded_ = 0.0;
  bool truncated_ = false;
};

/// kT = 0 gives the uniform mixture over levels within 1e-9 of the ground energy;
/// kT = +infinity gives the uniform mixture over all levels. Throws for kT < 0.
ThermalEnsemble thermal_ensemble(std::shared_ptr<const Spectrum> channel, double kT,
                                 const Truncation& truncation = FullSum{});

/// Sum_alpha p_alpha |alpha><alpha| over the retained levels.
Matrix thermal_density(const ThermalEnsemble& ensemble);

/// Unit-weight contribution of one channel level at a fixed time.
struct LevelResponse {
  Eigen::Index level = 0;
  /// sum_I |<I,0|u_0> + <I,1|u_1>|^2
  double trace_sum = 0.0;
  /// gram(2j+k, 2m+l) = sum_I <I,k|u_j> conj(<I,l|u_m>)
  Eigen::Matrix4cd gram = Eigen::Matrix4cd::Zero();
};

/// The qubit map accumulated over an ensemble, stored as its Gram tensor.
class QubitChannel {
 public:
  QubitChannel() = default;
  QubitChannel(Eigen::Matrix4cd gram, double trace_sum, double discarded_weight);

  /// sum_{I,alpha} M rho M^dagger for any 2x2 operator (linear extension).
  Eigen::Matrix2cd apply(const Eigen::Matrix2cd& rho) const;
  /// sum_{I,alpha} M^dagger M.
  Eigen::Matrix2cd completeness() const;
  /// sum_{I,alpha} |tr M|^2, accumulated directly from the evolved vectors.
  double trace_sum() const { return trace_sum_; }
  double discarded_weight() const { return discarded_; }
  const Eigen::Matrix4cd& gram() const { return gram_; }

 private:
  Eigen::Matrix4cd gram_ = Eigen::Matrix4cd::Zero();
  double trace_sum_ = 0.0;
  double discarded_ = 0.0;
};

/// Precomputed overlaps of the injected product states with the full-chain
/// eigenbasis, so that repeated time points cost one phase multiply and a
/// matrix product per level.
class ChainDynamics {
 public:
  ChainDynamics(std::shared_ptr<const Spectrum> channel, std::shared_ptr<const Spectrum> full);

  const Spectrum& channel() const { return *channel_; }
  const Spectrum& full() const { return *full_; }
  int channel_sites() const { return channel_sites_; }

  /// Responses of the requested channel levels at time t.
  std::vector<LevelResponse> responses(double t, std::span<const Eigen::Index> levels) const;
  std::vector<LevelResponse> responses(double t, const ThermalEnsemble& ensemble) const;

  /// e^{-iHt}|j, alpha> for j in {0 = down, 1 = up} on site 0.
  Vector evolved(double t, int injected, Eigen::Index level) const;

  QubitChannel channel_at(double t, const ThermalEnsemble& ensemble) const;

 private:
  std::shared_ptr<const Spectrum> channel_;
  std::shared_ptr<const Spectrum> full_;
  int channel_sites_ = 0;
  // Column 2*level + j holds V_full^dagger |j, level>.
  Matrix eigen_overlaps_;
};

/// Weighted sum of per-level responses.
QubitChannel combine(std::span<const LevelResponse> responses, const ThermalEnsemble& ensemble);

/// Convenience wrapper building the dynamics for one evaluation.
QubitChannel transfer_map(const Spectrum& full, const ThermalEnsemble& ensemble, double t);

/// sum_{I,alpha} |tr M_{I,alpha}|^2.
double kraus_trace_sum(const Spectrum& full, const ThermalEnsemble& ensemble, double t);

struct FidelityEstimate {
  double value = 0.0;
  /// Upper bound on (exact - value); zero for untruncated ensembles.
  double truncation_bound = 0.0;
};

/// Bloch-sphere averaged fidelity 1/3 + (1/6) sum |tr M|^2.
FidelityEstimate average_fidelity(const Spectrum& full, const ThermalEnsemble& ensemble, double t);
double average_fidelity(const QubitChannel& channel);

/// rho_N(t) for an input qubit state. Requires an untruncated ensemble.
DensityMatrix output_state(const DensityMatrix& rho0, const Spectrum& full,
                           const ThermalEnsemble& ensemble, double t);

struct KrausElement {
  BasisIndex environment;  // I over sites 0..N-1
  Eigen::Index level = 0;  // alpha
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Zero();
};

/// Every M_{I,alpha} of the retained levels, materialised. Meant for small chains.
std::vector<KrausElement> kraus_elements(const Spectrum& full, const ThermalEnsemble& ensemble,
                                         double t);
Eigen::Matrix2cd kraus_completeness(std::span<const KrausElement> elements);

/// Zero-temperature ferromagnetic channel reduced to two Kraus elements.
struct ZeroTemperatureReduction {
  Complex m_plus;   // <-...-,+| U |+,-...->
  Complex m_minus;  // <-...-| U |-...->
  double big_m = 0.0;  // sqrt(sum_i |m_i|^2), one up spin on site i < N

  /// 1/3 + |m_plus + m_minus|^2 / 6.
  double fidelity() const;
  /// m_plus rephased so that m_minus becomes 1.
  Complex aligned_m_plus() const;
};

/// Throws std::domain_error unless the channel ground state is the
/// nondegenerate all-down state.
ZeroTemperatureReduction zero_temperature_reduction(const Spectrum& channel, const Spectrum& full, double t);

/// Full density-matrix evolution of rho0 (x) channel_density and a trace down to site N.
DensityMatrix brute_force_output_state(const DensityMatrix& rho0, const Spectrum& full,
                                       const DensityMatrix& channel_density, double t);

/// Average of <phi|rho_N|phi> over the six Pauli-axis states, each evolved by brute force.
double six_state_fidelity_oracle(const Spectrum& full, const ThermalEnsemble& ensemble, double t);

/// The six Pauli-axis qubit states |down>, |up>, |+-x>, |+-y>.
std::vector<Eigen::Vector2cd> pauli_axis_states();

}  // namespace spinchain
