#pragma once

// Closed-form spectra of the three-site channel and the four-site chain in the
// spin_half convention. They serve as analytic oracles for the numerics.

#include <optional>
#include <string>
#include <vector>

#include "spinchain/hilbert.hpp"

namespace spinchain {

struct AnalyticLevel {
  std::string label;  // "alpha_3", "chi_11", ...
  double energy = 0.0;
  /// Closed-form eigenvector, when one is printed.
  std::optional<Vector> vector;
  /// False when the printed vector is known not to be an eigenvector of the
  /// stated energy; such levels are checked through their energy only.
  bool vector_verified = false;
};

/// The 8 channel levels alpha_1..alpha_8 at (J, B), in closed-form order.
std::vector<AnalyticLevel> appendix_channel_spectrum(double coupling, double field);

/// The 16 chain levels chi_1..chi_16 at (J, B), in closed-form order.
std::vector<AnalyticLevel> appendix_full_spectrum(double coupling, double field);

/// Ascending energies of a closed-form level list.
RealVector sorted_energies(const std::vector<AnalyticLevel>& levels);

}  // namespace spinchain
