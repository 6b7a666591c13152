#include "spinchain/appendix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

namespace spinchain {

namespace {

// Basis vector with the listed sites (0-based) up, others down.
Vector ket(int n_sites, std::initializer_list<int> up_sites) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(hilbert_dimension(n_sites)));
  std::uint64_t idx = 0;
  for (int s : up_sites) idx |= site_mask(s, n_sites);
  v(static_cast<Eigen::Index>(idx)) = 1.0;
  return v;
}

Vector flip_all(const Vector& v) { return v.reverse(); }

std::array<double, 4> channel_energies(double J, double B) {
  return {-J / 2 - 3 * B / 2, -J / 2 - B / 2, J - B / 2, -B / 2};
}

std::array<double, 11> chain_energies(double J, double B) {
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  const double eta_plus = 2 + r3;
  const double eta_minus = 2 - r3;
  return {
      -0.75 * J - 2 * B,
      -0.75 * J - B,
      0.25 * J - B,
      0.25 * (1 + 2 * r2) * J - B,
      0.25 * (1 - 2 * r2) * J - B,
      0.25 * J,
      -0.75 * J,
      0.25 * (1 + 2 * r2) * J,
      0.25 * (1 - 2 * r2) * J,
      r3 / 4 * eta_plus * J,
      -r3 / 4 * eta_minus * J,
  };
}

}  // namespace

std::vector<AnalyticLevel> appendix_channel_spectrum(double coupling, double field) {
  const double r2 = std::sqrt(2.0);
  // The printed one-magnon vectors for alpha_2/alpha_3 carry a +-sqrt(2) middle
  // amplitude; the exact eigenvectors at those energies are (1,1,1)/sqrt3 and
  // (1,-2,1)/sqrt6, so these two (and their flips) are validated by energy only.
  std::array<std::pair<Vector, bool>, 4> vecs = {{
      {ket(3, {}), true},
      {(ket(3, {0}) - r2 * ket(3, {1}) + ket(3, {2})) / 2.0, false},
      {(ket(3, {0}) + r2 * ket(3, {1}) + ket(3, {2})) / 2.0, false},
      {(ket(3, {0}) - ket(3, {2})) / r2, true},
  }};

  const auto low = channel_energies(coupling, field);
  const auto high = channel_energies(coupling, -field);

  std::vector<AnalyticLevel> levels;
  for (int i = 0; i < 4; ++i) {
    const auto& [v, ok] = vecs[static_cast<std::size_t>(i)];
    levels.push_back({"alpha_" + std::to_string(i + 1), low[static_cast<std::size_t>(i)], v, ok});
  }
  for (int i = 0; i < 4; ++i) {
    const auto& [v, ok] = vecs[static_cast<std::size_t>(i)];
    levels.push_back({"alpha_" + std::to_string(i + 5), high[static_cast<std::size_t>(i)], flip_all(v), ok});
  }
  return levels;
}

std::vector<AnalyticLevel> appendix_full_spectrum(double coupling, double field) {
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  const double xi_plus = 1 + r3;
  const double eta_plus = 2 + r3;

  // |i> and |i,j> in 1-based site labels of the four-site chain.
  auto one = [](int i) { return ket(4, {i - 1}); };
  auto two = [](int i, int j) { return ket(4, {i - 1, j - 1}); };

  std::vector<Vector> vecs;
  vecs.push_back(ket(4, {}));
  vecs.push_back((one(1) + one(2) + one(3) + one(4)) / 2.0);
  vecs.push_back((one(1) - one(2) - one(3) + one(4)) / 2.0);
  vecs.push_back((one(1) - (r2 + 1) * (one(2) - one(3)) - one(4)) / (2 * std::sqrt(2 + r2)));
  vecs.push_back((one(1) + (r2 - 1) * (one(2) - one(3)) - one(4)) / (2 * std::sqrt(2 - r2)));
  vecs.push_back((two(1, 4) - two(2, 3)) / r2);
  vecs.push_back((two(1, 2) + two(1, 3) + two(1, 4) + two(2, 3) + two(2, 4) + two(3, 4)) / std::sqrt(6.0));
  vecs.push_back((two(1, 2) - (1 + r2) * (two(1, 3) - two(2, 4)) - two(3, 4)) / (2 * std::sqrt(2 + r2)));
  vecs.push_back((-two(1, 2) + (1 - r2) * (two(1, 3) - two(2, 4)) + two(3, 4)) / (2 * std::sqrt(2 - r2)));
  vecs.push_back((two(1, 2) - eta_plus * two(1, 3) + xi_plus * two(1, 4) + xi_plus * two(2, 3) -
                  eta_plus * two(2, 4) + two(3, 4)) /
                 (2 * std::sqrt(3 * eta_plus)));

  const auto e = chain_energies(coupling, field);
  const auto e_flipped = chain_energies(coupling, -field);

  std::vector<AnalyticLevel> levels;
  for (int i = 0; i < 10; ++i) {
    levels.push_back({"chi_" + std::to_string(i + 1), e[static_cast<std::size_t>(i)], vecs[static_cast<std::size_t>(i)],
                      true});
  }
  // chi_11 as printed is not consistent with the chi_10 pattern; no vector is offered.
  levels.push_back({"chi_11", e[10], std::nullopt, false});
  for (int i = 0; i < 5; ++i) {
    levels.push_back({"chi_" + std::to_string(i + 12), e_flipped[static_cast<std::size_t>(i)],
                      flip_all(vecs[static_cast<std::size_t>(i)]), true});
  }
  return levels;
}

RealVector sorted_energies(const std::vector<AnalyticLevel>& levels) {
  std::vector<double> e;
  e.reserve(levels.size());
  for (const auto& l : levels) e.push_back(l.energy);
  std::sort(e.begin(), e.end());
  return Eigen::Map<RealVector>(e.data(), static_cast<Eigen::Index>(e.size()));
}

}  // namespace spinchain
