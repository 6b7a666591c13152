#include <cmath>
#include <random>
#include <sstream>

#include "spinchain/sweep.hpp"

namespace spinchain {

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

SelftestCheck check(std::string name, double worst, double tol) {
  return {std::move(name), worst < tol, "max residual " + sci(worst) + " (tol " + sci(tol) + ")"};
}

Eigen::Matrix2cd random_qubit_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix2cd a;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::Matrix2cd rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  std::vector<SelftestCheck> out;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> t_dist(0.0, 20.0), kt_dist(0.05, 3.0);

  {
    double worst = 0.0;
    for (auto [J, B] : {std::pair{1.0, 1.0}, std::pair{-1.0, 1.0}, std::pair{0.7, 0.3}}) {
      for (int n : {3, 4}) {
        ChainSpec spec{n, J, B, Convention::spin_half};
        worst = std::max(worst, appendix_deviation(spec, options.hamiltonian));
      }
    }
    out.push_back(check("appendix-spectrum", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (double J : {1.0, -1.0}) worst = std::max(worst, symmetry_checks(ChainSpec{4, J, 1.0}).max_residual());
    out.push_back(check("symmetry-residuals", worst, 1e-10));
  }

  const ChainModel ferro(ChainSpec{4, 1.0, 1.0});
  const ChainModel anti(ChainSpec{4, -1.0, 1.0});

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto ens = thermal_ensemble(ferro.channel, kt_dist(rng));
      const auto ks = kraus_elements(*ferro.full, ens, t_dist(rng));
      worst = std::max(worst, (kraus_completeness(ks) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    }
    out.push_back(check("kraus-completeness", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto& model = trial % 2 ? anti : ferro;
      const auto ens = thermal_ensemble(model.channel, kt_dist(rng));
      const double t = t_dist(rng);
      const DensityMatrix rho0(Matrix(random_qubit_state(rng)));
      const DensityMatrix kraus = output_state(rho0, *model.full, ens, t);
      const DensityMatrix brute = brute_force_output_state(rho0, *model.full, DensityMatrix(thermal_density(ens)), t);
      worst = std::max(worst, trace_distance(kraus.entries(), brute.entries()));
    }
    out.push_back(check("kraus-vs-brute-force", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto& model = trial % 2 ? anti : ferro;
      const auto ens = thermal_ensemble(model.channel, kt_dist(rng));
      const double t = t_dist(rng);
      worst = std::max(worst, std::abs(average_fidelity(*model.full, ens, t).value -
                                       six_state_fidelity_oracle(*model.full, ens, t)));
    }
    out.push_back(check("fidelity-vs-six-state", worst, 1e-10));
  }

  {
    double worst = 0.0;
    const auto ens = thermal_ensemble(ferro.channel, 0.0);
    for (double t = 0.0; t <= 15.0; t += 0.5) {
      const auto red = zero_temperature_reduction(*ferro.channel, *ferro.full, t);
      worst = std::max(worst, std::abs(red.fidelity() - average_fidelity(*ferro.full, ens, t).value));
      worst = std::max(worst, std::abs(std::norm(red.m_plus) + red.big_m * red.big_m - 1.0));
    }
    out.push_back(check("zero-temperature-reduction", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto& model = trial % 2 ? anti : ferro;
      const auto ens = thermal_ensemble(model.channel, kt_dist(rng));
      const double t = t_dist(rng);
      const Eigen::Matrix4cd kraus = endpoint_pair_state(*model.full, ens, t).to_matrix();
      const Eigen::Matrix4cd corr = correlator_pair_state(*model.full, ens, t).to_matrix();
      const Eigen::Matrix4cd brute = brute_force_pair_state(*model.full, thermal_density(ens), t);
      worst = std::max({worst, trace_distance(kraus, corr), trace_distance(kraus, brute)});
    }
    out.push_back(check("pair-state-paths", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto& model = trial % 2 ? anti : ferro;
      const auto ens = thermal_ensemble(model.channel, kt_dist(rng));
      const auto pair = endpoint_pair_state(*model.full, ens, t_dist(rng));
      Matrix m = pair.to_matrix();
      m = 0.5 * (m + m.adjoint()).eval();
      worst = std::max(worst, std::abs(concurrence_x_state(pair) - wootters_concurrence(DensityMatrix(m))));
    }
    out.push_back(check("x-state-vs-wootters", worst, 1e-10));
  }

  return out;
}

}  // namespace spinchain
