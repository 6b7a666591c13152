#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinchain/entanglement.hpp"
#include "spinchain/thermal.hpp"

namespace spinchain {

enum class Quantity { fidelity, concurrence, both };

struct SweepConfig {
  ChainSpec chain;  // n_sites counts the full chain 0..N
  double t_min = 0.0;
  double t_max = 15.0;
  int t_steps = 300;
  double kt_min = 0.0;
  double kt_max = 2.0;
  int kt_steps = 100;
  Truncation truncation = FullSum{};
  Quantity quantity = Quantity::fidelity;
  BellState bell = BellState::anti_aligned;
  std::string output_path;  // empty: standard output
  bool emit_plot_script = false;
  int threads = 1;

  void validate() const;
  std::vector<double> times() const;
  std::vector<double> temperatures() const;
};

struct SurfaceRecord {
  double t = 0.0;
  double kT = 0.0;
  double value = 0.0;
  double discarded_weight = 0.0;
};

/// Channel and full-chain spectra of one chain, diagonalized per magnetization sector.
struct ChainModel {
  explicit ChainModel(const ChainSpec& spec);

  ChainSpec spec;
  std::shared_ptr<const Spectrum> channel;
  std::shared_ptr<const Spectrum> full;
  ChainDynamics dynamics;
};

struct Surfaces {
  std::vector<SurfaceRecord> fidelity;     // empty unless requested
  std::vector<SurfaceRecord> concurrence;  // empty unless requested
};

/// Evaluates the requested surfaces on the (kT, t) grid, rows kT-major.
/// Output is identical for any thread count.
Surfaces compute_surfaces(const SweepConfig& config);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

void write_csv(std::ostream& out, const std::vector<SurfaceRecord>& records);
std::string gnuplot_script(const std::string& csv_path, Quantity quantity, const SweepConfig& config);

struct OptimalTime {
  double t_star = 0.0;
  double value = 0.0;
};

/// Coarse scan with (t_max - t_min)/coarse_intervals spacing, then golden-section
/// refinement of the best grid point to |dt| < 1e-6. `quantity` must not be both.
OptimalTime optimal_time(const ChainModel& model, double kT, double t_min, double t_max, Quantity quantity,
                         const Truncation& truncation = FullSum{}, int coarse_intervals = 2000,
                         BellState bell = BellState::anti_aligned);

/// Fidelity or concurrence at one grid point.
double evaluate(const ChainModel& model, const ThermalEnsemble& ensemble, double t, Quantity quantity,
                BellState bell = BellState::anti_aligned);

struct SpectrumReport {
  RealVector energies;
  std::vector<int> sector_tags;
  std::optional<double> appendix_deviation;
};

inline constexpr double kAppendixReportTolerance = 1e-8;

/// Sector-resolved spectrum of the chain; with check_appendix, also the max
/// deviation from the closed forms (n = 3 channel or n = 4 chain only).
SpectrumReport spectrum_report(const ChainSpec& spec, bool check_appendix);
void print_spectrum_report(std::ostream& out, const ChainSpec& spec, const SpectrumReport& report);

/// Max |numeric - closed form| over the sorted spectra of one chain size.
double appendix_deviation(const ChainSpec& spec, const std::function<Matrix(const ChainSpec&)>& build);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  /// Hamiltonian used by the spectrum checks; replaceable to exercise failure paths.
  std::function<Matrix(const ChainSpec&)> hamiltonian = build_full_hamiltonian;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

/// build_full_hamiltonian with the site-0 Zeeman term sign-flipped.
Matrix hamiltonian_with_site0_field_sign_error(const ChainSpec& spec);

}  // namespace spinchain
