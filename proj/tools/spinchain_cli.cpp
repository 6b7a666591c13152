// spinchain: thermal state transfer through Heisenberg spin chains.
//
//   spinchain spectrum --n-sites 4 --j 1 --b 1 --check-appendix
//   spinchain fidelity-surface --j 1 --b 1 --out ferro_f.csv --plot-script
//   spinchain concurrence-surface --j -1 --b 1 --out anti_c.csv
//   spinchain optimal-time --kt 0.5 --t-min 0 --t-max 15
//   spinchain selftest

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spinchain/sweep.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChainOptions {
  int n_sites = 4;
  double coupling = 1.0;
  double field = 1.0;
  std::string convention = "spin";

  spinchain::ChainSpec spec() const {
    return {n_sites, coupling, field,
            convention == "pauli" ? spinchain::Convention::pauli : spinchain::Convention::spin_half};
  }
};

void add_chain_options(CLI::App* cmd, ChainOptions& o) {
  cmd->add_option("--n-sites", o.n_sites, "sites in the full chain (0..N)")->capture_default_str()->group("Chain");
  cmd->add_option("--j", o.coupling, "exchange coupling J (J>0 ferromagnetic)")->capture_default_str()->group("Chain");
  cmd->add_option("--b", o.field, "magnetic field B")->capture_default_str()->group("Chain");
  cmd->add_option("--convention", o.convention, "spin (s = sigma/2) or pauli")
      ->check(CLI::IsMember({"spin", "pauli"}))
      ->capture_default_str()
      ->group("Chain");
}

void write_output(const spinchain::SweepConfig& cfg, const std::vector<spinchain::SurfaceRecord>& records,
                  spinchain::Quantity quantity) {
  if (cfg.output_path.empty()) {
    spinchain::write_csv(std::cout, records);
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + cfg.output_path);
  spinchain::write_csv(out, records);
  if (!out) throw IoError("failed writing " + cfg.output_path);
  if (cfg.emit_plot_script) {
    const std::string gp = cfg.output_path + ".gp";
    std::ofstream script(gp, std::ios::binary);
    if (!script) throw IoError("cannot open " + gp);
    script << spinchain::gnuplot_script(cfg.output_path, quantity, cfg);
    if (!script) throw IoError("failed writing " + gp);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal quantum state and entanglement transfer through Heisenberg spin chains"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");

  ChainOptions chain;
  spinchain::SweepConfig sweep;
  std::string truncation = "full";
  std::string bell = "01+10";
  double kt = 0.0;
  bool check_appendix = false;
  std::string quantity = "fidelity";
  std::string fault;

  // Options live on the root command so that a flat key=value config file
  // reaches them; subcommands fall through to the root for parsing.
  add_chain_options(&app, chain);
  app.add_option("--t-min", sweep.t_min)->capture_default_str()->group("Grid");
  app.add_option("--t-max", sweep.t_max)->capture_default_str()->group("Grid");
  app.add_option("--t-steps", sweep.t_steps)->capture_default_str()->group("Grid");
  app.add_option("--kt-min", sweep.kt_min)->capture_default_str()->group("Grid");
  app.add_option("--kt-max", sweep.kt_max)->capture_default_str()->group("Grid");
  app.add_option("--kt-steps", sweep.kt_steps)->capture_default_str()->group("Grid");
  app.add_option("--truncate", truncation, "full | levels=K | floor=EPS")->capture_default_str()->group("Ensemble");
  app.add_option("--bell", bell, "Bell pair on (0',0): 01+10 or 00+11")
      ->check(CLI::IsMember({"01+10", "00+11"}))
      ->capture_default_str()
      ->group("Ensemble");
  app.add_option("--out", sweep.output_path, "CSV output path (default: stdout)")->group("Output");
  app.add_flag("--plot-script", sweep.emit_plot_script, "also write a gnuplot script to OUT.gp")->group("Output");
  app.add_option("--threads", sweep.threads, "worker threads")->capture_default_str()->group("Output");
  app.add_flag("--check-appendix", check_appendix, "spectrum: compare with the closed forms (n=3 or n=4)")
      ->group("Spectrum");
  app.add_option("--kt", kt, "optimal-time: temperature")->capture_default_str()->group("Optimal time");
  app.add_option("--quantity", quantity, "optimal-time: fidelity or concurrence")
      ->check(CLI::IsMember({"fidelity", "concurrence"}))
      ->capture_default_str()
      ->group("Optimal time");
  app.add_option("--inject-fault", fault, "selftest: deliberately break a component")
      ->check(CLI::IsMember({"field-sign"}))
      ->group("");

  auto* spectrum = app.add_subcommand("spectrum", "print the sector-resolved spectrum of the chain");
  auto* fidelity = app.add_subcommand("fidelity-surface", "average fidelity over a (t, kT) grid");
  auto* concurrence = app.add_subcommand("concurrence-surface", "endpoint concurrence over a (t, kT) grid");
  auto* optimal = app.add_subcommand("optimal-time", "time of maximal fidelity or concurrence at fixed kT");
  auto* selftest = app.add_subcommand("selftest", "run the oracle-equivalence checks on the 4-spin chain");
  for (auto* cmd : {spectrum, fidelity, concurrence, optimal, selftest}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*spectrum) {
      const auto report = spinchain::spectrum_report(chain.spec(), check_appendix);
      spinchain::print_spectrum_report(std::cout, chain.spec(), report);
      if (report.appendix_deviation && *report.appendix_deviation > spinchain::kAppendixReportTolerance) {
        std::cerr << "appendix check failed: deviation " << *report.appendix_deviation << "\n";
        return kValidation;
      }
      return kOk;
    }

    const auto bell_state =
        bell == "00+11" ? spinchain::BellState::aligned : spinchain::BellState::anti_aligned;

    if (*fidelity || *concurrence) {
      sweep.chain = chain.spec();
      sweep.truncation = spinchain::parse_truncation(truncation);
      sweep.bell = bell_state;
      sweep.quantity = *fidelity ? spinchain::Quantity::fidelity : spinchain::Quantity::concurrence;
      const auto surfaces = spinchain::compute_surfaces(sweep);
      write_output(sweep, *fidelity ? surfaces.fidelity : surfaces.concurrence, sweep.quantity);
      return kOk;
    }

    if (*optimal) {
      const spinchain::ChainModel model(chain.spec());
      const auto q = quantity == "concurrence" ? spinchain::Quantity::concurrence : spinchain::Quantity::fidelity;
      const auto best = spinchain::optimal_time(model, kt, sweep.t_min, sweep.t_max, q,
                                                spinchain::parse_truncation(truncation), 2000, bell_state);
      std::cout << "t_star," << spinchain::format_number(best.t_star) << "\n"
                << "value," << spinchain::format_number(best.value) << "\n";
      return kOk;
    }

    if (*selftest) {
      spinchain::SelftestOptions opts;
      if (fault == "field-sign") opts.hamiltonian = spinchain::hamiltonian_with_site0_field_sign_error;
      bool ok = true;
      for (const auto& c : spinchain::run_selftest(opts)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        ok = ok && c.passed;
      }
      return ok ? kOk : kValidation;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}
