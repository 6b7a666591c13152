#include "spinchain/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "spinchain/appendix.hpp"

namespace spinchain {

namespace {

std::vector<double> linear_grid(double lo, double hi, int steps) {
  std::vector<double> g(static_cast<std::size_t>(steps));
  const double h = (hi - lo) / (steps - 1);
  for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = lo + i * h;
  g.back() = hi;
  return g;
}

std::shared_ptr<const Spectrum> channel_spectrum(const ChainSpec& spec) {
  ChainSpec channel = spec;
  channel.n_sites = spec.n_sites - 1;
  return std::make_shared<const Spectrum>(diagonalize(build_channel_hamiltonian(channel), true));
}

double max_abs_diff(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) throw std::logic_error("spectra of different sizes");
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

void SweepConfig::validate() const {
  chain.validate();
  if (chain.n_sites < 3) throw std::invalid_argument("sweeps need a chain of at least 3 sites (channel of 2)");
  if (!(t_min < t_max)) throw std::invalid_argument("t_min must be below t_max");
  if (!(kt_min >= 0.0) || !(kt_min <= kt_max)) throw std::invalid_argument("need 0 <= kt_min <= kt_max");
  if (t_steps < 2 || kt_steps < 2) throw std::invalid_argument("grid needs at least 2 steps per axis");
  if (threads < 1) throw std::invalid_argument("thread count must be positive");
  if (emit_plot_script && output_path.empty()) throw std::invalid_argument("--plot-script needs --out");
}

std::vector<double> SweepConfig::times() const { return linear_grid(t_min, t_max, t_steps); }

std::vector<double> SweepConfig::temperatures() const { return linear_grid(kt_min, kt_max, kt_steps); }

ChainModel::ChainModel(const ChainSpec& s)
    : spec(s),
      channel(channel_spectrum(s)),
      full(std::make_shared<const Spectrum>(diagonalize(build_full_hamiltonian(s), true))),
      dynamics(channel, full) {}

double evaluate(const ChainModel& model, const ThermalEnsemble& ensemble, double t, Quantity quantity,
                BellState bell) {
  const QubitChannel ch = model.dynamics.channel_at(t, ensemble);
  switch (quantity) {
    case Quantity::fidelity:
      return average_fidelity(ch);
    case Quantity::concurrence:
      return x_state_concurrence(endpoint_pair_matrix(ch, bell));
    case Quantity::both:
      break;
  }
  throw std::invalid_argument("evaluate: choose a single quantity");
}

Surfaces compute_surfaces(const SweepConfig& config) {
  config.validate();
  const ChainModel model(config.chain);
  const auto times = config.times();
  const auto temps = config.temperatures();

  std::vector<ThermalEnsemble> ensembles;
  ensembles.reserve(temps.size());
  for (double kT : temps) ensembles.push_back(thermal_ensemble(model.channel, kT, config.truncation));

  // Levels retained by any ensemble; responses are computed once per time point.
  std::vector<Eigen::Index> levels;
  for (const auto& e : ensembles) {
    for (const auto& w : e.weights()) levels.push_back(w.level);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const bool want_f = config.quantity != Quantity::concurrence;
  const bool want_c = config.quantity != Quantity::fidelity;
  const std::size_t nt = times.size();
  const std::size_t nk = temps.size();
  std::vector<double> fid(want_f ? nt * nk : 0), conc(want_c ? nt * nk : 0);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t it = first; it < nt; it += stride) {
      const auto responses = model.dynamics.responses(times[it], levels);
      for (std::size_t ik = 0; ik < nk; ++ik) {
        const QubitChannel ch = combine(responses, ensembles[ik]);
        if (want_f) fid[ik * nt + it] = average_fidelity(ch);
        if (want_c) conc[ik * nt + it] = x_state_concurrence(endpoint_pair_matrix(ch, config.bell));
      }
    }
  };

  const auto workers = static_cast<std::size_t>(std::min<int>(config.threads, static_cast<int>(nt)));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  auto records = [&](const std::vector<double>& values) {
    std::vector<SurfaceRecord> out;
    out.reserve(values.size());
    for (std::size_t ik = 0; ik < nk; ++ik) {
      for (std::size_t it = 0; it < nt; ++it) {
        out.push_back({times[it], temps[ik], values[ik * nt + it], ensembles[ik].discarded_weight()});
      }
    }
    return out;
  };

  Surfaces s;
  if (want_f) s.fidelity = records(fid);
  if (want_c) s.concurrence = records(conc);
  return s;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<SurfaceRecord>& records) {
  out << "t,kT,value,discarded_weight\n";
  for (const auto& r : records) {
    out << format_number(r.t) << ',' << format_number(r.kT) << ',' << format_number(r.value) << ','
        << format_number(r.discarded_weight) << '\n';
  }
}

std::string gnuplot_script(const std::string& csv_path, Quantity quantity, const SweepConfig& config) {
  const char* label = quantity == Quantity::concurrence ? "C" : "F";
  std::ostringstream s;
  s << "# surface over (t, kT) for J=" << format_number(config.chain.coupling)
    << ", B=" << format_number(config.chain.field) << ", n=" << config.chain.n_sites << "\n"
    << "set datafile separator ','\n"
    << "set key off\n"
    << "set xlabel 't'\n"
    << "set ylabel 'kT'\n"
    << "set zlabel '" << label << "'\n"
    << "set pm3d\n"
    << "set dgrid3d " << config.kt_steps << "," << config.t_steps << "\n"
    << "splot '" << csv_path << "' every ::1 using 1:2:3 with pm3d\n";
  return s.str();
}

OptimalTime optimal_time(const ChainModel& model, double kT, double t_min, double t_max, Quantity quantity,
                         const Truncation& truncation, int coarse_intervals, BellState bell) {
  if (!(t_min < t_max)) throw std::invalid_argument("optimal_time: empty window");
  if (quantity == Quantity::both) throw std::invalid_argument("optimal_time: choose fidelity or concurrence");
  if (coarse_intervals < 2) throw std::invalid_argument("optimal_time: need at least 2 coarse intervals");

  const ThermalEnsemble ensemble = thermal_ensemble(model.channel, kT, truncation);
  auto f = [&](double t) { return evaluate(model, ensemble, t, quantity, bell); };

  const double step = (t_max - t_min) / coarse_intervals;
  double best_t = t_min;
  double best = f(t_min);
  for (int i = 1; i <= coarse_intervals; ++i) {
    const double t = i == coarse_intervals ? t_max : t_min + i * step;
    const double v = f(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }

  // Golden-section search on the bracket around the best grid point.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(t_min, best_t - step);
  double b = std::min(t_max, best_t + step);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-6) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double t_refined = 0.5 * (a + b);
  const double v_refined = f(t_refined);
  if (v_refined >= best) return {t_refined, v_refined};
  return {best_t, best};
}

double appendix_deviation(const ChainSpec& spec, const std::function<Matrix(const ChainSpec&)>& build) {
  const double scale_j = spec.convention == Convention::pauli ? 4.0 : 1.0;
  const double scale_b = spec.convention == Convention::pauli ? 2.0 : 1.0;
  const double J = scale_j * spec.coupling;
  const double B = scale_b * spec.field;
  std::vector<AnalyticLevel> closed;
  if (spec.n_sites == 3) {
    closed = appendix_channel_spectrum(J, B);
  } else if (spec.n_sites == 4) {
    closed = appendix_full_spectrum(J, B);
  } else {
    throw std::invalid_argument("appendix check supports n=3 channel or n=4 chain");
  }
  const Spectrum numeric = diagonalize(build(spec), true);
  return max_abs_diff(numeric.energies(), sorted_energies(closed));
}

SpectrumReport spectrum_report(const ChainSpec& spec, bool check_appendix) {
  spec.validate();
  if (check_appendix && spec.n_sites != 3 && spec.n_sites != 4) {
    throw std::invalid_argument("appendix check supports n=3 channel or n=4 chain");
  }
  const Spectrum sp = diagonalize(build_full_hamiltonian(spec), true);
  SpectrumReport r;
  r.energies = sp.energies();
  r.sector_tags = *sp.sector_tags();
  if (check_appendix) r.appendix_deviation = appendix_deviation(spec, build_full_hamiltonian);
  return r;
}

void print_spectrum_report(std::ostream& out, const ChainSpec& spec, const SpectrumReport& report) {
  out << "# n=" << spec.n_sites << " J=" << format_number(spec.coupling) << " B=" << format_number(spec.field)
      << " convention=" << (spec.convention == Convention::pauli ? "pauli" : "spin") << "\n";
  out << "level,energy,up_spins\n";
  for (Eigen::Index k = 0; k < report.energies.size(); ++k) {
    out << k << ',' << format_number(report.energies(k)) << ',' << report.sector_tags[static_cast<std::size_t>(k)]
        << '\n';
  }
  if (report.appendix_deviation) {
    out << "# appendix max deviation: " << format_number(*report.appendix_deviation) << "\n";
  }
}

Matrix hamiltonian_with_site0_field_sign_error(const ChainSpec& spec) {
  Matrix h = build_full_hamiltonian(spec);
  const double b = spec.convention == Convention::pauli ? 2.0 * spec.field : spec.field;
  h -= 2.0 * b * single_site_operator(SiteOperator::sz, 0, spec.n_sites);
  return h;
}

}  // namespace spinchain
