#include "spinchain/thermal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace spinchain {

namespace {

constexpr double kGroundTolerance = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

int channel_sites_of(const Spectrum& channel, const Spectrum& full) {
  if (channel.n_sites() < 1 || full.n_sites() != channel.n_sites() + 1) {
    throw std::invalid_argument("full-chain spectrum must have exactly one more site than the channel");
  }
  return channel.n_sites();
}

// |j, alpha>: site 0 carries j, the channel occupies the low bits.
Vector injected_state(const Spectrum& channel, int injected, Eigen::Index level) {
  const Eigen::Index d = channel.dimension();
  Vector v = Vector::Zero(2 * d);
  v.segment(injected * d, d) = channel.vectors().col(level);
  return v;
}

// Contract the two evolved vectors over I. Element (k, I) of the 2 x 2^N view
// of u_j is <I,k|u_j> because site N is the least significant bit.
LevelResponse contract(Eigen::Index level, const Vector& u0, const Vector& u1) {
  const Eigen::Index envs = u0.size() / 2;
  Eigen::Map<const Matrix> a0(u0.data(), 2, envs);
  Eigen::Map<const Matrix> a1(u1.data(), 2, envs);

  LevelResponse r;
  r.level = level;
  r.trace_sum = (a0.row(0) + a1.row(1)).squaredNorm();

  Matrix w(4, envs);
  w.row(0) = a0.row(0);
  w.row(1) = a0.row(1);
  w.row(2) = a1.row(0);
  w.row(3) = a1.row(1);
  r.gram = w * w.adjoint();
  return r;
}

LevelResponse direct_response(const Spectrum& channel, const Spectrum& full, Eigen::Index level, double t) {
  const Vector u0 = evolve(full, t, injected_state(channel, 0, level));
  const Vector u1 = evolve(full, t, injected_state(channel, 1, level));
  return contract(level, u0, u1);
}

void check_complete(const ThermalEnsemble& ensemble, const char* what) {
  if (ensemble.truncated()) {
    throw std::invalid_argument(std::string(what) + " requires an untruncated ensemble");
  }
}

Eigen::Matrix2cd hermitian_part(const Eigen::Matrix2cd& m) { return 0.5 * (m + m.adjoint()); }

Matrix brute_force_output(const Matrix& rho0, const Spectrum& full, const Matrix& channel_density, double t) {
  const int total = full.n_sites();
  if (total > kDensityMatrixSiteLimit) {
    throw std::invalid_argument("brute-force evolution limited to " + std::to_string(kDensityMatrixSiteLimit) +
                                " sites");
  }
  if (rho0.rows() != 2 || channel_density.rows() * 2 != full.dimension()) {
    throw std::invalid_argument("brute-force evolution: dimension mismatch");
  }
  const Matrix u = propagator(full, t);
  const Matrix evolved = u * kron(rho0, channel_density) * u.adjoint();
  const int keep[] = {total - 1};
  return partial_trace(evolved, total, keep);
}

}  // namespace

Truncation parse_truncation(std::string_view text) {
  if (text == "full") return FullSum{};
  auto value_after = [&](std::string_view prefix) { return text.substr(prefix.size()); };
  if (text.starts_with("levels=")) {
    const auto s = value_after("levels=");
    int k = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
    if (ec != std::errc{} || ptr != s.data() + s.size() || k < 1) {
      throw std::invalid_argument("levels truncation needs a positive integer: " + std::string(text));
    }
    return LowestLevels{k};
  }
  if (text.starts_with("floor=")) {
    const auto s = value_after("floor=");
    double eps = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), eps);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !(eps >= 0.0)) {
      throw std::invalid_argument("floor truncation needs a non-negative number: " + std::string(text));
    }
    return WeightFloor{eps};
  }
  throw std::invalid_argument("unknown truncation '" + std::string(text) + "' (expected full, levels=K, floor=EPS)");
}

std::string to_string(const Truncation& truncation) {
  return std::visit(overloaded{
                        [](FullSum) { return std::string("full"); },
                        [](LowestLevels l) { return "levels=" + std::to_string(l.count); },
                        [](WeightFloor f) {
                          char buf[64];
                          auto res = std::to_chars(buf, buf + sizeof buf, f.floor);
                          return "floor=" + std::string(buf, res.ptr);
                        },
                    },
                    truncation);
}

ThermalEnsemble::ThermalEnsemble(std::shared_ptr<const Spectrum> channel, double kT, double log_partition_function,
                                 std::vector<LevelWeight> weights, double discarded_weight)
    : channel_(std::move(channel)),
      kT_(kT),
      log_z_(log_partition_function),
      weights_(std::move(weights)),
      discarded_(discarded_weight) {
  if (!channel_) throw std::invalid_argument("ThermalEnsemble: missing channel spectrum");
  truncated_ = discarded_ > 0.0;  // zero-weight levels (kT = 0) are not a truncation
}

double ThermalEnsemble::beta() const {
  return kT_ == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / kT_;
}

double ThermalEnsemble::partition_function() const { return std::exp(log_z_); }

ThermalEnsemble thermal_ensemble(std::shared_ptr<const Spectrum> channel, double kT, const Truncation& truncation) {
  if (!channel) throw std::invalid_argument("thermal_ensemble: missing channel spectrum");
  if (!(kT >= 0.0)) throw std::invalid_argument("thermal_ensemble: kT must be non-negative");

  const RealVector& e = channel->energies();
  const Eigen::Index dim = e.size();
  const double e0 = e.minCoeff();

  // Boltzmann factors relative to the ground energy.
  std::vector<double> rel(static_cast<std::size_t>(dim));
  for (Eigen::Index a = 0; a < dim; ++a) {
    double w;
    if (kT == 0.0) {
      w = (e(a) - e0 <= kGroundTolerance) ? 1.0 : 0.0;
    } else if (std::isinf(kT)) {
      w = 1.0;
    } else {
      w = std::exp(-(e(a) - e0) / kT);
    }
    rel[static_cast<std::size_t>(a)] = w;
  }
  const double rel_sum = std::accumulate(rel.begin(), rel.end(), 0.0);
  double log_z;
  if (kT == 0.0) {
    log_z = -std::numeric_limits<double>::infinity() * (e0 > 0 ? 1.0 : -1.0);
    if (e0 == 0.0) log_z = std::log(rel_sum);
  } else if (std::isinf(kT)) {
    log_z = std::log(static_cast<double>(dim));
  } else {
    log_z = -e0 / kT + std::log(rel_sum);
  }

  // Levels in ascending energy; spectra are sorted, but do not rely on it.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return e(a) < e(b); });

  std::vector<LevelWeight> kept;
  double dropped = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Eigen::Index a = order[pos];
    const double p = rel[static_cast<std::size_t>(a)] / rel_sum;
    if (p <= 0.0) continue;
    const bool keep = std::visit(overloaded{
                                     [](FullSum) { return true; },
                                     [&](LowestLevels l) { return pos < static_cast<std::size_t>(l.count); },
                                     [&](WeightFloor f) { return p >= f.floor; },
                                 },
                                 truncation);
    if (!keep) {
      dropped += p;
      continue;
    }
    kept.push_back({a, p});
  }
  // Summed directly so that tiny tails keep their relative precision.
  const double discarded = std::holds_alternative<FullSum>(truncation) ? 0.0 : dropped;
  ThermalEnsemble ens(std::move(channel), kT, log_z, std::move(kept), discarded);
  return ens;
}

Matrix thermal_density(const ThermalEnsemble& ensemble) {
  const Spectrum& ch = ensemble.channel();
  Matrix rho = Matrix::Zero(ch.dimension(), ch.dimension());
  for (const auto& w : ensemble.weights()) {
    const Vector v = ch.vectors().col(w.level);
    rho += w.probability * v * v.adjoint();
  }
  return rho;
}

QubitChannel::QubitChannel(Eigen::Matrix4cd gram, double trace_sum, double discarded_weight)
    : gram_(std::move(gram)), trace_sum_(trace_sum), discarded_(discarded_weight) {}

Eigen::Matrix2cd QubitChannel::apply(const Eigen::Matrix2cd& rho) const {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      Complex acc{};
      for (int j = 0; j < 2; ++j) {
        for (int m = 0; m < 2; ++m) acc += rho(j, m) * gram_(2 * j + k, 2 * m + l);
      }
      out(k, l) = acc;
    }
  }
  return out;
}

Eigen::Matrix2cd QubitChannel::completeness() const {
  // (M^dagger M)(j, m) = sum_k conj(M(k, j)) M(k, m) = sum_k gram(2m+k, 2j+k)
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int j = 0; j < 2; ++j) {
    for (int m = 0; m < 2; ++m) {
      out(j, m) = gram_(2 * m, 2 * j) + gram_(2 * m + 1, 2 * j + 1);
    }
  }
  return out;
}

ChainDynamics::ChainDynamics(std::shared_ptr<const Spectrum> channel, std::shared_ptr<const Spectrum> full)
    : channel_(std::move(channel)), full_(std::move(full)) {
  if (!channel_ || !full_) throw std::invalid_argument("ChainDynamics: missing spectrum");
  channel_sites_ = channel_sites_of(*channel_, *full_);
  const Eigen::Index d = channel_->dimension();
  Matrix injected = Matrix::Zero(2 * d, 2 * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    injected.col(2 * a).head(d) = channel_->vectors().col(a);
    injected.col(2 * a + 1).tail(d) = channel_->vectors().col(a);
  }
  eigen_overlaps_ = full_->vectors().adjoint() * injected;
}

Vector ChainDynamics::evolved(double t, int injected, Eigen::Index level) const {
  if (injected != 0 && injected != 1) throw std::invalid_argument("injected qubit label must be 0 or 1");
  if (level < 0 || level >= channel_->dimension()) throw std::invalid_argument("channel level out of range");
  Vector c = eigen_overlaps_.col(2 * level + injected);
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -full_->energy(k) * t);
  return full_->vectors() * c;
}

std::vector<LevelResponse> ChainDynamics::responses(double t, std::span<const Eigen::Index> levels) const {
  const Eigen::Index dim = full_->dimension();
  Vector phases(dim);
  for (Eigen::Index k = 0; k < dim; ++k) phases(k) = std::polar(1.0, -full_->energy(k) * t);

  std::vector<LevelResponse> out;
  out.reserve(levels.size());
  Matrix cols(dim, 2);
  for (Eigen::Index level : levels) {
    if (level < 0 || level >= channel_->dimension()) throw std::invalid_argument("channel level out of range");
    cols.col(0) = phases.cwiseProduct(eigen_overlaps_.col(2 * level));
    cols.col(1) = phases.cwiseProduct(eigen_overlaps_.col(2 * level + 1));
    const Matrix u = full_->vectors() * cols;
    out.push_back(contract(level, u.col(0), u.col(1)));
  }
  return out;
}

std::vector<LevelResponse> ChainDynamics::responses(double t, const ThermalEnsemble& ensemble) const {
  std::vector<Eigen::Index> levels;
  levels.reserve(ensemble.weights().size());
  for (const auto& w : ensemble.weights()) levels.push_back(w.level);
  return responses(t, levels);
}

QubitChannel ChainDynamics::channel_at(double t, const ThermalEnsemble& ensemble) const {
  if (ensemble.channel().dimension() != channel_->dimension()) {
    throw std::invalid_argument("ensemble does not belong to this channel");
  }
  const auto r = responses(t, ensemble);
  return combine(r, ensemble);
}

QubitChannel combine(std::span<const LevelResponse> responses, const ThermalEnsemble& ensemble) {
  Eigen::Matrix4cd gram = Eigen::Matrix4cd::Zero();
  double trace_sum = 0.0;
  std::size_t cursor = 0;
  for (const auto& w : ensemble.weights()) {
    // Responses usually arrive in ensemble order; fall back to a search otherwise.
    const LevelResponse* r = nullptr;
    if (cursor < responses.size() && responses[cursor].level == w.level) {
      r = &responses[cursor++];
    } else {
      auto it = std::find_if(responses.begin(), responses.end(),
                             [&](const LevelResponse& x) { return x.level == w.level; });
      if (it == responses.end()) throw std::invalid_argument("combine: missing response for a retained level");
      r = &*it;
    }
    gram += w.probability * r->gram;
    trace_sum += w.probability * r->trace_sum;
  }
  return QubitChannel(gram, trace_sum, ensemble.discarded_weight());
}

QubitChannel transfer_map(const Spectrum& full, const ThermalEnsemble& ensemble, double t) {
  const Spectrum& channel = ensemble.channel();
  channel_sites_of(channel, full);
  Eigen::Matrix4cd gram = Eigen::Matrix4cd::Zero();
  double trace_sum = 0.0;
  for (const auto& w : ensemble.weights()) {
    const LevelResponse r = direct_response(channel, full, w.level, t);
    gram += w.probability * r.gram;
    trace_sum += w.probability * r.trace_sum;
  }
  return QubitChannel(gram, trace_sum, ensemble.discarded_weight());
}

double kraus_trace_sum(const Spectrum& full, const ThermalEnsemble& ensemble, double t) {
  const Spectrum& channel = ensemble.channel();
  channel_sites_of(channel, full);
  double total = 0.0;
  for (const auto& w : ensemble.weights()) {
    const Vector u0 = evolve(full, t, injected_state(channel, 0, w.level));
    const Vector u1 = evolve(full, t, injected_state(channel, 1, w.level));
    const Eigen::Index envs = u0.size() / 2;
    Eigen::Map<const Matrix> a0(u0.data(), 2, envs);
    Eigen::Map<const Matrix> a1(u1.data(), 2, envs);
    total += w.probability * (a0.row(0) + a1.row(1)).squaredNorm();
  }
  return total;
}

double average_fidelity(const QubitChannel& channel) { return 1.0 / 3.0 + channel.trace_sum() / 6.0; }

FidelityEstimate average_fidelity(const Spectrum& full, const ThermalEnsemble& ensemble, double t) {
  // Each level contributes at most 4 p_alpha to the trace sum.
  return {1.0 / 3.0 + kraus_trace_sum(full, ensemble, t) / 6.0, 2.0 * ensemble.discarded_weight() / 3.0};
}

DensityMatrix output_state(const DensityMatrix& rho0, const Spectrum& full, const ThermalEnsemble& ensemble,
                           double t) {
  check_complete(ensemble, "output_state");
  if (rho0.n_sites() != 1) throw std::invalid_argument("output_state: input must be a single qubit");
  const QubitChannel ch = transfer_map(full, ensemble, t);
  return DensityMatrix(Matrix(hermitian_part(ch.apply(rho0.entries()))));
}

std::vector<KrausElement> kraus_elements(const Spectrum& full, const ThermalEnsemble& ensemble, double t) {
  const Spectrum& channel = ensemble.channel();
  channel_sites_of(channel, full);
  const Eigen::Index envs = channel.dimension();
  std::vector<KrausElement> out;
  out.reserve(static_cast<std::size_t>(envs) * ensemble.weights().size());
  for (const auto& w : ensemble.weights()) {
    const double amp = std::sqrt(w.probability);
    const Vector u0 = evolve(full, t, injected_state(channel, 0, w.level));
    const Vector u1 = evolve(full, t, injected_state(channel, 1, w.level));
    for (Eigen::Index env = 0; env < envs; ++env) {
      KrausElement k;
      k.environment = BasisIndex{static_cast<std::uint64_t>(env)};
      k.level = w.level;
      for (int row = 0; row < 2; ++row) {
        k.matrix(row, 0) = amp * u0(2 * env + row);
        k.matrix(row, 1) = amp * u1(2 * env + row);
      }
      out.push_back(k);
    }
  }
  return out;
}

Eigen::Matrix2cd kraus_completeness(std::span<const KrausElement> elements) {
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& k : elements) sum += k.matrix.adjoint() * k.matrix;
  return sum;
}

double ZeroTemperatureReduction::fidelity() const { return 1.0 / 3.0 + std::norm(m_plus + m_minus) / 6.0; }

Complex ZeroTemperatureReduction::aligned_m_plus() const { return m_plus * std::conj(m_minus) / std::abs(m_minus); }

ZeroTemperatureReduction zero_temperature_reduction(const Spectrum& channel, const Spectrum& full, double t) {
  const int n = channel_sites_of(channel, full);
  const RealVector& e = channel.energies();
  const Eigen::Index ground = [&] {
    Eigen::Index idx = 0;
    e.minCoeff(&idx);
    return idx;
  }();
  for (Eigen::Index a = 0; a < e.size(); ++a) {
    if (a != ground && e(a) - e(ground) <= kGroundTolerance) {
      throw std::domain_error("zero_temperature_reduction: channel ground state is degenerate");
    }
  }
  if (std::norm(channel.vectors()(0, ground)) < 1.0 - 1e-10) {
    throw std::domain_error("zero_temperature_reduction: channel ground state is not the all-down state");
  }

  const Eigen::Index dim = full.dimension();
  const Eigen::Index first_up = Eigen::Index{1} << n;  // site 0 up, rest down
  Vector start = Vector::Zero(dim);
  start(first_up) = 1.0;
  const Vector magnon = evolve(full, t, start);
  Vector vacuum_start = Vector::Zero(dim);
  vacuum_start(0) = 1.0;
  const Vector vacuum = evolve(full, t, vacuum_start);

  ZeroTemperatureReduction r;
  r.m_plus = magnon(1);  // only site N up
  r.m_minus = vacuum(0);
  double sum = 0.0;
  for (int site = 0; site < n; ++site) {
    sum += std::norm(magnon(static_cast<Eigen::Index>(site_mask(site, n + 1))));
  }
  r.big_m = std::sqrt(sum);
  return r;
}

DensityMatrix brute_force_output_state(const DensityMatrix& rho0, const Spectrum& full,
                                       const DensityMatrix& channel_density, double t) {
  if (rho0.n_sites() != 1) throw std::invalid_argument("brute_force_output_state: input must be a single qubit");
  Matrix out = brute_force_output(rho0.entries(), full, channel_density.entries(), t);
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

std::vector<Eigen::Vector2cd> pauli_axis_states() {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  return {
      Eigen::Vector2cd(1.0, 0.0),
      Eigen::Vector2cd(0.0, 1.0),
      Eigen::Vector2cd(r, r),
      Eigen::Vector2cd(r, -r),
      Eigen::Vector2cd(r, i * r),
      Eigen::Vector2cd(r, -i * r),
  };
}

double six_state_fidelity_oracle(const Spectrum& full, const ThermalEnsemble& ensemble, double t) {
  check_complete(ensemble, "six_state_fidelity_oracle");
  channel_sites_of(ensemble.channel(), full);
  const Matrix channel_density = thermal_density(ensemble);
  double sum = 0.0;
  for (const auto& phi : pauli_axis_states()) {
    const Matrix rho0 = phi * phi.adjoint();
    const Matrix out = brute_force_output(rho0, full, channel_density, t);
    sum += (phi.adjoint() * out * phi)(0, 0).real();
  }
  return sum / 6.0;
}

}  // namespace spinchain
