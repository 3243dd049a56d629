#include "cormf/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "cormf/error.hpp"
#include "cormf/rng.hpp"

namespace cormf {

namespace {

void require_length(const IsingModel& model, SpinView config) {
  if (static_cast<int>(config.size()) != model.n()) {
    throw ContractError("configuration has " + std::to_string(config.size()) +
                        " spins, model has " + std::to_string(model.n()));
  }
}

}  // namespace

IsingModel::IsingModel(Eigen::MatrixXd couplings, Eigen::VectorXd fields, double beta)
    : couplings_(std::move(couplings)), fields_(std::move(fields)), beta_(beta) {
  const auto n = fields_.size();
  if (n < 1) throw ContractError("model needs at least one spin");
  if (couplings_.rows() != n || couplings_.cols() != n) {
    throw ContractError("coupling matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!couplings_.allFinite() || !fields_.allFinite()) {
    throw ContractError("couplings and fields must be finite");
  }
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ContractError("beta must be positive and finite");
  if (couplings_.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw ContractError("coupling matrix must have a zero diagonal");
  }
  pair_ = couplings_ + couplings_.transpose();
}

SpinConfiguration::SpinConfiguration(std::vector<Spin> spins) : spins_(std::move(spins)) {
  for (Spin s : spins_) {
    if (s != 1 && s != -1) throw ContractError("spin values must be -1 or +1");
  }
}

SpinConfiguration SpinConfiguration::from_bits(std::uint64_t bits, int n) {
  std::vector<Spin> spins(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) spins[static_cast<std::size_t>(i)] = (bits >> i) & 1U ? 1 : -1;
  return SpinConfiguration(std::move(spins));
}

SpinConfiguration SpinConfiguration::all(int n, Spin value) {
  return SpinConfiguration(std::vector<Spin>(static_cast<std::size_t>(n), value));
}

SampleSet::SampleSet(int n) : n_(n) {
  if (n < 1) throw ContractError("sample set needs at least one spin");
}

void SampleSet::add(SpinView spins) {
  if (static_cast<int>(spins.size()) != n_) throw ContractError("sample length mismatch");
  if (has_log_probs()) throw ContractError("sample set carries log-probabilities");
  data_.insert(data_.end(), spins.begin(), spins.end());
}

void SampleSet::add(SpinView spins, double log_prob) {
  if (static_cast<int>(spins.size()) != n_) throw ContractError("sample length mismatch");
  if (!empty() && !has_log_probs()) throw ContractError("sample set carries no log-probabilities");
  if (log_prob > 0.0) throw ContractError("log-probability must be <= 0");
  data_.insert(data_.end(), spins.begin(), spins.end());
  log_probs_.push_back(log_prob);
}

void SampleSet::reserve(std::size_t count) {
  data_.reserve(count * static_cast<std::size_t>(n_));
}

double energy(const IsingModel& model, SpinView config) {
  require_length(model, config);
  const int n = model.n();
  const auto& J = model.couplings();
  const auto& h = model.fields();
  double e = 0.0;
  for (int j = 0; j < n; ++j) {
    double column = 0.0;
    for (int i = 0; i < n; ++i) column += J(i, j) * config[static_cast<std::size_t>(i)];
    e += (column + h(j)) * config[static_cast<std::size_t>(j)];
  }
  return e;
}

void check_enumeration_guard(int n, int limit) {
  if (n > limit) {
    throw GuardError("enumeration over " + std::to_string(n) + " spins exceeds the limit of " +
                         std::to_string(limit),
                     limit);
  }
}

void for_each_configuration(const IsingModel& model,
                            const std::function<void(SpinView, double)>& visit, int max_spins) {
  const int n = model.n();
  check_enumeration_guard(n, max_spins);
  const auto& pair = model.pair_couplings();
  const auto& h = model.fields();

  std::vector<Spin> x(static_cast<std::size_t>(n), -1);
  std::vector<double> local(static_cast<std::size_t>(n));
  double e = 0.0;
  auto refresh = [&] {
    e = energy(model, x);
    for (int i = 0; i < n; ++i) {
      double f = 0.0;
      for (int j = 0; j < n; ++j) f += pair(i, j) * x[static_cast<std::size_t>(j)];
      local[static_cast<std::size_t>(i)] = f;
    }
  };
  refresh();
  visit(x, e);

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int i = std::countr_zero(g);
    const auto ui = static_cast<std::size_t>(i);
    const double s = x[ui];
    e += -2.0 * s * (local[ui] + h(i));
    x[ui] = static_cast<Spin>(-x[ui]);
    for (int j = 0; j < n; ++j) local[static_cast<std::size_t>(j)] -= 2.0 * s * pair(j, i);
    // Incremental updates drift; resynchronise periodically.
    if ((g & 0xFFF) == 0) refresh();
    visit(x, e);
  }
}

ExactSummary exact_summary(const IsingModel& model, int max_spins) {
  const int n = model.n();
  const double beta = model.beta();
  double min_energy = std::numeric_limits<double>::infinity();
  for_each_configuration(
      model, [&](SpinView, double e) { min_energy = std::min(min_energy, e); }, max_spins);

  long double total = 0.0L;
  std::vector<long double> weighted(static_cast<std::size_t>(n), 0.0L);
  for_each_configuration(
      model,
      [&](SpinView x, double e) {
        const long double w = std::exp(static_cast<long double>(-beta * (e - min_energy)));
        total += w;
        for (int i = 0; i < n; ++i) weighted[static_cast<std::size_t>(i)] += w * x[static_cast<std::size_t>(i)];
      },
      max_spins);

  ExactSummary out;
  out.log_partition = -beta * min_energy + static_cast<double>(std::log(total));
  out.free_energy = -out.log_partition / beta;
  out.per_spin.resize(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out.per_spin[ui] = static_cast<double>(weighted[ui] / total);
    sum += out.per_spin[ui];
  }
  out.magnetization = sum / n;
  return out;
}

double exact_log_partition(const IsingModel& model, int max_spins) {
  const double beta = model.beta();
  double min_energy = std::numeric_limits<double>::infinity();
  for_each_configuration(
      model, [&](SpinView, double e) { min_energy = std::min(min_energy, e); }, max_spins);
  long double total = 0.0L;
  for_each_configuration(
      model,
      [&](SpinView, double e) { total += std::exp(static_cast<long double>(-beta * (e - min_energy))); },
      max_spins);
  return -beta * min_energy + static_cast<double>(std::log(total));
}

double exact_free_energy(const IsingModel& model, int max_spins) {
  return -exact_log_partition(model, max_spins) / model.beta();
}

std::vector<double> exact_boltzmann(const IsingModel& model, int max_spins) {
  const int n = model.n();
  check_enumeration_guard(n, max_spins);
  const double log_z = exact_log_partition(model, max_spins);
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<double> probs(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const auto x = SpinConfiguration::from_bits(bits, n);
    probs[bits] = std::exp(-model.beta() * energy(model, x) - log_z);
  }
  return probs;
}

IsingModel absorb_external_field(const IsingModel& model) {
  const int n = model.n();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
  J.topLeftCorner(n, n) = model.couplings();
  J.col(n).head(n) = model.fields();
  return IsingModel(std::move(J), Eigen::VectorXd::Zero(n + 1), model.beta());
}

SampleSet gibbs_sample(const IsingModel& model, const GibbsOptions& options) {
  if (options.samples == 0 || options.thin == 0) {
    throw ContractError("gibbs sampling needs positive sample and thinning counts");
  }
  const int n = model.n();
  const double beta = model.beta();
  const auto& pair = model.pair_couplings();
  const auto& h = model.fields();

  Rng rng(options.seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;

  auto sweep = [&] {
    for (int i = 0; i < n; ++i) {
      // pair(i, i) == 0, so the site's own value drops out of the local field.
      const double delta = 2.0 * (pair.col(i).dot(x) + h(i));
      const double p_up = 1.0 / (1.0 + std::exp(beta * delta));
      x(i) = rng.uniform() < p_up ? 1.0 : -1.0;
    }
  };

  for (std::size_t s = 0; s < options.burn_in; ++s) sweep();

  SampleSet out(n);
  out.reserve(options.samples);
  std::vector<Spin> buffer(static_cast<std::size_t>(n));
  while (out.size() < options.samples) {
    for (std::size_t s = 0; s < options.thin; ++s) sweep();
    for (int i = 0; i < n; ++i) buffer[static_cast<std::size_t>(i)] = x(i) > 0 ? 1 : -1;
    out.add(buffer);
  }
  return out;
}

Magnetization magnetization(const SampleSet& samples) {
  if (samples.empty()) throw ContractError("magnetization of an empty sample set");
  const int n = samples.n();
  const auto count = samples.size();
  Magnetization m;
  m.per_spin.assign(static_cast<std::size_t>(n), 0.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto x = samples[k];
    double row = 0.0;
    for (int i = 0; i < n; ++i) {
      m.per_spin[static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i)];
      row += x[static_cast<std::size_t>(i)];
    }
    row /= n;
    sum += row;
    sum_sq += row * row;
  }
  const double kd = static_cast<double>(count);
  for (auto& v : m.per_spin) v /= kd;
  m.global = sum / kd;
  if (count > 1) {
    const double var = std::max(0.0, (sum_sq - kd * m.global * m.global) / (kd - 1.0));
    m.std_error = std::sqrt(var / kd);
  }
  return m;
}

double frobenius_norm(const Eigen::MatrixXd& m) { return m.norm(); }

double inf_to_one_norm(const Eigen::MatrixXd& m, int max_spins) {
  const int n = static_cast<int>(m.cols());
  check_enumeration_guard(n, max_spins);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, -1.0);
  Eigen::VectorXd mx = m * x;
  double best = mx.cwiseAbs().sum();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int j = std::countr_zero(g);
    mx -= 2.0 * x(j) * m.col(j);
    x(j) = -x(j);
    if ((g & 0xFFF) == 0) mx = m * x;
    best = std::max(best, mx.cwiseAbs().sum());
  }
  return best;
}

}  // namespace cormf
