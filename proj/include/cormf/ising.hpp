#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cormf {

using Spin = std::int8_t;
using SpinView = std::span<const Spin>;

/// Default size limit for anything that enumerates all 2^n configurations.
inline constexpr int kEnumerationLimit = 24;

/// Ising model with energy E(X) = sum_{i,j} J_ij x_i x_j + sum_i h_i x_i,
/// summed over every stored entry of J, and Boltzmann law P ~ exp(-beta E).
class IsingModel {
 public:
  /// Validates shapes, finiteness, zero diagonal and beta > 0.
  IsingModel(Eigen::MatrixXd couplings, Eigen::VectorXd fields, double beta = 1.0);

  int n() const { return static_cast<int>(fields_.size()); }
  const Eigen::MatrixXd& couplings() const { return couplings_; }
  const Eigen::VectorXd& fields() const { return fields_; }
  double beta() const { return beta_; }

  /// J + J^T; the coupling each pair actually feels in the energy.
  const Eigen::MatrixXd& pair_couplings() const { return pair_; }

 private:
  Eigen::MatrixXd couplings_;
  Eigen::VectorXd fields_;
  double beta_;
  Eigen::MatrixXd pair_;
};

class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  /// Every entry must be exactly -1 or +1.
  explicit SpinConfiguration(std::vector<Spin> spins);
  /// Bit i of `bits` set means spin i is +1.
  static SpinConfiguration from_bits(std::uint64_t bits, int n);
  static SpinConfiguration all(int n, Spin value);

  int size() const { return static_cast<int>(spins_.size()); }
  Spin operator[](int i) const { return spins_[static_cast<std::size_t>(i)]; }
  const std::vector<Spin>& spins() const { return spins_; }
  operator SpinView() const { return spins_; }
  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::vector<Spin> spins_;
};

/// Configurations stored contiguously, with optional per-sample log-probabilities.
class SampleSet {
 public:
  /// n must be positive.
  explicit SampleSet(int n);

  void add(SpinView spins);
  void add(SpinView spins, double log_prob);
  void reserve(std::size_t count);

  int n() const { return n_; }
  std::size_t size() const { return data_.size() / static_cast<std::size_t>(n_); }
  bool empty() const { return size() == 0; }
  SpinView operator[](std::size_t k) const {
    return SpinView(data_).subspan(k * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_));
  }
  bool has_log_probs() const { return !log_probs_.empty(); }
  const std::vector<double>& log_probs() const { return log_probs_; }
  bool operator==(const SampleSet&) const = default;

 private:
  int n_;
  std::vector<Spin> data_;
  std::vector<double> log_probs_;
};

double energy(const IsingModel& model, SpinView config);

/// ln Z by Gray-code enumeration with streaming log-sum-exp.
double exact_log_partition(const IsingModel& model, int max_spins = kEnumerationLimit);

/// F = -ln Z / beta.
double exact_free_energy(const IsingModel& model, int max_spins = kEnumerationLimit);

struct ExactSummary {
  double log_partition = 0.0;
  double free_energy = 0.0;
  double magnetization = 0.0;
  std::vector<double> per_spin;
};

/// ln Z, F and the exact per-spin Boltzmann means in one enumeration pass.
ExactSummary exact_summary(const IsingModel& model, int max_spins = kEnumerationLimit);

/// Exact Boltzmann probability of every configuration, indexed by bit pattern.
std::vector<double> exact_boltzmann(const IsingModel& model, int max_spins = kEnumerationLimit);

/// (n+1)-spin model with the fields moved into the last column of J and h = 0.
IsingModel absorb_external_field(const IsingModel& model);

struct GibbsOptions {
  std::size_t samples = 10000;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
};

/// Systematic-scan single-site Gibbs chain.
SampleSet gibbs_sample(const IsingModel& model, const GibbsOptions& options);

struct Magnetization {
  double global = 0.0;
  std::vector<double> per_spin;
  double std_error = 0.0;
};

Magnetization magnetization(const SampleSet& samples);

double frobenius_norm(const Eigen::MatrixXd& m);

/// max over x in {-1,1}^n of sum_i |sum_j M_ij x_j|, by enumeration.
double inf_to_one_norm(const Eigen::MatrixXd& m, int max_spins = kEnumerationLimit);

/// Visits every configuration of n spins in Gray-code order, passing the
/// current configuration and its energy. Throws GuardError above max_spins.
void for_each_configuration(const IsingModel& model,
                            const std::function<void(SpinView, double)>& visit,
                            int max_spins = kEnumerationLimit);

/// Throws GuardError when n exceeds limit.
void check_enumeration_guard(int n, int limit);

}  // namespace cormf
