#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "cormf/ising.hpp"
#include "cormf/ordering.hpp"
#include "cormf/rnn.hpp"

namespace cormf {

/// The model's couplings and fields permuted into generation order, so that
/// batch energies can be taken directly on an OrderedBatch.
class OrderedModel {
 public:
  OrderedModel(const IsingModel& model, const SpinOrder& order);

  int n() const { return static_cast<int>(fields_.size()); }
  double beta() const { return beta_; }
  Eigen::VectorXd energies(const OrderedBatch& spins) const;

 private:
  Eigen::MatrixXd couplings_;
  Eigen::VectorXd fields_;
  double beta_;
};

struct FreeEnergyEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error of E(X) + ln Q(X) / beta over `count` samples of Q.
FreeEnergyEstimate variational_free_energy_estimate(const RnnMeanField& rnn, const IsingModel& model,
                                                    const SpinOrder& order, std::size_t count,
                                                    std::uint64_t seed);

/// sum_X Q(X) [E(X) + ln Q(X) / beta], by enumeration.
double exact_variational_free_energy(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                                     int max_spins = 12);

/// KL(Q || P) in nats, by enumeration.
double exact_kl_divergence(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                           int max_spins = 12);

struct GradientEstimate {
  Eigen::VectorXd gradient;
  double baseline = 0.0;
  double reward_variance = 0.0;
  /// Batch statistics of E + ln Q / beta_target on the same samples.
  FreeEnergyEstimate free_energy;
  /// Per-spin sample means, indexed by spin (not by step).
  Eigen::VectorXd spin_means;
};

/// Score-function estimate of dF/dtheta with the batch-mean reward baseline:
///   R_k = beta E(X_k) + ln Q(X_k),  b = mean_k R_k,
///   grad = (1/K) sum_k d ln Q(X_k) (R_k - b) / beta.
/// `reward_beta` replaces beta inside R (annealing); free-energy statistics
/// always use the model's beta. Requires K >= 2.
GradientEstimate estimate_gradient(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                                   std::size_t count, std::uint64_t seed,
                                   std::optional<double> reward_beta = std::nullopt);

/// Same estimator on an already drawn batch with its forward pass.
GradientEstimate estimate_gradient(const RnnMeanField& rnn, const OrderedModel& model, const SpinOrder& order,
                                   const OrderedBatch& spins, const ForwardPass& pass, double reward_beta);

/// Population form sum_X Q(X) d ln Q(X) (R(X) - b) / beta by enumeration.
/// With no baseline given, b = E_Q[R] is enumerated too.
Eigen::VectorXd exact_expected_gradient(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                                        std::optional<double> baseline = std::nullopt, int max_spins = 12);

/// E_Q[d ln Q], by enumeration; zero for any parameters.
Eigen::VectorXd exact_score_mean(const RnnMeanField& rnn, const SpinOrder& order, int max_spins = 12);

struct Evaluation {
  FreeEnergyEstimate free_energy;
  Magnetization magnetization;
};

/// Free energy and magnetization from `count` fresh samples drawn in chunks.
Evaluation evaluate(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order, std::size_t count,
                    std::uint64_t seed);

}  // namespace cormf
