#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cormf/ising.hpp"
#include "cormf/train.hpp"

namespace cormf {

/// Fully factorized free energy
///   sum_ij J_ij m_i m_j + sum_i h_i m_i - (1/beta) sum_i H((1 + m_i) / 2)
/// with binary entropy H in nats. Entries of m must lie strictly inside (-1, 1).
double nmf_free_energy(const IsingModel& model, const Eigen::VectorXd& mean_values);

/// d/dm_i = sum_j (J_ij + J_ji) m_j + h_i + atanh(m_i) / beta.
Eigen::VectorXd nmf_grad(const IsingModel& model, const Eigen::VectorXd& mean_values);

struct NmfOptions {
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  long iterations = 10000;
  double clip_norm = 1.0;
  long scheduler_patience = 1000;
  double scheduler_factor = 0.8;
  int restarts = 10;
  double init_scale = 0.1;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;

  /// Optimizer settings shared with the recurrent model's training.
  static NmfOptions from(const TrainConfig& cfg, int restarts = 10);
};

struct NmfRestart {
  Eigen::VectorXd mean_values;
  double free_energy = 0.0;
  long iterations_used = 0;
  bool converged = false;
};

struct NmfSolution {
  /// Best restart.
  Eigen::VectorXd mean_values;
  double free_energy = 0.0;
  long iterations_used = 0;
  bool converged = false;
  std::vector<NmfRestart> restarts;

  double magnetization() const { return mean_values.mean(); }
  double mean_free_energy() const;
  double std_free_energy() const;
};

/// Adam on theta with m = tanh(theta), theta_0 ~ U[-init_scale, init_scale];
/// each restart keeps its best iterate and stops once |grad| < tolerance.
NmfSolution nmf_minimize(const IsingModel& model, const NmfOptions& options);

}  // namespace cormf
