#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cormf/ising.hpp"
#include "cormf/ordering.hpp"
#include "cormf/rnn.hpp"

namespace cormf {

/// beta(t) = beta_target * min(1, start + (1 - start) * t / duration).
struct AnnealSchedule {
  bool enabled = true;
  double start_fraction = 0.01;
  /// Iterations until the target is reached; 0 means half of the run.
  long duration = 0;

  double beta_at(long iteration, long total_iterations, double beta_target) const;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t batch_size = 1000;
  long iterations = 10000;
  double clip_norm = 1.0;
  long scheduler_patience = 1000;
  double scheduler_factor = 0.8;
  /// Relative improvement the plateau detector requires of its running mean.
  double scheduler_threshold = 1e-4;
  long scheduler_window = 50;
  AnnealSchedule anneal;
  std::uint64_t seed = 0;

  /// Throws ContractError on non-positive values or a factor outside (0, 1).
  void validate() const;
};

/// Adam with bias-corrected moments.
class Adam {
 public:
  Adam(Eigen::Index size, double beta1, double beta2, double epsilon);
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double learning_rate);

 private:
  double beta1_, beta2_, epsilon_;
  long t_ = 0;
  Eigen::VectorXd m_, v_;
};

/// Multiplies the learning rate by `factor` once the running mean of the
/// monitored value has gone `patience` observations without improving by a
/// relative `threshold` on its best.
class PlateauScheduler {
 public:
  PlateauScheduler(double learning_rate, long patience, double factor, double threshold, long window);
  /// Records one value and returns the learning rate to use next.
  double observe(double value);
  double learning_rate() const { return lr_; }

 private:
  double lr_;
  long patience_;
  double factor_;
  double threshold_;
  long window_;
  std::vector<double> recent_;
  double running_sum_ = 0.0;
  double best_;
  long stale_ = 0;
};

/// Rescales `grad` in place so that its Euclidean norm is at most max_norm.
/// Returns the norm before clipping.
double clip_gradient_norm(Eigen::VectorXd& grad, double max_norm);

struct TrainReport {
  std::vector<double> free_energy;
  std::vector<double> free_energy_stderr;
  std::vector<double> grad_norm;
  std::vector<double> learning_rate;
  std::vector<double> beta;
  /// spin_means[t][i]: batch mean of spin i at iteration t.
  std::vector<std::vector<double>> spin_means;
  double best_free_energy = 0.0;
  long best_iteration = -1;

  long iterations_completed() const { return static_cast<long>(free_energy.size()); }
  double final_free_energy() const { return free_energy.back(); }
  double final_free_energy_stderr() const { return free_energy_stderr.back(); }
  /// Mean over spins of the final iteration's batch spin means.
  double final_magnetization() const;
};

struct TrainResult {
  RnnMeanField rnn;
  TrainReport report;
};

using IterationObserver = std::function<void(long iteration, const TrainReport&)>;

/// Variational training of Q by Adam on the score-function gradient with
/// norm clipping, plateau learning-rate decay and beta annealing. Throws
/// NumericAbort on a non-finite free energy or gradient.
TrainResult train(const IsingModel& model, const SpinOrder& order, RnnArchitecture arch, const TrainConfig& cfg,
                  const IterationObserver& observer = {});

/// Continues training from given parameters (same loop as train()).
TrainResult train_from(const IsingModel& model, const SpinOrder& order, RnnMeanField rnn, const TrainConfig& cfg,
                       const IterationObserver& observer = {});

}  // namespace cormf
