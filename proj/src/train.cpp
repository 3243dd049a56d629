#include "cormf/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cormf/error.hpp"
#include "cormf/estimator.hpp"
#include "cormf/rng.hpp"

namespace cormf {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kSampleStream = 0x5a3d;

}  // namespace

double AnnealSchedule::beta_at(long iteration, long total_iterations, double beta_target) const {
  if (!enabled) return beta_target;
  const long span = duration > 0 ? duration : std::max(1L, total_iterations / 2);
  const double progress = static_cast<double>(iteration) / static_cast<double>(span);
  return beta_target * std::min(1.0, start_fraction + (1.0 - start_fraction) * progress);
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ContractError(what);
  };
  require(learning_rate > 0.0, "learning rate must be positive");
  require(adam_beta1 > 0.0 && adam_beta1 < 1.0, "adam beta1 must lie in (0, 1)");
  require(adam_beta2 > 0.0 && adam_beta2 < 1.0, "adam beta2 must lie in (0, 1)");
  require(adam_epsilon > 0.0, "adam epsilon must be positive");
  require(batch_size >= 2, "batch size must be at least 2");
  require(iterations > 0, "iterations must be positive");
  require(clip_norm > 0.0, "clip norm must be positive");
  require(scheduler_patience > 0, "scheduler patience must be positive");
  require(scheduler_factor > 0.0 && scheduler_factor < 1.0, "scheduler factor must lie in (0, 1)");
  require(scheduler_threshold >= 0.0, "scheduler threshold must be non-negative");
  require(scheduler_window > 0, "scheduler window must be positive");
  require(anneal.start_fraction > 0.0 && anneal.start_fraction <= 1.0, "anneal start must lie in (0, 1]");
  require(anneal.duration >= 0, "anneal duration must be non-negative");
}

Adam::Adam(Eigen::Index size, double beta1, double beta2, double epsilon)
    : beta1_(beta1), beta2_(beta2), epsilon_(epsilon), m_(Eigen::VectorXd::Zero(size)),
      v_(Eigen::VectorXd::Zero(size)) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double learning_rate) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= learning_rate * (m_.array() / c1) / ((v_.array() / c2).sqrt() + epsilon_);
}

PlateauScheduler::PlateauScheduler(double learning_rate, long patience, double factor, double threshold,
                                   long window)
    : lr_(learning_rate), patience_(patience), factor_(factor), threshold_(threshold), window_(window),
      best_(std::numeric_limits<double>::infinity()) {}

double PlateauScheduler::observe(double value) {
  recent_.push_back(value);
  running_sum_ += value;
  if (static_cast<long>(recent_.size()) > window_) {
    running_sum_ -= recent_.front();
    recent_.erase(recent_.begin());
  }
  const double mean = running_sum_ / static_cast<double>(recent_.size());
  if (mean < best_ - threshold_ * std::abs(best_) || !std::isfinite(best_)) {
    best_ = mean;
    stale_ = 0;
  } else if (++stale_ > patience_) {
    lr_ *= factor_;
    stale_ = 0;
  }
  return lr_;
}

double clip_gradient_norm(Eigen::VectorXd& grad, double max_norm) {
  const double norm = grad.norm();
  if (norm > max_norm) grad *= max_norm / norm;
  return norm;
}

double TrainReport::final_magnetization() const {
  const auto& last = spin_means.back();
  double sum = 0.0;
  for (double v : last) sum += v;
  return sum / static_cast<double>(last.size());
}

TrainResult train(const IsingModel& model, const SpinOrder& order, RnnArchitecture arch, const TrainConfig& cfg,
                  const IterationObserver& observer) {
  return train_from(model, order, RnnMeanField::initialize(arch, derive_seed(cfg.seed, kInitStream)), cfg,
                    observer);
}

TrainResult train_from(const IsingModel& model, const SpinOrder& order, RnnMeanField rnn, const TrainConfig& cfg,
                       const IterationObserver& observer) {
  cfg.validate();
  if (order.size() != model.n()) throw ContractError("spin order length does not match the model");

  const OrderedModel ordered(model, order);
  const int n = model.n();
  Adam adam(static_cast<Eigen::Index>(rnn.parameter_count()), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon);
  PlateauScheduler scheduler(cfg.learning_rate, cfg.scheduler_patience, cfg.scheduler_factor,
                             cfg.scheduler_threshold, cfg.scheduler_window);

  TrainReport report;
  report.best_free_energy = std::numeric_limits<double>::infinity();
  ForwardPass pass;
  for (long it = 0; it < cfg.iterations; ++it) {
    const double beta_t = cfg.anneal.beta_at(it, cfg.iterations, model.beta());
    const double lr = scheduler.learning_rate();
    const auto spins = sample_ordered(rnn, n, cfg.batch_size, derive_seed(cfg.seed, kSampleStream, static_cast<std::uint64_t>(it)), &pass);
    auto estimate = estimate_gradient(rnn, ordered, order, spins, pass, beta_t);

    if (!std::isfinite(estimate.free_energy.mean) || !estimate.gradient.allFinite()) {
      throw NumericAbort("non-finite free energy or gradient at iteration " + std::to_string(it), it);
    }
    const double norm = clip_gradient_norm(estimate.gradient, cfg.clip_norm);

    report.free_energy.push_back(estimate.free_energy.mean);
    report.free_energy_stderr.push_back(estimate.free_energy.std_error);
    report.grad_norm.push_back(norm);
    report.learning_rate.push_back(lr);
    report.beta.push_back(beta_t);
    report.spin_means.emplace_back(estimate.spin_means.data(), estimate.spin_means.data() + n);
    if (estimate.free_energy.mean < report.best_free_energy) {
      report.best_free_energy = estimate.free_energy.mean;
      report.best_iteration = it;
    }

    adam.step(rnn.mutable_parameters(), estimate.gradient, lr);
    scheduler.observe(estimate.free_energy.mean);
    if (observer) observer(it, report);
  }
  if (!rnn.parameters().allFinite()) {
    throw NumericAbort("non-finite parameters after training", cfg.iterations - 1);
  }
  return {std::move(rnn), std::move(report)};
}

}  // namespace cormf
