#include "cormf/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "cormf/error.hpp"
#include "cormf/rng.hpp"

namespace cormf {

namespace {

FreeEnergyEstimate mean_and_error(const Eigen::VectorXd& values) {
  const auto count = static_cast<double>(values.size());
  FreeEnergyEstimate out;
  out.mean = values.mean();
  if (values.size() > 1) {
    const double var = (values.array() - out.mean).square().sum() / (count - 1.0);
    out.std_error = std::sqrt(var / count);
  }
  return out;
}

}  // namespace

OrderedModel::OrderedModel(const IsingModel& model, const SpinOrder& order) : beta_(model.beta()) {
  const int n = model.n();
  if (order.size() != n) throw ContractError("spin order length does not match the model");
  couplings_.resize(n, n);
  fields_.resize(n);
  for (int t = 0; t < n; ++t) {
    fields_(t) = model.fields()(order[t]);
    for (int s = 0; s < n; ++s) couplings_(t, s) = model.couplings()(order[t], order[s]);
  }
}

Eigen::VectorXd OrderedModel::energies(const OrderedBatch& spins) const {
  const Eigen::MatrixXd js = couplings_ * spins;
  return (js.cwiseProduct(spins).colwise().sum() + fields_.transpose() * spins).transpose();
}

FreeEnergyEstimate variational_free_energy_estimate(const RnnMeanField& rnn, const IsingModel& model,
                                                    const SpinOrder& order, std::size_t count,
                                                    std::uint64_t seed) {
  if (count == 0) throw ContractError("free-energy estimate needs at least one sample");
  const OrderedModel om(model, order);
  ForwardPass pass;
  const auto spins = sample_ordered(rnn, order.size(), count, seed, &pass, false);
  const Eigen::VectorXd f = om.energies(spins) + pass.log_probs() / model.beta();
  return mean_and_error(f);
}

double exact_variational_free_energy(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                                     int max_spins) {
  const OrderedModel om(model, order);
  const auto spins = enumerate_ordered(order, max_spins);
  const Eigen::VectorXd lq = forward(rnn, spins, false).log_probs();
  const Eigen::VectorXd e = om.energies(spins);
  double total = 0.0;
  for (Eigen::Index b = 0; b < spins.cols(); ++b) total += std::exp(lq(b)) * (e(b) + lq(b) / model.beta());
  return total;
}

double exact_kl_divergence(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                           int max_spins) {
  const double log_z = exact_log_partition(model, max_spins);
  return model.beta() * exact_variational_free_energy(rnn, model, order, max_spins) + log_z;
}

GradientEstimate estimate_gradient(const RnnMeanField& rnn, const OrderedModel& model, const SpinOrder& order,
                                   const OrderedBatch& spins, const ForwardPass& pass, double reward_beta) {
  const auto count = spins.cols();
  if (count < 2) throw ContractError("the batch-mean baseline needs at least two samples");
  const Eigen::VectorXd e = model.energies(spins);
  const Eigen::VectorXd lq = pass.log_probs();
  const Eigen::VectorXd reward = reward_beta * e + lq;

  GradientEstimate out;
  out.baseline = reward.mean();
  out.reward_variance = (reward.array() - out.baseline).square().sum() / static_cast<double>(count - 1);
  out.free_energy = mean_and_error(e + lq / model.beta());

  const Eigen::VectorXd weights =
      (reward.array() - out.baseline) / (static_cast<double>(count) * reward_beta);
  out.gradient = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rnn.parameter_count()));
  accumulate_log_prob_gradient(rnn, spins, pass, weights, out.gradient);

  const int n = model.n();
  out.spin_means.resize(n);
  const Eigen::VectorXd step_means = spins.rowwise().mean();
  for (int t = 0; t < n; ++t) out.spin_means(order[t]) = step_means(t);
  return out;
}

GradientEstimate estimate_gradient(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                                   std::size_t count, std::uint64_t seed, std::optional<double> reward_beta) {
  if (count < 2) throw ContractError("the batch-mean baseline needs at least two samples");
  const OrderedModel om(model, order);
  ForwardPass pass;
  const auto spins = sample_ordered(rnn, order.size(), count, seed, &pass);
  return estimate_gradient(rnn, om, order, spins, pass, reward_beta.value_or(model.beta()));
}

Eigen::VectorXd exact_expected_gradient(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order,
                                        std::optional<double> baseline, int max_spins) {
  const OrderedModel om(model, order);
  const auto spins = enumerate_ordered(order, max_spins);
  const auto pass = forward(rnn, spins, true);
  const Eigen::VectorXd lq = pass.log_probs();
  const Eigen::VectorXd q = lq.array().exp();
  const Eigen::VectorXd reward = model.beta() * om.energies(spins) + lq;
  const double b = baseline.value_or(q.dot(reward));
  const Eigen::VectorXd weights = q.array() * (reward.array() - b) / model.beta();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rnn.parameter_count()));
  accumulate_log_prob_gradient(rnn, spins, pass, weights, grad);
  return grad;
}

Eigen::VectorXd exact_score_mean(const RnnMeanField& rnn, const SpinOrder& order, int max_spins) {
  const auto spins = enumerate_ordered(order, max_spins);
  const auto pass = forward(rnn, spins, true);
  const Eigen::VectorXd q = pass.log_probs().array().exp();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rnn.parameter_count()));
  accumulate_log_prob_gradient(rnn, spins, pass, q, grad);
  return grad;
}

Evaluation evaluate(const RnnMeanField& rnn, const IsingModel& model, const SpinOrder& order, std::size_t count,
                    std::uint64_t seed) {
  if (count == 0) throw ContractError("evaluation needs at least one sample");
  constexpr std::size_t kChunk = 10000;
  const OrderedModel om(model, order);
  const int n = model.n();

  Eigen::VectorXd f(static_cast<Eigen::Index>(count));
  SampleSet samples(n);
  samples.reserve(count);
  std::vector<Spin> x(static_cast<std::size_t>(n));
  std::size_t done = 0;
  for (std::uint64_t chunk = 0; done < count; ++chunk) {
    const std::size_t size = std::min(kChunk, count - done);
    ForwardPass pass;
    const auto spins = sample_ordered(rnn, n, size, derive_seed(seed, chunk), &pass, false);
    f.segment(static_cast<Eigen::Index>(done), static_cast<Eigen::Index>(size)) =
        om.energies(spins) + pass.log_probs() / model.beta();
    for (Eigen::Index k = 0; k < spins.cols(); ++k) {
      for (int t = 0; t < n; ++t) x[static_cast<std::size_t>(order[t])] = spins(t, k) > 0.0 ? 1 : -1;
      samples.add(x);
    }
    done += size;
  }
  return {mean_and_error(f), magnetization(samples)};
}

}  // namespace cormf
