#include "cormf/nmf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cormf/error.hpp"
#include "cormf/rng.hpp"

namespace cormf {

namespace {

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

void check_interior(const IsingModel& model, const Eigen::VectorXd& m) {
  if (m.size() != model.n()) throw ContractError("mean-value vector length does not match the model");
  if (!(m.array().abs() < 1.0).all()) throw ContractError("mean values must lie strictly inside (-1, 1)");
}

}  // namespace

double nmf_free_energy(const IsingModel& model, const Eigen::VectorXd& mean_values) {
  check_interior(model, mean_values);
  const double interaction = mean_values.dot(model.couplings() * mean_values);
  const double field = model.fields().dot(mean_values);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < mean_values.size(); ++i) entropy += binary_entropy((1.0 + mean_values(i)) / 2.0);
  return interaction + field - entropy / model.beta();
}

Eigen::VectorXd nmf_grad(const IsingModel& model, const Eigen::VectorXd& mean_values) {
  check_interior(model, mean_values);
  return model.pair_couplings() * mean_values + model.fields() +
         mean_values.array().atanh().matrix() / model.beta();
}

NmfOptions NmfOptions::from(const TrainConfig& cfg, int restarts) {
  NmfOptions o;
  o.learning_rate = cfg.learning_rate;
  o.adam_beta1 = cfg.adam_beta1;
  o.adam_beta2 = cfg.adam_beta2;
  o.adam_epsilon = cfg.adam_epsilon;
  o.iterations = cfg.iterations;
  o.clip_norm = cfg.clip_norm;
  o.scheduler_patience = cfg.scheduler_patience;
  o.scheduler_factor = cfg.scheduler_factor;
  o.restarts = restarts;
  o.seed = cfg.seed;
  return o;
}

double NmfSolution::mean_free_energy() const {
  double s = 0.0;
  for (const auto& r : restarts) s += r.free_energy;
  return s / static_cast<double>(restarts.size());
}

double NmfSolution::std_free_energy() const {
  if (restarts.size() < 2) return 0.0;
  const double mean = mean_free_energy();
  double s = 0.0;
  for (const auto& r : restarts) s += (r.free_energy - mean) * (r.free_energy - mean);
  return std::sqrt(s / static_cast<double>(restarts.size() - 1));
}

NmfSolution nmf_minimize(const IsingModel& model, const NmfOptions& options) {
  if (options.restarts < 1) throw ContractError("nmf needs at least one restart");
  if (options.iterations < 1) throw ContractError("nmf needs at least one iteration");
  const int n = model.n();

  NmfSolution best;
  best.free_energy = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(options.seed, 0x6e6d66, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd theta(n);
    for (int i = 0; i < n; ++i) theta(i) = rng.uniform(-options.init_scale, options.init_scale);

    Adam adam(n, options.adam_beta1, options.adam_beta2, options.adam_epsilon);
    PlateauScheduler scheduler(options.learning_rate, options.scheduler_patience, options.scheduler_factor, 1e-4, 50);

    NmfRestart run;
    run.free_energy = std::numeric_limits<double>::infinity();
    for (long it = 0; it < options.iterations; ++it) {
      const Eigen::VectorXd m = theta.array().tanh();
      // tanh saturates to exactly +-1 in double precision; the objective is
      // then at its boundary and the iterate is kept at the last interior point.
      if (!(m.array().abs() < 1.0).all()) break;
      const double f = nmf_free_energy(model, m);
      if (!std::isfinite(f)) throw NumericAbort("non-finite nmf objective at iteration " + std::to_string(it), it);
      if (f < run.free_energy) {
        run.free_energy = f;
        run.mean_values = m;
      }
      Eigen::VectorXd g = nmf_grad(model, m).array() * (1.0 - m.array().square());
      run.iterations_used = it + 1;
      if (g.norm() < options.tolerance) {
        run.converged = true;
        break;
      }
      clip_gradient_norm(g, options.clip_norm);
      adam.step(theta, g, scheduler.learning_rate());
      scheduler.observe(f);
    }
    if (run.free_energy < best.free_energy) {
      best.free_energy = run.free_energy;
      best.mean_values = run.mean_values;
      best.iterations_used = run.iterations_used;
      best.converged = run.converged;
    }
    best.restarts.push_back(std::move(run));
  }
  return best;
}

}  // namespace cormf
