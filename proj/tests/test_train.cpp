#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"

#include "cormf/error.hpp"
#include "cormf/estimator.hpp"
#include "cormf/train.hpp"

using namespace cormf;

TEST_CASE("Adam") {
  Adam adam(3, 0.9, 0.999, 1e-8);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd g(3);
  g << 2.0, -0.5, 0.0;
  adam.step(p, g, 0.1);
  CHECK(p(0) == doctest::Approx(-0.1).epsilon(1e-7));
  CHECK(p(1) == doctest::Approx(0.1).epsilon(1e-7));
  CHECK(p(2) == 0.0);

  Adam quad(1, 0.9, 0.999, 1e-8);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 3.0);
  for (int i = 0; i < 5000; ++i) quad.step(x, 2.0 * x, 0.01);
  CHECK(std::abs(x(0)) < 1e-2);
}

TEST_CASE("gradient clipping") {
  Eigen::VectorXd g(2);
  g << 3.0, 4.0;
  CHECK(clip_gradient_norm(g, 1.0) == doctest::Approx(5.0));
  CHECK(g.norm() == doctest::Approx(1.0));
  CHECK(g(0) == doctest::Approx(0.6));
  CHECK(clip_gradient_norm(g, 2.0) == doctest::Approx(1.0));
  CHECK(g.norm() == doctest::Approx(1.0));
}

TEST_CASE("plateau scheduler") {
  PlateauScheduler s(1.0, 3, 0.5, 1e-4, 1);
  CHECK(s.observe(10.0) == 1.0);
  CHECK(s.observe(9.0) == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(s.observe(9.0) == 1.0);
  CHECK(s.observe(9.0) == 0.5);
  CHECK(s.observe(8.0) == 0.5);

  PlateauScheduler tiny(1.0, 2, 0.5, 0.1, 1);
  tiny.observe(-100.0);
  tiny.observe(-105.0);
  tiny.observe(-106.0);
  CHECK(tiny.observe(-107.0) == 0.5);

  PlateauScheduler smooth(1.0, 100, 0.8, 0.0, 4);
  for (int i = 0; i < 50; ++i) CHECK(smooth.observe(i % 2 ? 1.0 : -1.0 - 1e-3 * i) == 1.0);
}

TEST_CASE("beta annealing") {
  AnnealSchedule a;
  CHECK(a.beta_at(0, 1000, 2.0) == doctest::Approx(0.02));
  CHECK(a.beta_at(250, 1000, 2.0) == doctest::Approx(2.0 * (0.01 + 0.99 * 0.5)));
  CHECK(a.beta_at(500, 1000, 2.0) == doctest::Approx(2.0));
  CHECK(a.beta_at(900, 1000, 2.0) == 2.0);
  a.duration = 10;
  a.start_fraction = 0.1;
  CHECK(a.beta_at(5, 1000, 1.0) == doctest::Approx(0.55));
  a.enabled = false;
  CHECK(a.beta_at(0, 1000, 3.0) == 3.0);
}

TEST_CASE("configuration validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto mutate) {
    TrainConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.learning_rate = 0; }).validate(), ContractError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.batch_size = 1; }).validate(), ContractError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.iterations = 0; }).validate(), ContractError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.scheduler_factor = 1.0; }).validate(), ContractError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.clip_norm = -1; }).validate(), ContractError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.adam_beta2 = 1.0; }).validate(), ContractError);
  const IsingModel m(Eigen::MatrixXd::Zero(3, 3), Eigen::VectorXd::Zero(3));
  CHECK_THROWS_AS(train(m, SpinOrder::identity(4), {}, c), ContractError);
}

TEST_CASE("training drives free spins to the entropy maximum") {
  const int n = 4;
  const IsingModel free_spins(Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), 0.5);
  auto rnn = RnnMeanField::initialize({.layers = 2, .hidden = 8}, 1);
  rnn.output_weights().setConstant(0.3);
  rnn.output_bias()(0, 0) = 1.0;
  const auto order = SpinOrder::identity(n);
  const double start = exact_variational_free_energy(rnn, free_spins, order);

  TrainConfig cfg;
  cfg.iterations = 1500;
  cfg.batch_size = 200;
  cfg.learning_rate = 1e-2;
  cfg.seed = 3;
  const auto result = train_from(free_spins, order, rnn, cfg);
  const double target = -n * std::numbers::ln2 / 0.5;
  const double end = exact_variational_free_energy(result.rnn, free_spins, order);
  CHECK(start - target > 0.1);
  CHECK(end - target < 1e-3);
  CHECK(result.report.iterations_completed() == 1500);
  const Eigen::VectorXd q = conditionals(result.rnn, order, SpinConfiguration::all(n, 1));
  CHECK((q.array() - 0.5).abs().maxCoeff() < 0.02);
}

TEST_CASE("training history and determinism") {
  Eigen::MatrixXd J(3, 3);
  J << 0, 0.5, -0.2, 0.5, 0, 0.3, -0.2, 0.3, 0;
  Eigen::VectorXd h(3);
  h << 0.1, -0.4, 0.2;
  const IsingModel m(J, h, 1.0);
  TrainConfig cfg;
  cfg.iterations = 60;
  cfg.batch_size = 50;
  cfg.seed = 11;
  long calls = 0;
  const auto a = train(m, SpinOrder::identity(3), {.layers = 1, .hidden = 6}, cfg, [&](long, const TrainReport&) { ++calls; });
  const auto b = train(m, SpinOrder::identity(3), {.layers = 1, .hidden = 6}, cfg);
  CHECK(calls == 60);
  CHECK(a.report.free_energy == b.report.free_energy);
  CHECK(a.rnn.parameters() == b.rnn.parameters());
  CHECK(a.report.free_energy.size() == 60);
  CHECK(a.report.grad_norm.size() == 60);
  CHECK(a.report.beta.size() == 60);
  CHECK(a.report.spin_means.size() == 60);
  CHECK(a.report.free_energy.front() == doctest::Approx(-3 * std::numbers::ln2 + 0.0).epsilon(1.0));
  CHECK(a.report.beta.front() == doctest::Approx(0.01));
  CHECK(a.report.beta.back() == 1.0);
  CHECK(a.report.best_free_energy <= a.report.final_free_energy());

  cfg.seed = 12;
  const auto c = train(m, SpinOrder::identity(3), {.layers = 1, .hidden = 6}, cfg);
  CHECK(c.report.free_energy != a.report.free_energy);
}

TEST_CASE("zero-initialized head starts at the uniform free energy") {
  const IsingModel free_spins(Eigen::MatrixXd::Zero(5, 5), Eigen::VectorXd::Zero(5), 2.0);
  TrainConfig cfg;
  cfg.iterations = 1;
  cfg.batch_size = 10;
  const auto r = train(free_spins, SpinOrder::identity(5), {}, cfg);
  CHECK(r.report.free_energy.front() == doctest::Approx(-5 * std::numbers::ln2 / 2.0).epsilon(1e-14));
}

TEST_CASE("non-finite energies abort with the iteration index") {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, 2);
  J(0, 1) = std::numeric_limits<double>::max();
  J(1, 0) = std::numeric_limits<double>::max();
  const IsingModel m(J, Eigen::VectorXd::Zero(2));
  TrainConfig cfg;
  cfg.iterations = 5;
  cfg.batch_size = 20;
  try {
    train(m, SpinOrder::identity(2), {.layers = 1, .hidden = 4}, cfg);
    FAIL("expected an abort");
  } catch (const NumericAbort& e) {
    CHECK(e.iteration() == 0);
  }
}
