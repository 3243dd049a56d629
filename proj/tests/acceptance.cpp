// Acceptance suite. Usage: acceptance [criterion ...]; runs everything when
// no names are given. One PASS/FAIL line per criterion; exit status 1 if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "cormf/bounds.hpp"
#include "cormf/datasets.hpp"
#include "cormf/estimator.hpp"
#include "cormf/nmf.hpp"
#include "cormf/ordering.hpp"
#include "cormf/rng.hpp"
#include "cormf/train.hpp"

using namespace cormf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string num(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

IsingModel random_model(std::mt19937_64& rng, int n, double beta, double scale) {
  Eigen::MatrixXd J;
  Eigen::VectorXd h;
  oracle::random_couplings(rng, n, J, h, scale);
  return IsingModel(J, h, beta);
}

RnnMeanField random_rnn(std::mt19937_64& rng, RnnArchitecture arch, double head_scale) {
  auto rnn = RnnMeanField::initialize(arch, rng());
  std::uniform_real_distribution<double> u(-head_scale, head_scale);
  for (Eigen::Index i = 0; i < rnn.output_weights().size(); ++i) rnn.output_weights()(i) = u(rng);
  for (Eigen::Index i = 0; i < rnn.output_bias().size(); ++i) rnn.output_bias()(i) = u(rng);
  return rnn;
}

double relative(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct TrainedRun {
  double final_free_energy = 0.0;
  double final_stderr = 0.0;
  double best_free_energy = 0.0;
  Evaluation eval;
};

TrainedRun train_and_evaluate(const IsingModel& model, const SpinOrder& order, const TrainConfig& cfg,
                              std::size_t eval_samples) {
  const auto r = train(model, order, {}, cfg);
  return {r.report.final_free_energy(), r.report.final_free_energy_stderr(), r.report.best_free_energy,
          evaluate(r.rnn, model, order, eval_samples, derive_seed(cfg.seed, 0xe7a1))};
}

// 1. Normalization and the variational bound over random pairs.
void normalization(Outcome& out) {
  std::mt19937_64 rng(101);
  double worst_norm = 0.0, worst_gap = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 12;
    const auto model = random_model(rng, n, 0.3 + 0.05 * trial, 1.0);
    const RnnArchitecture arch{.layers = 1 + trial % 2, .hidden = 4 + trial % 17};
    const auto rnn = random_rnn(rng, arch, 2.0);
    const auto order = random_order(n, rng());
    const Eigen::VectorXd lq = forward(rnn, enumerate_ordered(order, 12), false).log_probs();
    worst_norm = std::max(worst_norm, std::abs(lq.array().exp().sum() - 1.0));
    worst_gap = std::min(worst_gap, exact_variational_free_energy(rnn, model, order) - exact_free_energy(model));
  }
  out.require(worst_norm <= 1e-9, "normalization");
  out.require(worst_gap >= 0.0, "Gibbs inequality");
  out.detail << "max |sum Q - 1| = " << num(worst_norm, 3) << ", min (F_theta - F) = " << num(worst_gap, 4);
}

// 2. BPTT and naive mean-field gradients against central differences.
void gradients(Outcome& out) {
  std::mt19937_64 rng(202);
  double worst_rnn = 0.0, worst_nmf = 0.0;
  for (int m = 0; m < 10; ++m) {
    const int n = 3 + m;
    const RnnArchitecture arch{.layers = 2, .hidden = 6 + m};
    const auto rnn = random_rnn(rng, arch, 1.0);
    const auto order = random_order(n, rng());
    const auto config = SpinConfiguration::from_bits(rng(), n);
    const Eigen::VectorXd g = log_prob_grad(rnn, order, config);
    auto f = [&](const Eigen::VectorXd& p) {
      RnnMeanField probe = rnn;
      probe.set_parameters(p);
      return log_prob(probe, order, config);
    };
    for (int c = 0; c < 20; ++c) {
      const auto i = static_cast<Eigen::Index>(rng() % rnn.parameter_count());
      const double fd = oracle::central_difference(f, rnn.parameters(), i, 1e-5);
      worst_rnn = std::max(worst_rnn, relative(fd, g(i)));
    }

    const auto model = random_model(rng, n, 0.5 + 0.1 * m, 1.0);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    Eigen::VectorXd x(n);
    for (auto& v : x) v = u(rng);
    const Eigen::VectorXd gn = nmf_grad(model, x);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double fd = oracle::central_difference([&](const Eigen::VectorXd& y) { return nmf_free_energy(model, y); },
                                                   x, i, 1e-5);
      worst_nmf = std::max(worst_nmf, relative(fd, gn(i)));
    }
  }
  out.require(worst_rnn <= 1e-5, "BPTT");
  out.require(worst_nmf <= 1e-6, "naive gradient");
  out.detail << "max rel err BPTT " << num(worst_rnn, 3) << ", naive " << num(worst_nmf, 3);
}

// 3. Enumerated expectation of the estimator vs finite differences of F_theta.
void unbiasedness(Outcome& out) {
  std::mt19937_64 rng(303);
  const auto model = random_model(rng, 4, 1.2, 0.8);
  const auto rnn = random_rnn(rng, {.layers = 2, .hidden = 10}, 1.0);
  const auto order = random_order(4, rng());
  const Eigen::VectorXd expected = exact_expected_gradient(rnn, model, order);
  Eigen::VectorXd fd(expected.size());
  auto f = [&](const Eigen::VectorXd& p) {
    RnnMeanField probe = rnn;
    probe.set_parameters(p);
    return exact_variational_free_energy(probe, model, order);
  };
  for (Eigen::Index i = 0; i < fd.size(); ++i) fd(i) = oracle::central_difference(f, rnn.parameters(), i, 1e-5);
  const double rel = (expected - fd).norm() / fd.norm();
  const double score = exact_score_mean(rnn, order).cwiseAbs().maxCoeff();
  out.require(rel <= 1e-4, "estimator expectation");
  out.require(score <= 1e-10, "score mean");
  out.detail << "rel err " << num(rel, 3) << " over " << fd.size() << " parameters, max |E[score]| " << num(score, 3);
}

// 4. Field absorption identities.
void absorption(Outcome& out) {
  std::mt19937_64 rng(404);
  double worst_z = 0.0, worst_f = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 10;
    const auto model = random_model(rng, n, 0.2 + 0.02 * trial, 1.5);
    const auto absorbed = absorb_external_field(model);
    worst_z = std::max(worst_z, std::abs(exact_log_partition(absorbed) - exact_log_partition(model) - std::log(2.0)));
    const double lhs = absorbed.couplings().squaredNorm();
    const double rhs = model.couplings().squaredNorm() + model.fields().squaredNorm();
    worst_f = std::max(worst_f, std::abs(lhs - rhs));
  }
  out.require(worst_z <= 1e-9, "ln Z identity");
  out.require(worst_f <= 1e-12, "Frobenius identity");
  out.detail << "max |dlnZ - ln2| " << num(worst_z, 3) << ", max Frobenius residual " << num(worst_f, 3);
}

// 5. Spanning-forest weight vs brute force on connected graphs.
void spanning_tree(Outcome& out) {
  std::mt19937_64 rng(505);
  int checked = 0, wrong = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
      Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
      UnionFind uf(n);
      int components = n;
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (rng() % 3 == 0) continue;
          // small integer magnitudes so that ties occur
          double value = static_cast<double>(1 + rng() % 4) * (rng() % 2 ? 1.0 : -1.0);
          if (rng() % 2) J(u, v) = value; else J(v, u) = value;
          w(u, v) = w(v, u) = std::abs(value);
          if (uf.unite(u, v)) --components;
        }
      }
      if (components != 1) continue;
      ++checked;
      const auto r = criticality_order(IsingModel(J, Eigen::VectorXd::Zero(n)));
      if (std::abs(r.forest.total_weight - oracle::max_spanning_tree_weight(w)) > 1e-12) ++wrong;
    }
  }
  out.require(wrong == 0, "tree weight");
  out.require(checked >= 500, "enough connected graphs");
  out.detail << checked << " connected graphs, " << wrong << " mismatches";
}

TrainConfig profile(long iterations, std::uint64_t seed) {
  TrainConfig c;
  c.iterations = iterations;
  c.seed = seed;
  return c;
}

// 6. Spin chain, reduced 2000-iteration profile for both methods.
void spin_chain(Outcome& out) {
  const auto chain = datasets::spin_chain_100();
  const auto order = criticality_order(chain).order;
  const auto cfg = profile(2000, 0);
  const auto run = train_and_evaluate(chain, order, cfg, 10000);
  const auto nmf = nmf_minimize(chain, NmfOptions::from(cfg));
  out.require(run.final_free_energy >= -300.1 && run.final_free_energy <= -299.9, "CoRMF F");
  out.require(run.eval.magnetization.global <= -0.999, "CoRMF <x>");
  out.require(nmf.free_energy >= -294.0 && nmf.free_energy <= -291.0, "NMF F");
  out.detail << "CoRMF F " << num(run.final_free_energy, 9) << " <x> " << num(run.eval.magnetization.global, 6)
             << "; NMF best F " << num(nmf.free_energy, 7) << " (mean " << num(nmf.mean_free_energy(), 7)
             << ") <x> " << num(nmf.magnetization(), 5);
}

// 7. N=10, beta=1 under full defaults.
void n10_beta1(Outcome& out) {
  const auto model = datasets::generate("ising_n10_beta1");
  const auto exact = exact_summary(model);
  const auto order = criticality_order(model).order;
  const auto run = train_and_evaluate(model, order, TrainConfig{}, 100000);
  const double f = run.final_free_energy;
  const double m = run.eval.magnetization.global;
  out.require(std::abs(f - -85.348) <= 0.02, "F within 0.02 of -85.348");
  out.require(std::abs(m - -0.095) <= 0.01, "magnetization within 0.01 of -0.095");
  out.require(f >= exact.free_energy - 3.0 * run.final_stderr, "variational bound");
  out.detail << "final F " << num(f, 8) << " +- " << num(run.final_stderr, 2) << " (best " << num(run.best_free_energy, 8)
             << "), <x> " << num(m, 5) << " +- " << num(run.eval.magnetization.std_error, 2) << "; exact F "
             << num(exact.free_energy, 8) << " <x> " << num(exact.magnetization, 5);
}

// 8. Order ablation on the low-temperature instance.
void ordering_ablation(Outcome& out, long iterations) {
  const auto model = datasets::generate("ising_n10_beta5");
  const auto crit = criticality_order(model).order;
  std::map<std::string, std::vector<double>> finals;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto cfg = profile(iterations, seed);
    for (const auto& [label, order] : std::vector<std::pair<std::string, SpinOrder>>{
             {"criticality", crit}, {"random", random_order(model.n(), derive_seed(seed, 0x0fd))},
             {"inverse", inverse_order(crit)}}) {
      finals[label].push_back(train(model, order, {}, cfg).report.final_free_energy());
    }
  }
  const double c = median(finals["criticality"]), r = median(finals["random"]), i = median(finals["inverse"]);
  out.require(c < r && c < i, "criticality median strictly lowest");
  out.detail << iterations << " iterations x 5 seeds, medians: criticality " << num(c, 9) << ", random " << num(r, 9)
             << ", inverse " << num(i, 9) << "; exact " << num(exact_free_energy(model), 9);
}

// 9. Both bounds on exactly solvable datasets.
void bounds_end_to_end(Outcome& out, long n20_iterations) {
  for (const std::string name : {"ising_n10_beta1", "dense_n20_l400", "dense_n20_l5"}) {
    const auto model = datasets::generate(name);
    const auto order = criticality_order(model).order;
    const auto cfg = profile(model.n() <= 10 ? TrainConfig{}.iterations : n20_iterations, 0);
    const double cormf = train(model, order, {}, cfg).report.final_free_energy();
    const double naive = nmf_minimize(model, NmfOptions::from(cfg)).free_energy;
    const auto report = bound_report(model, cormf, naive);
    out.require(report.cormf_satisfied.value_or(false), name + " main bound");
    out.require(report.nmf_satisfied.value_or(false), name + " naive bound");
    out.detail << name << ": gap CoRMF " << num(*report.cormf_gap, 5) << " <= " << num(report.main_bound, 5)
               << ", NMF " << num(*report.nmf_gap, 5) << " <= " << num(report.naive_bound, 5) << "; ";
  }
}

// 10. Gibbs sampler against exact marginals and the chain reference.
void gibbs(Outcome& out) {
  std::mt19937_64 rng(1010);
  const auto model = random_model(rng, 8, 1.0, 0.4);
  GibbsOptions opt;
  opt.samples = 1000000;
  opt.seed = 3;
  const auto samples = gibbs_sample(model, opt);
  const auto p = exact_boltzmann(model);
  std::vector<double> counts(p.size(), 0.0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::uint64_t bits = 0;
    const auto x = samples[s];
    for (int i = 0; i < 8; ++i)
      if (x[static_cast<std::size_t>(i)] > 0) bits |= std::uint64_t{1} << i;
    counts[bits] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) tv += std::abs(counts[b] / static_cast<double>(samples.size()) - p[b]);
  tv *= 0.5;

  GibbsOptions chain_opt;
  chain_opt.samples = 10000;
  chain_opt.seed = 4;
  const auto chain = magnetization(gibbs_sample(datasets::spin_chain_100(), chain_opt));
  out.require(tv <= 0.02, "TV distance");
  out.require(std::abs(chain.global - -0.9999) <= 0.002, "chain magnetization");
  out.detail << "TV " << num(tv, 3) << " over 1e6 samples; chain <x> " << num(chain.global, 6) << " +- "
             << num(chain.std_error, 2);
}

// Smoke run on the sparse and random N=20 rows.
void n20_smoke(Outcome& out, long iterations) {
  for (const std::string name : {"sparse_n20", "random_n20"}) {
    const auto model = datasets::generate(name);
    const auto cfg = profile(iterations, 0);
    const double cormf = train(model, criticality_order(model).order, {}, cfg).report.final_free_energy();
    const double naive = nmf_minimize(model, NmfOptions::from(cfg)).free_energy;
    out.require(cormf <= naive + 1.0, name);
    out.detail << name << ": CoRMF " << num(cormf, 8) << ", NMF " << num(naive, 8) << ", exact "
               << num(exact_free_energy(model), 8) << "; ";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const long reduced = 3000;
  const std::vector<std::pair<std::string, std::pair<std::string, std::function<void(Outcome&)>>>> criteria{
      {"1", {"normalization and variational bound", normalization}},
      {"2", {"gradient correctness", gradients}},
      {"3", {"estimator unbiasedness", unbiasedness}},
      {"4", {"absorption identity", absorption}},
      {"5", {"spanning tree correctness", spanning_tree}},
      {"6", {"N=100 spin chain", spin_chain}},
      {"7", {"N=10 beta=1", n10_beta1}},
      {"8", {"ordering ablation N=10 beta=5", [&](Outcome& o) { ordering_ablation(o, reduced); }}},
      {"9", {"bounds end to end", [&](Outcome& o) { bounds_end_to_end(o, reduced); }}},
      {"10", {"Gibbs reference fidelity", gibbs}},
      {"smoke", {"N=20 sparse/random smoke", [&](Outcome& o) { n20_smoke(o, reduced); }}},
  };

  std::vector<std::string> selected(argv + 1, argv + argc);
  bool all_pass = true;
  for (const auto& [id, entry] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      entry.second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s (%s): %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", id.c_str(), entry.first.c_str(),
                out.detail.str().c_str(), secs);
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
