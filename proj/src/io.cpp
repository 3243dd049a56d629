#include "cormf/io.hpp"

#include <fstream>
#include <sstream>

#include "cormf/error.hpp"

namespace cormf::io {

json model_to_json(const IsingModel& model) {
  const int n = model.n();
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(model.couplings()(i, j));
    rows.push_back(std::move(row));
  }
  json h = json::array();
  for (int i = 0; i < n; ++i) h.push_back(model.fields()(i));
  return {{"n", n}, {"beta", model.beta()}, {"J", std::move(rows)}, {"h", std::move(h)}};
}

IsingModel model_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 1) throw ContractError("model file: n must be positive");
    const auto& rows = j.at("J");
    const auto& h = j.at("h");
    if (static_cast<int>(rows.size()) != n || static_cast<int>(h.size()) != n) {
      throw ContractError("model file: J and h must have n rows");
    }
    Eigen::MatrixXd J(n, n);
    Eigen::VectorXd fields(n);
    for (int i = 0; i < n; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<int>(row.size()) != n) throw ContractError("model file: J must be square");
      for (int c = 0; c < n; ++c) J(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      fields(i) = h.at(static_cast<std::size_t>(i)).get<double>();
    }
    return IsingModel(std::move(J), std::move(fields), j.value("beta", 1.0));
  } catch (const json::exception& e) {
    throw ContractError(std::string("model file: ") + e.what());
  }
}

json order_to_json(const SpinOrder& order, const SpanningForest* forest) {
  json out = {{"order", order.indices()}};
  json edges = json::array();
  if (forest) {
    for (const auto& [u, v] : forest->edges) edges.push_back({u, v});
    out["tree_weight"] = forest->total_weight;
  }
  out["tree_edges"] = std::move(edges);
  return out;
}

SpinOrder order_from_json(const json& j) {
  try {
    return SpinOrder(j.at("order").get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw ContractError(std::string("order file: ") + e.what());
  }
}

json train_config_to_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},
          {"adam_epsilon", c.adam_epsilon},
          {"batch_size", c.batch_size},
          {"iterations", c.iterations},
          {"clip_norm", c.clip_norm},
          {"scheduler_patience", c.scheduler_patience},
          {"scheduler_factor", c.scheduler_factor},
          {"scheduler_threshold", c.scheduler_threshold},
          {"scheduler_window", c.scheduler_window},
          {"anneal",
           {{"enabled", c.anneal.enabled},
            {"start_fraction", c.anneal.start_fraction},
            {"duration", c.anneal.duration}}},
          {"seed", c.seed}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
    c.adam_epsilon = j.value("adam_epsilon", c.adam_epsilon);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.iterations = j.value("iterations", c.iterations);
    c.clip_norm = j.value("clip_norm", c.clip_norm);
    c.scheduler_patience = j.value("scheduler_patience", c.scheduler_patience);
    c.scheduler_factor = j.value("scheduler_factor", c.scheduler_factor);
    c.scheduler_threshold = j.value("scheduler_threshold", c.scheduler_threshold);
    c.scheduler_window = j.value("scheduler_window", c.scheduler_window);
    if (j.contains("anneal")) {
      const auto& a = j.at("anneal");
      c.anneal.enabled = a.value("enabled", c.anneal.enabled);
      c.anneal.start_fraction = a.value("start_fraction", c.anneal.start_fraction);
      c.anneal.duration = a.value("duration", c.anneal.duration);
    }
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw ContractError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json checkpoint_to_json(const RnnMeanField& rnn, const SpinOrder& order, const TrainConfig& cfg, long iteration) {
  const auto& p = rnn.parameters();
  return {{"architecture", {{"cell", "tanh"}, {"layers", rnn.architecture().layers}, {"hidden", rnn.architecture().hidden}}},
          {"parameter_count", rnn.parameter_count()},
          {"parameters", std::vector<double>(p.data(), p.data() + p.size())},
          {"order", order.indices()},
          {"config", train_config_to_json(cfg)},
          {"iteration", iteration}};
}

Checkpoint checkpoint_from_json(const json& j) {
  try {
    RnnArchitecture arch;
    arch.layers = j.at("architecture").at("layers").get<int>();
    arch.hidden = j.at("architecture").at("hidden").get<int>();
    RnnMeanField rnn(arch);
    const auto flat = j.at("parameters").get<std::vector<double>>();
    rnn.set_parameters(Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size())));
    return {std::move(rnn), SpinOrder(j.at("order").get<std::vector<int>>()),
            train_config_from_json(j.at("config")), j.value("iteration", 0L)};
  } catch (const json::exception& e) {
    throw ContractError(std::string("checkpoint: ") + e.what());
  }
}

json nmf_to_json(const NmfSolution& s) {
  json restarts = json::array();
  for (const auto& r : s.restarts) {
    restarts.push_back({{"F", r.free_energy},
                        {"magnetization", r.mean_values.size() ? r.mean_values.mean() : 0.0},
                        {"iterations_used", r.iterations_used},
                        {"converged", r.converged}});
  }
  return {{"x_bar", std::vector<double>(s.mean_values.data(), s.mean_values.data() + s.mean_values.size())},
          {"F_star", s.free_energy},
          {"F_mean_over_restarts", s.mean_free_energy()},
          {"F_std_over_restarts", s.std_free_energy()},
          {"magnetization", s.magnetization()},
          {"iterations_used", s.iterations_used},
          {"converged", s.converged},
          {"restart_results", std::move(restarts)}};
}

json bound_report_to_json(const BoundReport& r) {
  json out = {{"n_effective", r.n_effective},
              {"frobenius", r.frobenius},
              {"naive_bound", r.naive_bound},
              {"main_bound", r.main_bound}};
  auto put = [&](const char* key, const auto& opt) {
    if (opt) out[key] = *opt;
    else out[key] = nullptr;
  };
  put("exact_F", r.exact_free_energy);
  put("F_star_cormf", r.cormf_free_energy);
  put("F_star_nmf", r.nmf_free_energy);
  put("cormf_gap", r.cormf_gap);
  put("nmf_gap", r.nmf_gap);
  put("cormf_satisfied", r.cormf_satisfied);
  put("nmf_satisfied", r.nmf_satisfied);
  return out;
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  for (int i = 0; i < samples.n(); ++i) out << (i ? ",x" : "x") << i;
  out << '\n';
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto x = samples[k];
    for (int i = 0; i < samples.n(); ++i) out << (i ? "," : "") << static_cast<int>(x[static_cast<std::size_t>(i)]);
    out << '\n';
  }
}

void write_history_csv(std::ostream& out, const TrainReport& r) {
  out << "iteration,F_mean,F_stderr,grad_norm,lr,beta\n";
  out.precision(17);
  for (long t = 0; t < r.iterations_completed(); ++t) {
    const auto u = static_cast<std::size_t>(t);
    out << t << ',' << r.free_energy[u] << ',' << r.free_energy_stderr[u] << ',' << r.grad_norm[u] << ','
        << r.learning_rate[u] << ',' << r.beta[u] << '\n';
  }
}

void write_spin_means_csv(std::ostream& out, const TrainReport& r) {
  if (r.spin_means.empty()) return;
  const auto n = r.spin_means.front().size();
  out << "iteration";
  for (std::size_t i = 0; i < n; ++i) out << ",m" << i;
  out << '\n';
  out.precision(17);
  for (std::size_t t = 0; t < r.spin_means.size(); ++t) {
    out << t;
    for (double v : r.spin_means[t]) out << ',' << v;
    out << '\n';
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ContractError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ContractError("cannot write " + path.string());
  out << text;
}

}  // namespace cormf::io
