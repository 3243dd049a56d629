#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cormf/bounds.hpp"
#include "cormf/ising.hpp"
#include "cormf/nmf.hpp"
#include "cormf/ordering.hpp"
#include "cormf/rnn.hpp"
#include "cormf/train.hpp"

namespace cormf::io {

using nlohmann::json;

/// {"n", "beta", "J", "h"}; doubles are written with round-trip precision.
json model_to_json(const IsingModel& model);
IsingModel model_from_json(const json& j);

/// {"order": [...], "tree_edges": [[u, v], ...]}
json order_to_json(const SpinOrder& order, const SpanningForest* forest = nullptr);
SpinOrder order_from_json(const json& j);

json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const json& j);

/// Architecture, flat parameters, order, config and iteration count.
json checkpoint_to_json(const RnnMeanField& rnn, const SpinOrder& order, const TrainConfig& cfg, long iteration);

struct Checkpoint {
  RnnMeanField rnn;
  SpinOrder order;
  TrainConfig config;
  long iteration = 0;
};
Checkpoint checkpoint_from_json(const json& j);

json nmf_to_json(const NmfSolution& solution);
json bound_report_to_json(const BoundReport& report);

/// Header "x0,...,x{n-1}", one +-1 row per configuration.
void write_samples_csv(std::ostream& out, const SampleSet& samples);

/// iteration,F_mean,F_stderr,grad_norm,lr,beta
void write_history_csv(std::ostream& out, const TrainReport& report);
/// iteration,m0,...,m{n-1}
void write_spin_means_csv(std::ostream& out, const TrainReport& report);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cormf::io
