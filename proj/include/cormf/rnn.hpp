#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cormf/ising.hpp"
#include "cormf/ordering.hpp"

namespace cormf {

struct RnnArchitecture {
  int layers = 2;
  int hidden = 50;

  bool operator==(const RnnArchitecture&) const = default;
};

/// Recurrent autoregressive distribution Q(X) = prod_t q(x_{order[t]} | earlier spins).
///
/// Each layer is a tanh cell h_t = tanh(W_ih in_t + W_hh h_{t-1} + b). The
/// first layer reads the previous spin as a one-hot pair (+1 -> [1,0],
/// -1 -> [0,1]) and a zero vector at step 0. A linear head maps the top
/// hidden state to two logits [+1, -1] followed by a softmax.
///
/// All parameters live in one flat vector; the accessors below are views into it.
class RnnMeanField {
 public:
  using ConstBlock = Eigen::Map<const Eigen::MatrixXd>;
  using Block = Eigen::Map<Eigen::MatrixXd>;

  explicit RnnMeanField(RnnArchitecture arch = {});

  /// Uniform(-1/sqrt(H), 1/sqrt(H)) recurrent weights; zero output head, so the
  /// initial distribution is uniform over all configurations.
  static RnnMeanField initialize(RnnArchitecture arch, std::uint64_t seed);

  const RnnArchitecture& architecture() const { return arch_; }
  std::size_t parameter_count() const { return static_cast<std::size_t>(params_.size()); }
  const Eigen::VectorXd& parameters() const { return params_; }
  /// Throws ContractError on size mismatch or non-finite entries.
  void set_parameters(const Eigen::VectorXd& params);
  Eigen::VectorXd& mutable_parameters() { return params_; }

  int input_size(int layer) const { return layer == 0 ? 2 : arch_.hidden; }

  ConstBlock input_weights(int layer) const { return view(layout_[static_cast<std::size_t>(layer)].input); }
  ConstBlock recurrent_weights(int layer) const { return view(layout_[static_cast<std::size_t>(layer)].recurrent); }
  ConstBlock bias(int layer) const { return view(layout_[static_cast<std::size_t>(layer)].bias); }
  ConstBlock output_weights() const { return view(head_weights_); }
  ConstBlock output_bias() const { return view(head_bias_); }

  Block input_weights(int layer) { return view(layout_[static_cast<std::size_t>(layer)].input); }
  Block recurrent_weights(int layer) { return view(layout_[static_cast<std::size_t>(layer)].recurrent); }
  Block bias(int layer) { return view(layout_[static_cast<std::size_t>(layer)].bias); }
  Block output_weights() { return view(head_weights_); }
  Block output_bias() { return view(head_bias_); }

  /// Same layout, applied to an arbitrary parameter-shaped vector (e.g. a gradient).
  Block input_weights(Eigen::VectorXd& flat, int layer) const { return view(flat, layout_[static_cast<std::size_t>(layer)].input); }
  Block recurrent_weights(Eigen::VectorXd& flat, int layer) const { return view(flat, layout_[static_cast<std::size_t>(layer)].recurrent); }
  Block bias(Eigen::VectorXd& flat, int layer) const { return view(flat, layout_[static_cast<std::size_t>(layer)].bias); }
  Block output_weights(Eigen::VectorXd& flat) const { return view(flat, head_weights_); }
  Block output_bias(Eigen::VectorXd& flat) const { return view(flat, head_bias_); }

 private:
  struct Slice {
    Eigen::Index offset = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
  };
  struct LayerSlices {
    Slice input, recurrent, bias;
  };

  ConstBlock view(const Slice& s) const { return ConstBlock(params_.data() + s.offset, s.rows, s.cols); }
  Block view(const Slice& s) { return Block(params_.data() + s.offset, s.rows, s.cols); }
  static Block view(Eigen::VectorXd& flat, const Slice& s) { return Block(flat.data() + s.offset, s.rows, s.cols); }

  RnnArchitecture arch_;
  std::vector<LayerSlices> layout_;
  Slice head_weights_, head_bias_;
  Eigen::VectorXd params_;
};

/// Spins of a batch rearranged into generation order: column k is sample k,
/// row t is the value of spin order[t]. Entries are +-1.
using OrderedBatch = Eigen::MatrixXd;

/// Activations of one batched pass, kept for back-propagation.
struct ForwardPass {
  /// hidden[l][t] is the H x K state of layer l after step t.
  std::vector<std::vector<Eigen::MatrixXd>> hidden;
  /// p_up(t, k): probability that step t emits +1 given the earlier spins.
  Eigen::MatrixXd p_up;
  /// log_cond(t, k): log-probability of the spin actually present at step t.
  Eigen::MatrixXd log_cond;

  Eigen::VectorXd log_probs() const { return log_cond.colwise().sum().transpose(); }
};

/// Batched teacher-forced pass over given configurations.
ForwardPass forward(const RnnMeanField& rnn, const OrderedBatch& spins, bool keep_hidden = true);

/// Batched ancestral sampling of K configurations of n spins; sample k draws
/// from its own stream derive_seed(seed, k). Fills `pass` when non-null,
/// including hidden states if `keep_hidden`.
OrderedBatch sample_ordered(const RnnMeanField& rnn, int n, std::size_t count, std::uint64_t seed,
                            ForwardPass* pass = nullptr, bool keep_hidden = true);

/// grad += sum_k weights(k) * d ln Q(X_k) / d theta, by back-propagation through time.
void accumulate_log_prob_gradient(const RnnMeanField& rnn, const OrderedBatch& spins,
                                  const ForwardPass& pass, const Eigen::VectorXd& weights,
                                  Eigen::VectorXd& grad);

OrderedBatch to_ordered(const SampleSet& samples, const SpinOrder& order);
OrderedBatch to_ordered(SpinView config, const SpinOrder& order);
SampleSet from_ordered(const OrderedBatch& spins, const SpinOrder& order, const Eigen::VectorXd& log_probs);

/// All 2^n configurations as an ordered batch; column b is SpinConfiguration::from_bits(b).
OrderedBatch enumerate_ordered(const SpinOrder& order, int max_spins = 12);

/// q(x_{order[t]} = observed | earlier spins) for every step t.
Eigen::VectorXd conditionals(const RnnMeanField& rnn, const SpinOrder& order, SpinView config);

double log_prob(const RnnMeanField& rnn, const SpinOrder& order, SpinView config);

Eigen::VectorXd log_probs(const RnnMeanField& rnn, const SpinOrder& order, const SampleSet& samples);

SampleSet sample(const RnnMeanField& rnn, const SpinOrder& order, std::size_t count, std::uint64_t seed);

Eigen::VectorXd log_prob_grad(const RnnMeanField& rnn, const SpinOrder& order, SpinView config);

}  // namespace cormf
