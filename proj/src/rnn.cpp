#include "cormf/rnn.hpp"

#include <cmath>
#include <string>

#include "cormf/error.hpp"
#include "cormf/rng.hpp"

namespace cormf {

namespace {

Eigen::RowVectorXd up_probability(const Eigen::RowVectorXd& z) {
  return 1.0 / (1.0 + (-z.array()).exp());
}

// ln q(s) = -softplus(-s z) with softplus(y) = max(y, 0) + log1p(exp(-|y|)).
Eigen::RowVectorXd log_conditional(const Eigen::RowVectorXd& z, const Eigen::RowVectorXd& spins) {
  const Eigen::ArrayXXd y = -(spins.array() * z.array());
  return -(y.max(0.0) + (-z.array().abs()).exp().log1p());
}

// One-hot encoding of the previous spin; zero at step 0.
void encode_input(const OrderedBatch& spins, int t, Eigen::MatrixXd& input) {
  if (t == 0) {
    input.setZero();
    return;
  }
  for (Eigen::Index k = 0; k < spins.cols(); ++k) {
    const bool up = spins(t - 1, k) > 0.0;
    input(0, k) = up ? 1.0 : 0.0;
    input(1, k) = up ? 0.0 : 1.0;
  }
}

// Advances every layer by one step. `state[l]` holds h_{t-1} on entry, h_t on exit.
void step(const RnnMeanField& rnn, const Eigen::MatrixXd& input, std::vector<Eigen::MatrixXd>& state,
          Eigen::MatrixXd& scratch) {
  const int layers = rnn.architecture().layers;
  for (int l = 0; l < layers; ++l) {
    const Eigen::MatrixXd& below = l == 0 ? input : state[static_cast<std::size_t>(l - 1)];
    auto& h = state[static_cast<std::size_t>(l)];
    scratch.noalias() = rnn.input_weights(l) * below;
    scratch.noalias() += rnn.recurrent_weights(l) * h;
    scratch.colwise() += Eigen::VectorXd(rnn.bias(l));
    // tanh(a) = 1 - 2 / (exp(2a) + 1); Eigen vectorizes exp but not tanh for doubles.
    h = 1.0 - 2.0 / ((2.0 * scratch.array()).exp() + 1.0);
  }
}

// Logit difference z = O_up - O_down for every column.
Eigen::RowVectorXd logit_gap(const RnnMeanField& rnn, const Eigen::MatrixXd& top) {
  const auto w = rnn.output_weights();
  const auto b = rnn.output_bias();
  Eigen::RowVectorXd z = (w.row(0) - w.row(1)) * top;
  z.array() += b(0, 0) - b(1, 0);
  return z;
}

std::vector<Eigen::MatrixXd> zero_state(const RnnMeanField& rnn, Eigen::Index count) {
  const auto& a = rnn.architecture();
  return std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(a.layers),
                                      Eigen::MatrixXd::Zero(a.hidden, count));
}

}  // namespace

RnnMeanField::RnnMeanField(RnnArchitecture arch) : arch_(arch) {
  if (arch_.layers < 1 || arch_.hidden < 1) throw ContractError("rnn needs at least one layer and one unit");
  Eigen::Index offset = 0;
  auto take = [&](Eigen::Index rows, Eigen::Index cols) {
    Slice s{offset, rows, cols};
    offset += rows * cols;
    return s;
  };
  const Eigen::Index h = arch_.hidden;
  for (int l = 0; l < arch_.layers; ++l) {
    LayerSlices ls;
    ls.input = take(h, input_size(l));
    ls.recurrent = take(h, h);
    ls.bias = take(h, 1);
    layout_.push_back(ls);
  }
  head_weights_ = take(2, h);
  head_bias_ = take(2, 1);
  params_ = Eigen::VectorXd::Zero(offset);
}

RnnMeanField RnnMeanField::initialize(RnnArchitecture arch, std::uint64_t seed) {
  RnnMeanField rnn(arch);
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(arch.hidden));
  const Eigen::Index body = rnn.head_weights_.offset;
  for (Eigen::Index i = 0; i < body; ++i) rnn.params_(i) = rng.uniform(-bound, bound);
  return rnn;
}

void RnnMeanField::set_parameters(const Eigen::VectorXd& params) {
  if (params.size() != params_.size()) {
    throw ContractError("expected " + std::to_string(params_.size()) + " parameters, got " +
                        std::to_string(params.size()));
  }
  if (!params.allFinite()) throw ContractError("rnn parameters must be finite");
  params_ = params;
}

ForwardPass forward(const RnnMeanField& rnn, const OrderedBatch& spins, bool keep_hidden) {
  const auto n = static_cast<int>(spins.rows());
  const auto count = spins.cols();
  const auto& arch = rnn.architecture();

  ForwardPass pass;
  pass.p_up.resize(n, count);
  pass.log_cond.resize(n, count);
  if (keep_hidden) {
    pass.hidden.assign(static_cast<std::size_t>(arch.layers), std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n)));
  }

  auto state = zero_state(rnn, count);
  Eigen::MatrixXd input(2, count);
  Eigen::MatrixXd scratch(arch.hidden, count);
  for (int t = 0; t < n; ++t) {
    encode_input(spins, t, input);
    step(rnn, input, state, scratch);
    if (keep_hidden) {
      for (int l = 0; l < arch.layers; ++l) {
        pass.hidden[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)] = state[static_cast<std::size_t>(l)];
      }
    }
    const Eigen::RowVectorXd z = logit_gap(rnn, state.back());
    pass.p_up.row(t) = up_probability(z);
    pass.log_cond.row(t) = log_conditional(z, spins.row(t));
  }
  return pass;
}

OrderedBatch sample_ordered(const RnnMeanField& rnn, int n, std::size_t count, std::uint64_t seed,
                            ForwardPass* pass, bool keep_hidden) {
  const auto k_count = static_cast<Eigen::Index>(count);
  const auto& arch = rnn.architecture();
  std::vector<SplitMix64> streams;
  streams.reserve(count);
  for (std::size_t k = 0; k < count; ++k) streams.emplace_back(derive_seed(seed, k));

  OrderedBatch spins(n, k_count);
  ForwardPass local;
  ForwardPass& out = pass ? *pass : local;
  out.p_up.resize(n, k_count);
  out.log_cond.resize(n, k_count);
  out.hidden.clear();
  keep_hidden = keep_hidden && pass != nullptr;
  if (keep_hidden) {
    out.hidden.assign(static_cast<std::size_t>(arch.layers), std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n)));
  }

  auto state = zero_state(rnn, k_count);
  Eigen::MatrixXd input(2, k_count);
  Eigen::MatrixXd scratch(arch.hidden, k_count);
  for (int t = 0; t < n; ++t) {
    encode_input(spins, t, input);
    step(rnn, input, state, scratch);
    if (keep_hidden) {
      for (int l = 0; l < arch.layers; ++l) {
        out.hidden[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)] = state[static_cast<std::size_t>(l)];
      }
    }
    const Eigen::RowVectorXd z = logit_gap(rnn, state.back());
    out.p_up.row(t) = up_probability(z);
    for (Eigen::Index k = 0; k < k_count; ++k) {
      spins(t, k) = streams[static_cast<std::size_t>(k)].uniform() < out.p_up(t, k) ? 1.0 : -1.0;
    }
    out.log_cond.row(t) = log_conditional(z, spins.row(t));
  }
  return spins;
}

void accumulate_log_prob_gradient(const RnnMeanField& rnn, const OrderedBatch& spins,
                                  const ForwardPass& pass, const Eigen::VectorXd& weights,
                                  Eigen::VectorXd& grad) {
  const auto n = static_cast<int>(spins.rows());
  const auto count = spins.cols();
  const auto& arch = rnn.architecture();
  const int layers = arch.layers;
  if (grad.size() != static_cast<Eigen::Index>(rnn.parameter_count())) {
    throw ContractError("gradient buffer has the wrong size");
  }
  if (weights.size() != count) throw ContractError("one weight per sample is required");
  if (static_cast<int>(pass.hidden.size()) != layers) throw ContractError("forward pass kept no hidden states");

  auto g_head_w = rnn.output_weights(grad);
  auto g_head_b = rnn.output_bias(grad);
  const auto head_w = rnn.output_weights();

  // carry[l] = W_hh^T da_l from the following step
  std::vector<Eigen::MatrixXd> carry(static_cast<std::size_t>(layers), Eigen::MatrixXd::Zero(arch.hidden, count));
  Eigen::MatrixXd input(2, count);
  Eigen::MatrixXd d_logits(2, count);
  Eigen::MatrixXd dh(arch.hidden, count);
  Eigen::MatrixXd da(arch.hidden, count);

  for (int t = n - 1; t >= 0; --t) {
    const auto ut = static_cast<std::size_t>(t);
    for (Eigen::Index k = 0; k < count; ++k) {
      const double up = spins(t, k) > 0.0 ? 1.0 : 0.0;
      const double g = weights(k) * (up - pass.p_up(t, k));
      d_logits(0, k) = g;
      d_logits(1, k) = -g;
    }
    const auto& top = pass.hidden.back()[ut];
    g_head_w.noalias() += d_logits * top.transpose();
    g_head_b += d_logits.rowwise().sum();
    dh.noalias() = head_w.transpose() * d_logits;

    for (int l = layers - 1; l >= 0; --l) {
      const auto ul = static_cast<std::size_t>(l);
      const auto& h = pass.hidden[ul][ut];
      dh += carry[ul];
      da = dh.array() * (1.0 - h.array().square());

      if (l == 0) {
        encode_input(spins, t, input);
        rnn.input_weights(grad, l).noalias() += da * input.transpose();
      } else {
        rnn.input_weights(grad, l).noalias() += da * pass.hidden[ul - 1][ut].transpose();
      }
      if (t > 0) rnn.recurrent_weights(grad, l).noalias() += da * pass.hidden[ul][ut - 1].transpose();
      rnn.bias(grad, l) += da.rowwise().sum();

      carry[ul].noalias() = rnn.recurrent_weights(l).transpose() * da;
      if (l > 0) dh.noalias() = rnn.input_weights(l).transpose() * da;
    }
  }
}

OrderedBatch to_ordered(const SampleSet& samples, const SpinOrder& order) {
  const int n = order.size();
  if (samples.n() != n) throw ContractError("sample width does not match the spin order");
  OrderedBatch out(n, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto x = samples[k];
    for (int t = 0; t < n; ++t) out(t, static_cast<Eigen::Index>(k)) = x[static_cast<std::size_t>(order[t])];
  }
  return out;
}

OrderedBatch to_ordered(SpinView config, const SpinOrder& order) {
  const int n = order.size();
  if (static_cast<int>(config.size()) != n) throw ContractError("configuration length does not match the spin order");
  OrderedBatch out(n, 1);
  for (int t = 0; t < n; ++t) out(t, 0) = config[static_cast<std::size_t>(order[t])];
  return out;
}

SampleSet from_ordered(const OrderedBatch& spins, const SpinOrder& order, const Eigen::VectorXd& log_probs) {
  const int n = order.size();
  SampleSet out(n);
  out.reserve(static_cast<std::size_t>(spins.cols()));
  std::vector<Spin> x(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < spins.cols(); ++k) {
    for (int t = 0; t < n; ++t) x[static_cast<std::size_t>(order[t])] = spins(t, k) > 0.0 ? 1 : -1;
    out.add(x, std::min(0.0, log_probs(k)));
  }
  return out;
}

OrderedBatch enumerate_ordered(const SpinOrder& order, int max_spins) {
  const int n = order.size();
  check_enumeration_guard(n, max_spins);
  const Eigen::Index total = Eigen::Index{1} << n;
  OrderedBatch out(n, total);
  for (Eigen::Index b = 0; b < total; ++b) {
    for (int t = 0; t < n; ++t) out(t, b) = (b >> order[t]) & 1 ? 1.0 : -1.0;
  }
  return out;
}

Eigen::VectorXd conditionals(const RnnMeanField& rnn, const SpinOrder& order, SpinView config) {
  const auto pass = forward(rnn, to_ordered(config, order), false);
  return pass.log_cond.col(0).array().exp();
}

double log_prob(const RnnMeanField& rnn, const SpinOrder& order, SpinView config) {
  return forward(rnn, to_ordered(config, order), false).log_cond.sum();
}

Eigen::VectorXd log_probs(const RnnMeanField& rnn, const SpinOrder& order, const SampleSet& samples) {
  return forward(rnn, to_ordered(samples, order), false).log_probs();
}

SampleSet sample(const RnnMeanField& rnn, const SpinOrder& order, std::size_t count, std::uint64_t seed) {
  ForwardPass pass;
  const auto spins = sample_ordered(rnn, order.size(), count, seed, &pass, false);
  return from_ordered(spins, order, pass.log_probs());
}

Eigen::VectorXd log_prob_grad(const RnnMeanField& rnn, const SpinOrder& order, SpinView config) {
  const auto spins = to_ordered(config, order);
  const auto pass = forward(rnn, spins, true);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rnn.parameter_count()));
  accumulate_log_prob_gradient(rnn, spins, pass, Eigen::VectorXd::Ones(1), grad);
  return grad;
}

}  // namespace cormf
