#include "cormf/datasets.hpp"

#include <numeric>

#include "cormf/error.hpp"
#include "cormf/rng.hpp"

namespace cormf::datasets {

namespace {

template <typename Draw>
Eigen::MatrixXd symmetric_couplings(int n, Draw&& draw) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      J(i, j) = draw();
      J(j, i) = J(i, j);
    }
  }
  return J;
}

}  // namespace

IsingModel spin_chain_100() {
  constexpr int n = 100;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    J(i, j) = -1.0;
    J(j, i) = -1.0;
  }
  return IsingModel(std::move(J), Eigen::VectorXd::Ones(n), 1.0);
}

IsingModel ising_n10(double scale, std::uint64_t seed) {
  constexpr int n = 10;
  std::vector<int> tenths(55);
  std::iota(tenths.begin(), tenths.end(), 1);
  Rng rng(seed);
  rng.shuffle(tenths);
  std::size_t next = 0;
  Eigen::MatrixXd J = symmetric_couplings(n, [&] { return tenths[next++] / 10.0; });
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h(i) = 1.3 * (tenths[next++] / 10.0);
  return IsingModel(scale * J, scale * h, 1.0);
}

IsingModel dense_n20(int levels, std::uint64_t seed) {
  if (levels != 400 && levels != 5) throw ContractError("dense_n20 supports L = 400 or L = 5");
  const double divisor = levels == 400 ? 100.0 : 2.0;
  Rng rng(seed);
  auto J = symmetric_couplings(20, [&] { return static_cast<double>(rng.below(static_cast<std::uint64_t>(levels)) + 1) / divisor; });
  return IsingModel(std::move(J), Eigen::VectorXd::Zero(20), 1.0);
}

IsingModel sparse_n20(std::uint64_t seed) {
  Rng rng(seed);
  auto J = symmetric_couplings(20, [&] { return static_cast<double>(rng.poisson(0.4)); });
  return IsingModel(std::move(J), Eigen::VectorXd::Zero(20), 1.0);
}

IsingModel random_n20(std::uint64_t seed) {
  Rng rng(seed);
  auto J = symmetric_couplings(20, [&] { return static_cast<double>(rng.below(5) + 1) / 2.0 - 1.0; });
  return IsingModel(std::move(J), Eigen::VectorXd::Zero(20), 1.0);
}

IsingModel npp_to_ising(const std::vector<double>& numbers, double beta) {
  const int n = static_cast<int>(numbers.size());
  if (n < 1) throw ContractError("number partitioning needs at least one number");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (!(numbers[static_cast<std::size_t>(i)] > 0.0)) throw ContractError("numbers must be positive");
    for (int j = 0; j < n; ++j) {
      if (i != j) J(i, j) = numbers[static_cast<std::size_t>(i)] * numbers[static_cast<std::size_t>(j)];
    }
  }
  return IsingModel(std::move(J), Eigen::VectorXd::Zero(n), beta);
}

const std::vector<CatalogEntry>& catalog() {
  // The N=10 default seed reproduces an instance whose exact free energy and
  // magnetization match the published N=10 benchmark.
  static const std::vector<CatalogEntry> entries = {
      {"spin_chain_100", "periodic ring, J=-1, h=1, N=100", 0},
      {"ising_n10_beta1", "N=10, (J,h) from [55]/10 without replacement, h x1.3", kIsingN10Seed},
      {"ising_n10_beta5", "N=10 instance above rescaled by 5", kIsingN10Seed},
      {"dense_n20_l400", "N=20, J ~ U[400]/100, h=0", 0},
      {"dense_n20_l5", "N=20, J ~ U[5]/2, h=0", 0},
      {"sparse_n20", "N=20, J ~ Poisson(0.4), h=0", 0},
      {"random_n20", "N=20, J ~ U[5]/2 - 1, h=0", 0},
  };
  return entries;
}

IsingModel generate(const std::string& name, std::uint64_t seed) {
  if (name == "spin_chain_100") return spin_chain_100();
  if (name == "ising_n10_beta1") return ising_n10(1.0, seed);
  if (name == "ising_n10_beta5") return ising_n10(5.0, seed);
  if (name == "dense_n20_l400") return dense_n20(400, seed);
  if (name == "dense_n20_l5") return dense_n20(5, seed);
  if (name == "sparse_n20") return sparse_n20(seed);
  if (name == "random_n20") return random_n20(seed);
  throw ContractError("unknown dataset '" + name + "'");
}

IsingModel generate(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return generate(name, e.default_seed);
  }
  throw ContractError("unknown dataset '" + name + "'");
}

}  // namespace cormf::datasets
