#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cormf/ising.hpp"

namespace cormf::datasets {

/// Default seed of the N=10 instances.
inline constexpr std::uint64_t kIsingN10Seed = 515953;

// Generators emit a symmetric J: each pair (i, j) stores its coupling in both
// J_ij and J_ji, and the double sum in energy() counts it twice.

/// Periodic ring of 100 spins, J = -1 between neighbours, h = 1, beta = 1.
IsingModel spin_chain_100();

/// The 55 values {0.1, ..., 5.5} permuted by seed: the first 45 fill the
/// couplings (row-major over i < j), the last 10 times 1.3 are the fields.
/// `scale` multiplies J and h afterwards (5 for the low-temperature variant);
/// beta stays 1.
IsingModel ising_n10(double scale, std::uint64_t seed);

/// J_ij ~ U{1..L} / (L == 400 ? 100 : 2), h = 0.
IsingModel dense_n20(int levels, std::uint64_t seed);

/// J_ij ~ Poisson(0.4), h = 0.
IsingModel sparse_n20(std::uint64_t seed);

/// J_ij ~ U{1..5} / 2 - 1, h = 0.
IsingModel random_n20(std::uint64_t seed);

/// E(X) = (sum_i a_i x_i)^2 - sum_i a_i^2, i.e. J_ij = a_i a_j for i != j.
IsingModel npp_to_ising(const std::vector<double>& numbers, double beta = 1.0);

struct CatalogEntry {
  std::string name;
  std::string description;
  std::uint64_t default_seed;
};

const std::vector<CatalogEntry>& catalog();

/// Builds a catalog entry by name. Throws ContractError for unknown names.
IsingModel generate(const std::string& name, std::uint64_t seed);
IsingModel generate(const std::string& name);

}  // namespace cormf::datasets
