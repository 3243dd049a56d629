#pragma once

#include <optional>

#include "cormf/ising.hpp"

namespace cormf {

/// Field-absorbed size and Frobenius norm of beta * J~ (N_eff = n when h = 0).
struct AbsorbedNorm {
  int n_effective = 0;
  double frobenius = 0.0;       // ||J~||_F
  double scaled_argument = 0.0; // A = N_eff * ||beta J~||_F
};

AbsorbedNorm absorbed_norm(const IsingModel& model);

/// (1/beta) N_eff ||beta J~||_F: bound on F*_naive - F.
double naive_bound(const IsingModel& model);

/// (1/beta) 42 A^{2/3} ln^{1/3}(48 A + e) with A = N_eff ||beta J~||_F:
/// bound on F*_CoRMF - F.
double main_bound(const IsingModel& model);

struct BoundReport {
  int n_effective = 0;
  double frobenius = 0.0;
  double naive_bound = 0.0;
  double main_bound = 0.0;
  std::optional<double> exact_free_energy;
  std::optional<double> cormf_free_energy;
  std::optional<double> nmf_free_energy;
  std::optional<double> cormf_gap;
  std::optional<double> nmf_gap;
  std::optional<bool> cormf_satisfied;
  std::optional<bool> nmf_satisfied;
};

/// Exact F is included when n <= max_spins; gaps and flags wherever both
/// sides are known.
BoundReport bound_report(const IsingModel& model, std::optional<double> cormf_free_energy = std::nullopt,
                         std::optional<double> nmf_free_energy = std::nullopt, int max_spins = kEnumerationLimit);

}  // namespace cormf
