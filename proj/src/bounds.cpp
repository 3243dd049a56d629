#include "cormf/bounds.hpp"

#include <cmath>
#include <numbers>

namespace cormf {

AbsorbedNorm absorbed_norm(const IsingModel& model) {
  const bool has_field = model.fields().cwiseAbs().maxCoeff() > 0.0;
  AbsorbedNorm out;
  if (has_field) {
    const auto absorbed = absorb_external_field(model);
    out.n_effective = absorbed.n();
    out.frobenius = frobenius_norm(absorbed.couplings());
  } else {
    out.n_effective = model.n();
    out.frobenius = frobenius_norm(model.couplings());
  }
  out.scaled_argument = out.n_effective * model.beta() * out.frobenius;
  return out;
}

double naive_bound(const IsingModel& model) {
  return absorbed_norm(model).scaled_argument / model.beta();
}

double main_bound(const IsingModel& model) {
  const double a = absorbed_norm(model).scaled_argument;
  return 42.0 * std::pow(a, 2.0 / 3.0) * std::cbrt(std::log(48.0 * a + std::numbers::e)) / model.beta();
}

BoundReport bound_report(const IsingModel& model, std::optional<double> cormf_free_energy,
                         std::optional<double> nmf_free_energy, int max_spins) {
  const auto norm = absorbed_norm(model);
  BoundReport r;
  r.n_effective = norm.n_effective;
  r.frobenius = norm.frobenius;
  r.naive_bound = naive_bound(model);
  r.main_bound = main_bound(model);
  r.cormf_free_energy = cormf_free_energy;
  r.nmf_free_energy = nmf_free_energy;
  if (model.n() <= max_spins) r.exact_free_energy = exact_free_energy(model, max_spins);
  if (r.exact_free_energy && cormf_free_energy) {
    r.cormf_gap = *cormf_free_energy - *r.exact_free_energy;
    r.cormf_satisfied = *r.cormf_gap <= r.main_bound;
  }
  if (r.exact_free_energy && nmf_free_energy) {
    r.nmf_gap = *nmf_free_energy - *r.exact_free_energy;
    r.nmf_satisfied = *r.nmf_gap <= r.naive_bound;
  }
  return r;
}

}  // namespace cormf
