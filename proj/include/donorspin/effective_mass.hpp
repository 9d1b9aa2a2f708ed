#pragma once

// Effective-mass donor ground state: contact density at the nucleus, the
// Fermi contact formula for A, the central-cell energy shift, and the
// asymptotic exchange coupling between two neighbouring donors.

#include <cmath>

#include "donorspin/core_params.hpp"
#include "donorspin/numerics.hpp"
#include "donorspin/single_donor.hpp"

namespace donorspin {

struct GroundStateModel {
  MaterialParams material;
  double F0_sq;            // (F_j^(1s)(0))^2, cm^-3
  double contact_density;  // |Psi_0(0)|^2, cm^-3
};

namespace detail {

inline double require_bloch_factor(const MaterialParams& material) {
  if (!material.bloch_factor || !(*material.bloch_factor > 0.0)) {
    throw InputError("material '" + std::string(material.tag) +
                     "' has no Bloch amplitude |psi(k_j,0)|^2");
  }
  return *material.bloch_factor;
}

}  // namespace detail

/// |Psi_0(0)|^2 = N_valley |psi(k_j,0)|^2 / (pi a_t^2 a_l), in cm^-3.
inline double contact_density_variational(const MaterialParams& material) {
  if (!(material.a_t > 0.0) || !(material.a_l > 0.0)) {
    throw InputError("variational radii must be positive");
  }
  const double bloch = detail::require_bloch_factor(material);
  const double at = nm_to_cm(material.a_t);
  const double al = nm_to_cm(material.a_l);
  return material.valley_count * bloch / (kPi * at * at * al);
}

/// A = (8 pi / 3) |Psi_0(0)|^2 2 mu_B g_N mu_N (mu0 / 4 pi), returned in MHz.
inline double hyperfine_constant_fermi(double contact_density, double g_N,
                                       const PhysicalConstants& k = kPaperConstants) {
  if (!(contact_density >= 0.0)) throw InputError("contact density must be >= 0");
  const double joule =
      (8.0 * kPi / 3.0) * contact_density * 2.0 * k.mu_B * g_N * k.mu_N * k.mu0_over_4pi;
  return to_frequency(joule, k);
}

/// Inverse of the Fermi formula: contact density (cm^-3) for a given A (MHz).
inline double contact_density_from_hyperfine(double A, double g_N,
                                             const PhysicalConstants& k = kPaperConstants) {
  return A / hyperfine_constant_fermi(1.0, g_N, k);
}

/// (F_j^(1s)(0))^2 = |Psi_0(0)|^2 / (N_valley |psi(k_j,0)|^2).
inline double modulation_density_from_experiment(double contact_density,
                                                 const MaterialParams& material) {
  if (!(contact_density > 0.0)) throw InputError("contact density must be > 0");
  return contact_density / (material.valley_count * detail::require_bloch_factor(material));
}

inline GroundStateModel variational_ground_state(const MaterialParams& material) {
  const double contact = contact_density_variational(material);
  const double at = nm_to_cm(material.a_t);
  return {material, 1.0 / (kPi * at * at * nm_to_cm(material.a_l)), contact};
}

/// Ground state rescaled to a measured contact density.
inline GroundStateModel experimental_ground_state(const MaterialParams& material,
                                                  double contact_density) {
  return {material, modulation_density_from_experiment(contact_density, material),
          contact_density};
}

/// Central-cell correction
///   dE_d = (2 pi / 3) F0^2 q^2 / (4 pi eps_s eps0) <r^2>,
/// with F0_sq in cm^-3 and r_sq_mean in cm^2. Returns eV.
inline double energy_shift_potential_deviation(double F0_sq, double r_sq_mean, double eps_s,
                                               const PhysicalConstants& k = kPaperConstants) {
  if (!(r_sq_mean >= 0.0)) throw InputError("mean square radius must be >= 0");
  if (!(F0_sq >= 0.0)) throw InputError("modulation density must be >= 0");
  const double joule = (2.0 * kPi / 3.0) * F0_sq * coulomb_scale(eps_s, k) * r_sq_mean;
  return joule_to_ev(joule, k);
}

/// rms radius (nm) of the deviation region that yields a shift of shift_ev.
inline double deviation_radius_for_shift(double F0_sq, double shift_ev, double eps_s,
                                         const PhysicalConstants& k = kPaperConstants) {
  const double per_cm2 = energy_shift_potential_deviation(F0_sq, 1.0, eps_s, k);
  return std::sqrt(shift_ev / per_cm2) / kCmPerNm;
}

struct ExchangeModel {
  double a_t;        // nm
  double eps_s;
  double prefactor;  // q^2 / (4 pi eps_s eps0 a_t), MHz
};

inline ExchangeModel exchange_model(double a_t, double eps_s,
                                    const PhysicalConstants& k = kPaperConstants) {
  if (!(a_t > 0.0) || !(eps_s > 0.0)) throw InputError("exchange model needs a_t, eps_s > 0");
  return {a_t, eps_s, to_frequency(coulomb_scale(eps_s, k) / nm_to_cm(a_t), k)};
}

/// Exchange model for a host with its default exchange radius.
inline ExchangeModel exchange_model(const MaterialParams& material,
                                    const PhysicalConstants& k = kPaperConstants) {
  return exchange_model(default_exchange_radius(material.host), material.eps_s, k);
}

/// Asymptotic exchange of two well separated donors, MHz:
///   J(l) = 1.6 q^2/(4 pi eps_s eps0 a_t) (l/a_t)^{5/2} exp(-2 l / a_t).
inline double exchange_coupling(double l, const ExchangeModel& model) {
  if (!(l > 0.0)) throw InputError("donor separation must be > 0");
  const double x = l / model.a_t;
  return 1.6 * model.prefactor * std::pow(x, 2.5) * std::exp(-2.0 * x);
}

/// The asymptotic form is only trusted for l / a_t >= 3.
inline bool exchange_formula_valid(double l, const ExchangeModel& model) {
  return l / model.a_t >= 3.0;
}

struct CrossingDistance {
  double l;                  // nm
  double relative_residual;  // |J(l) - 2 mu_B B| / (2 mu_B B)
  int iterations;
};

/// Separation l* at which J(l*) = 2 mu_B B, searched on [a_t, 100 a_t].
inline CrossingDistance crossing_distance(const FieldConfig& field, const ExchangeModel& model,
                                          double tol = 1e-10,
                                          const PhysicalConstants& k = kPaperConstants) {
  validate(field);
  if (field.B == 0.0) throw InputError("crossing distance requires B > 0");
  const double target = electron_zeeman(field.B, k);
  auto f = [&](double l) { return exchange_coupling(l, model) - target; };
  const auto r = find_root(f, model.a_t, 100.0 * model.a_t, tol);
  return {r.root, r.residual / target, r.iterations};
}

}  // namespace donorspin
