#pragma once

// One donor: electron spin S = 1/2 coupled to nuclear spin I = 1/2 in a field
// B along z,
//
//   H = 2 mu_B B S_z - g_N mu_N B I_z + A I.S
//
// Product basis |M, m> in the fixed order (-1/2,-1/2), (-1/2,+1/2),
// (+1/2,-1/2), (+1/2,+1/2); index = 2 * (M + 1/2) + (m + 1/2).

#include <array>
#include <cmath>
#include <cstddef>

#include "donorspin/core_params.hpp"
#include "donorspin/numerics.hpp"

namespace donorspin {

struct FieldConfig {
  double B = 0.0;  // T
};

inline void validate(const FieldConfig& field) {
  if (!(field.B >= 0.0) || !std::isfinite(field.B)) {
    throw InputError("magnetic induction must be finite and >= 0");
  }
}

constexpr std::size_t single_donor_index(int twice_M, int twice_m) {
  return static_cast<std::size_t>(2 * ((twice_M + 1) / 2) + (twice_m + 1) / 2);
}

inline SymmetricMatrix single_donor_hamiltonian(const FieldConfig& field, const DonorParams& donor,
                                                const PhysicalConstants& k = kPaperConstants) {
  validate(field);
  const double ze = electron_zeeman(field.B, k);
  const double zn = nuclear_zeeman(donor.g_N, field.B, k);
  SymmetricMatrix h(4);
  for (int tM : {-1, 1}) {
    for (int tm : {-1, 1}) {
      const double M = 0.5 * tM;
      const double m = 0.5 * tm;
      const std::size_t i = single_donor_index(tM, tm);
      h.set(i, i, ze * M - zn * m + donor.A * M * m);
    }
  }
  // Flip-flop part of A I.S: (A/2)(I+ S- + I- S+).
  h.set(single_donor_index(-1, 1), single_donor_index(1, -1), 0.5 * donor.A);
  return h;
}

struct BreitRabiLevel {
  int F;
  int m_F;
  double energy;  // MHz
};

struct BreitRabiLevels {
  std::array<BreitRabiLevel, 4> levels;  // (1,+1), (1,0), (1,-1), (0,0)
  double X;

  [[nodiscard]] double energy(int F, int m_F) const {
    for (const auto& l : levels) {
      if (l.F == F && l.m_F == m_F) return l.energy;
    }
    throw InputError("no Breit-Rabi level with the requested (F, m_F)");
  }
};

/// Closed-form levels
///   E(F, m_F) = -A/4 - g_N mu_N B m_F +/- (A/2) sqrt(1 + 2 m_F X + X^2),
///   X = (2 mu_B + g_N mu_N) B / A.
/// For the stretched states m_F = +/-1 the root is (1 + m_F X), taken with its
/// sign; for m_F = -1 this is what makes E(1,-1) = A/4 - (2 mu_B - g_N mu_N) B/2
/// once X > 1. Written in terms of Z = X A so that A = 0 is regular.
inline BreitRabiLevels breit_rabi_levels(const FieldConfig& field, const DonorParams& donor,
                                         const PhysicalConstants& k = kPaperConstants) {
  validate(field);
  const double A = donor.A;
  const double zn = nuclear_zeeman(donor.g_N, field.B, k);
  const double Z = electron_zeeman(field.B, k) + zn;
  const double root0 = 0.5 * std::hypot(A, Z);

  BreitRabiLevels out{};
  out.X = A != 0.0 ? Z / A : (Z == 0.0 ? 0.0 : INFINITY);
  out.levels[0] = {1, 1, -0.25 * A - zn + 0.5 * (A + Z)};
  out.levels[1] = {1, 0, -0.25 * A + root0};
  out.levels[2] = {1, -1, -0.25 * A + zn + 0.5 * (A - Z)};
  out.levels[3] = {0, 0, -0.25 * A - root0};
  return out;
}

/// Field at which the dimensionless Breit-Rabi parameter equals X.
inline FieldConfig field_for_x(double X, const DonorParams& donor,
                               const PhysicalConstants& k = kPaperConstants) {
  const double per_tesla = electron_zeeman(1.0, k) + nuclear_zeeman(donor.g_N, 1.0, k);
  return {X * donor.A / per_tesla};
}

enum class ResonanceVariant { Exact, Asymptotic };

/// nu_A = [E(1,-1) - E(0,0)] / h. The asymptotic variant is the large-field
/// expansion A/2 + g_N mu_N B + A^2 / (8 mu_B B).
inline double nuclear_resonance_frequency(const FieldConfig& field, const DonorParams& donor,
                                          ResonanceVariant variant = ResonanceVariant::Exact,
                                          const PhysicalConstants& k = kPaperConstants) {
  validate(field);
  if (variant == ResonanceVariant::Exact) {
    const auto levels = breit_rabi_levels(field, donor, k);
    return levels.energy(1, -1) - levels.energy(0, 0);
  }
  const double eight_mu_B_B = 4.0 * electron_zeeman(field.B, k);
  if (eight_mu_B_B == 0.0) throw InputError("asymptotic nu_A requires B > 0");
  return 0.5 * donor.A + nuclear_zeeman(donor.g_N, field.B, k) +
         donor.A * donor.A / eight_mu_B_B;
}

struct SublatticeFrequencies {
  double plus;   // MHz
  double minus;  // MHz
};

/// nu_A^{+/-} = |g_N mu_N B +/- A/2| for the two antiferromagnetic sublattices.
inline SublatticeFrequencies sublattice_frequencies(const FieldConfig& field,
                                                    const DonorParams& donor,
                                                    const PhysicalConstants& k = kPaperConstants) {
  validate(field);
  const double zn = nuclear_zeeman(donor.g_N, field.B, k);
  return {std::abs(zn + 0.5 * donor.A), std::abs(zn - 0.5 * donor.A)};
}

/// Enhancement of a transverse RF field at the nucleus through the electron
/// polarization: A S_par / (g_N mu_N B).
inline double gain_factor(const FieldConfig& field, const DonorParams& donor,
                          double electron_polarization = 0.5,
                          const PhysicalConstants& k = kPaperConstants) {
  validate(field);
  if (field.B == 0.0) throw InputError("gain factor requires B > 0");
  return donor.A * electron_polarization / nuclear_zeeman(donor.g_N, field.B, k);
}

/// Temperature scale 2 mu_B B / k_B (K) below which the donor electrons sit
/// in the lower Zeeman state.
inline double electron_polarization_temperature(const FieldConfig& field,
                                                const PhysicalConstants& k = kPaperConstants) {
  validate(field);
  return 2.0 * k.mu_B * field.B / k.k_B;
}

}  // namespace donorspin
