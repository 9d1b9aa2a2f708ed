#pragma once

// Disk gate of radius a on a semi-infinite dielectric; donor on the gate axis
// at depth c. Quadratic Stark reduction of the hyperfine constant and the
// resulting detuning of the nuclear resonance.

#include <algorithm>
#include <cmath>

#include "donorspin/core_params.hpp"

namespace donorspin {

struct GateGeometry {
  double a = 5.0;     // gate radius, nm
  double c = 10.0;    // donor depth, nm
  double V = 0.0;     // gate voltage, V
  double V_FB = 0.0;  // flat-band voltage, V
};

inline void validate(const GateGeometry& g) {
  if (!(g.a > 0.0) || !(g.c > 0.0)) throw InputError("gate radius and depth must be > 0");
  if (!std::isfinite(g.V) || !std::isfinite(g.V_FB)) throw InputError("non-finite voltage");
}

struct FieldAtDonor {
  double phi;        // V
  double E_c;        // V/cm
  double E_c_prime;  // V/cm^2, d^2 phi / dz^2 on the axis
};

/// Stark coefficient of A: dA/A = -3.1e-12 E_c^2 (E_c in V/cm).
inline constexpr double kStarkCoefficient = -3.1e-12;
/// Field scale (V/cm) below which the second-order result is meaningful.
inline constexpr double kStarkFieldScale = 8.0e5;
/// |dA/A| beyond which E_c^3 terms would be needed.
inline constexpr double kStarkValidityLimit = 0.3;
/// Donor polarizability 4 pi eps0 (9/2) a_B*^3 with a_B* = 2 nm, F cm^2.
/// Documents the origin of kStarkCoefficient; not used in evaluation.
inline constexpr double kDonorPolarizability = 4.0e-32;

/// Potential (V) at cylindrical (rho, z) in nm below a disk held at V:
///   phi = (2V/pi) arctan sqrt(2a^2 / (s + sqrt(s^2 + 4 a^2 z^2))),
///   s = rho^2 + z^2 - a^2.
/// Valid in the dielectric half-space z >= 0; elsewhere throws DomainError.
inline double gate_potential(double rho, double z, const GateGeometry& geom) {
  if (!(geom.a > 0.0)) throw InputError("gate radius must be > 0");
  if (!std::isfinite(rho) || !std::isfinite(z) || rho < 0.0 || z < 0.0) {
    throw DomainError("gate potential is defined for rho >= 0, z >= 0");
  }
  const double a2 = geom.a * geom.a;
  const double s = rho * rho + z * z - a2;
  const double denom = s + std::sqrt(s * s + 4.0 * a2 * z * z);
  if (denom < 0.0) throw DomainError("negative radicand in gate potential");
  // On the disk itself denom == 0 and the arctan saturates at pi/2.
  const double angle = denom == 0.0 ? 0.5 * kPi : std::atan(std::sqrt(2.0 * a2 / denom));
  return 2.0 * geom.V / kPi * angle;
}

/// On-axis potential, field and curvature at the donor (rho = 0, z = c).
inline FieldAtDonor field_at_donor(const GateGeometry& geom, double voltage) {
  validate(geom);
  const double a = nm_to_cm(geom.a);
  const double c = nm_to_cm(geom.c);
  const double r2 = a * a + c * c;
  return {2.0 * voltage / kPi * std::atan(geom.a / geom.c),
          2.0 * voltage / kPi * a / r2,
          4.0 * voltage / kPi * a * c / (r2 * r2)};
}

inline FieldAtDonor field_at_donor(const GateGeometry& geom) {
  return field_at_donor(geom, geom.V);
}

/// dA/A for a field E_c (V/cm); even in E_c and never positive.
inline double stark_fraction(double E_c) { return kStarkCoefficient * E_c * E_c; }

inline bool stark_field_small(double E_c) { return std::abs(E_c) < kStarkFieldScale; }

struct ResonanceDetuning {
  double delta_nu;              // MHz
  double fraction;              // dA/A
  double E_c;                   // V/cm, at the effective voltage V_FB + V
  bool beyond_second_order;     // |dA/A| > kStarkValidityLimit
};

/// Detuning of nu_A by the gate, using the effective voltage V_FB + V:
///   d nu_A = (dA/A) nu_A.
inline ResonanceDetuning resonance_detuning(const GateGeometry& geom, double nu_A) {
  const auto field = field_at_donor(geom, geom.V_FB + geom.V);
  const double fraction = stark_fraction(field.E_c);
  return {fraction * nu_A, fraction, field.E_c, std::abs(fraction) > kStarkValidityLimit};
}

/// Coefficient k in d nu_A = k (V_FB + V)^2, MHz/V^2.
inline double detuning_coefficient(const GateGeometry& geom, double nu_A) {
  return stark_fraction(field_at_donor(geom, 1.0).E_c) * nu_A;
}

/// Tuning slope alpha = d(d nu_A)/dV at the geometry's V, MHz/V.
inline double tuning_slope(const GateGeometry& geom, double nu_A) {
  return 2.0 * detuning_coefficient(geom, nu_A) * (geom.V_FB + geom.V);
}

/// Relative error of A from a lateral placement error <d rho^2> (nm^2):
/// 2<d rho^2>/a^2 for c/a < 0.2, 2<d rho^2>/c^2 for 0.5 <= c/a <= 2, and
/// 2<d rho^2>/max(a, c)^2 in between and beyond.
inline double placement_sensitivity(double delta_rho_sq, const GateGeometry& geom) {
  validate(geom);
  if (!(delta_rho_sq >= 0.0)) throw InputError("placement variance must be >= 0");
  const double ratio = geom.c / geom.a;
  double scale = std::max(geom.a, geom.c);
  if (ratio < 0.2) {
    scale = geom.a;
  } else if (ratio >= 0.5 && ratio <= 2.0) {
    scale = geom.c;
  }
  return 2.0 * delta_rho_sq / (scale * scale);
}

}  // namespace donorspin
