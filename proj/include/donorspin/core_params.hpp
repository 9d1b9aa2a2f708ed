#pragma once

// Physical constants, unit bridges and the donor/host parameter registry.
//
// Units used across the library:
//   energies      MHz (E/h)
//   lengths       nm (converted to cm where a formula is in CGS-like units)
//   fields        T for magnetic induction, V/cm for electric field
//   densities     cm^-3

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "donorspin/errors.hpp"

namespace donorspin {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHzPerMHz = 1.0e6;
inline constexpr double kCmPerNm = 1.0e-7;

struct PhysicalConstants {
  std::string_view id;
  double mu_B;          // J/T
  double mu_N;          // J/T
  double k_B;           // J/K
  double h;             // J s
  double eps0;          // F/cm
  double q;             // C
  double mu0_over_4pi;  // T^2 cm^3 / J
};

/// Rounded values as quoted in the device literature this library reproduces.
/// h and q are not quoted there and take their usual four-digit values.
inline constexpr PhysicalConstants kPaperConstants{
    "paper-1", 9.27e-24, 5.05e-27, 1.38e-23, 6.626e-34, 8.85e-14, 1.602e-19, 1.0e-1};

inline constexpr PhysicalConstants kCodataConstants{
    "codata-2018",     9.2740100783e-24, 5.0507837461e-27,  1.380649e-23,
    6.62607015e-34,    8.8541878128e-14, 1.602176634e-19,   1.00000000055e-1};

inline const PhysicalConstants& constants_by_name(std::string_view name) {
  if (name == "paper" || name == kPaperConstants.id) return kPaperConstants;
  if (name == "codata" || name == kCodataConstants.id) return kCodataConstants;
  throw RegistryError("unknown constant set '" + std::string(name) + "'");
}

/// Energy in J to frequency E/h in MHz.
constexpr double to_frequency(double energy_joule,
                              const PhysicalConstants& k = kPaperConstants) {
  return energy_joule / k.h / kHzPerMHz;
}

constexpr double from_frequency(double frequency_mhz,
                                const PhysicalConstants& k = kPaperConstants) {
  return frequency_mhz * kHzPerMHz * k.h;
}

constexpr double ev_to_joule(double ev, const PhysicalConstants& k = kPaperConstants) {
  return ev * k.q;
}

constexpr double joule_to_ev(double joule, const PhysicalConstants& k = kPaperConstants) {
  return joule / k.q;
}

constexpr double nm_to_cm(double nm) { return nm * kCmPerNm; }

/// 2 mu_B B / h in MHz: the electron Zeeman splitting (g = 2).
constexpr double electron_zeeman(double B, const PhysicalConstants& k = kPaperConstants) {
  return to_frequency(2.0 * k.mu_B * B, k);
}

/// g_N mu_N B / h in MHz.
constexpr double nuclear_zeeman(double g_N, double B,
                                const PhysicalConstants& k = kPaperConstants) {
  return to_frequency(g_N * k.mu_N * B, k);
}

/// q^2 / (4 pi eps_s eps0), in J cm.
constexpr double coulomb_scale(double eps_s, const PhysicalConstants& k = kPaperConstants) {
  return k.q * k.q / (4.0 * kPi * eps_s * k.eps0);
}

// ---------------------------------------------------------------------------
// Registry

enum class Species { P31InSi, P31InGe };
enum class Host { Si, Ge };

struct DonorParams {
  Species species;
  std::string_view tag;
  double A;                           // MHz
  std::optional<double> A_joule;      // as quoted, when quoted in J
  double g_N;
  double contact_density;             // cm^-3
};

struct MaterialParams {
  Host host;
  std::string_view tag;
  double eps_s;
  int valley_count;
  double a_t;                          // nm
  double a_l;                          // nm
  std::optional<double> bloch_factor;  // |psi(k_j, 0)|^2
  double E_d0;                         // eV, variational
  double E_d;                          // eV, experimental
  std::optional<double> E_2p;          // eV
  std::optional<double> E_3p;          // eV
};

namespace detail {

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline constexpr std::array<DonorParams, 2> kDonors{{
    {Species::P31InSi, "p31-si", 116.0, 7.76e-26, 2.26, 0.43e24},
    {Species::P31InGe, "p31-ge", 45.0, std::nullopt, 1.56, 0.22e24},
}};

// Ge has no quoted static dielectric constant or Bloch amplitude in the
// source tables; eps_s = 16.0 is the standard handbook value.
inline constexpr std::array<MaterialParams, 2> kMaterials{{
    {Host::Si, "si", 11.9, 6, 2.50, 1.42, 186.0, -0.029, -0.045, -0.0109, -0.0057},
    {Host::Ge, "ge", 16.0, 4, 6.45, 2.27, std::nullopt, -0.009, -0.012, std::nullopt,
     std::nullopt},
}};

}  // namespace detail

inline const DonorParams& donor_params(Species species) {
  for (const auto& d : detail::kDonors) {
    if (d.species == species) return d;
  }
  throw RegistryError("unregistered donor species");
}

/// Accepts "p31-si", "p31-ge", and "p31" (the silicon host).
inline const DonorParams& donor_params(std::string_view tag) {
  const std::string t = detail::lowercase(tag);
  if (t == "p31") return donor_params(Species::P31InSi);
  for (const auto& d : detail::kDonors) {
    if (d.tag == t) return d;
  }
  throw RegistryError("unregistered donor species '" + std::string(tag) + "'");
}

/// The P31 donor hosted in the given material.
inline const DonorParams& donor_for_host(Host host) {
  return donor_params(host == Host::Si ? Species::P31InSi : Species::P31InGe);
}

inline const MaterialParams& material_params(Host host) {
  for (const auto& m : detail::kMaterials) {
    if (m.host == host) return m;
  }
  throw RegistryError("unregistered host material");
}

inline const MaterialParams& material_params(std::string_view tag) {
  const std::string t = detail::lowercase(tag);
  for (const auto& m : detail::kMaterials) {
    if (m.tag == t) return m;
  }
  throw RegistryError("unregistered host material '" + std::string(tag) + "'");
}

/// Transverse radius used in the asymptotic exchange formula. For silicon the
/// exchange estimate is made with a_t = 3 nm rather than the 2.50 nm
/// variational value.
inline double default_exchange_radius(Host host) {
  return host == Host::Si ? 3.0 : material_params(host).a_t;
}

}  // namespace donorspin
