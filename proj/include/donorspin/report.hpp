#pragma once

// Named reports comparing computed headline numbers with published values.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "donorspin/effective_mass.hpp"
#include "donorspin/export.hpp"
#include "donorspin/gate_stark.hpp"
#include "donorspin/single_donor.hpp"
#include "donorspin/two_donor.hpp"

namespace donorspin {

struct ReportOptions {
  double B = 2.0;           // T
  double J = 30000.0;       // MHz
  double V_FB = 0.6;        // V, flat-band report only
  std::string material = "si";
  std::string donor;        // empty: the host's donor
  std::string constants = "paper";
};

struct ReportLine {
  std::string quantity;
  double computed;
  std::string unit;
  std::optional<double> quoted;
  std::optional<std::pair<double, double>> quoted_range;

  /// Relative deviation from the quoted value; 0 inside a quoted range and the
  /// distance to the nearest edge outside it. NaN when nothing is quoted.
  [[nodiscard]] double deviation() const {
    if (quoted) return (computed - *quoted) / std::abs(*quoted);
    if (quoted_range) {
      const auto [lo, hi] = *quoted_range;
      if (computed < lo) return (computed - lo) / std::abs(lo);
      if (computed > hi) return (computed - hi) / std::abs(hi);
      return 0.0;
    }
    return NAN;
  }
};

struct Report {
  std::string topic;
  std::string conditions;
  std::vector<ReportLine> lines;

  [[nodiscard]] const ReportLine& line(std::string_view quantity) const {
    for (const auto& l : lines)
      if (l.quantity == quantity) return l;
    throw RegistryError("report has no quantity '" + std::string(quantity) + "'");
  }
};

namespace detail {

struct ReportContext {
  const PhysicalConstants& k;
  const MaterialParams& material;
  const DonorParams& donor;
  const ReportOptions& opt;

  [[nodiscard]] bool at(double B) const { return std::abs(opt.B - B) < 1e-12; }
  [[nodiscard]] bool silicon() const { return material.host == Host::Si; }
  [[nodiscard]] bool p31_si() const { return donor.species == Species::P31InSi; }
};

inline std::optional<double> quote_if(bool cond, double v) {
  return cond ? std::optional<double>(v) : std::nullopt;
}

inline std::string conditions(const ReportOptions& o, bool with_J) {
  char buf[160];
  if (with_J) {
    std::snprintf(buf, sizeof buf, "B = %g T, J = %g MHz, material %s", o.B, o.J,
                  o.material.c_str());
  } else {
    std::snprintf(buf, sizeof buf, "B = %g T, material %s", o.B, o.material.c_str());
  }
  return buf;
}

inline Report report_nu_A(const ReportContext& c) {
  const FieldConfig f{c.opt.B};
  const bool quoted = c.at(2.0) && c.p31_si();
  const auto sub = sublattice_frequencies(f, c.donor, c.k);
  return {"nu_A",
          conditions(c.opt, false),
          {{"nu_A", nuclear_resonance_frequency(f, c.donor, ResonanceVariant::Exact, c.k), "MHz",
            quote_if(quoted, 92.6), {}},
           {"nu_A_asymptotic",
            nuclear_resonance_frequency(f, c.donor, ResonanceVariant::Asymptotic, c.k), "MHz",
            quote_if(quoted, 92.6), {}},
           {"nu_A_plus", sub.plus, "MHz", {}, {}},
           {"nu_A_minus", sub.minus, "MHz", {}, {}},
           {"gain_factor", gain_factor(f, c.donor, 0.5, c.k), "", {}, {}},
           {"T_polarization", electron_polarization_temperature(f, c.k), "K", {}, {}}}};
}

inline Report report_crossing(const ReportContext& c) {
  const auto model = exchange_model(c.material, c.k);
  const auto x = crossing_distance({c.opt.B}, model, 1e-10, c.k);
  std::optional<std::pair<double, double>> range;
  if (c.at(2.0)) {
    range = c.silicon() ? std::pair{10.0, 20.0} : std::pair{25.0, 50.0};
  }
  return {"crossing",
          conditions(c.opt, false),
          {{"l_star", x.l, "nm", {}, range},
           {"a_t", model.a_t, "nm", {}, {}},
           {"relative_residual", x.relative_residual, "", {}, {}}}};
}

inline Report report_nu_J(const ReportContext& c) {
  const auto cfg = two_donor_config(c.opt.B, c.opt.J, c.donor);
  const bool quoted = c.at(2.0) && std::abs(c.opt.J - 30000.0) < 1e-9 && c.p31_si();
  return {"nu_J",
          conditions(c.opt, true),
          {{"nu_J", nu_J(cfg, NuJVariant::Exact, c.k), "MHz", quote_if(quoted, 0.075), {}},
           {"nu_J_small_J", nu_J(cfg, NuJVariant::SmallExchange, c.k), "MHz",
            quote_if(quoted, 0.075), {}},
           {"zeeman_2muB_B", electron_zeeman(c.opt.B, c.k), "MHz", {}, {}}}};
}

inline Report report_stark(const ReportContext& c) {
  const GateGeometry g;
  const double nu = nuclear_resonance_frequency({c.opt.B}, c.donor, ResonanceVariant::Exact, c.k);
  const bool quoted = c.at(2.0) && c.p31_si();
  GateGeometry offset = g;
  offset.V_FB = 0.6;
  return {"stark",
          "a = 5 nm, c = 10 nm, " + conditions(c.opt, false),
          {{"detuning_coefficient", detuning_coefficient(g, nu), "MHz/V^2",
            quote_if(quoted, -17.5), {}},
           {"E_c_per_volt", field_at_donor(g, 1.0).E_c, "V/cm", 2.5e5, {}},
           {"dA_over_A_per_V2", stark_fraction(field_at_donor(g, 1.0).E_c), "1/V^2", {}, {}},
           {"slope_at_V0_VFB_0.6", tuning_slope(offset, nu), "MHz/V", quote_if(quoted, -30.0),
            {}}}};
}

inline Report report_flatband(const ReportContext& c) {
  GateGeometry g;
  g.V_FB = c.opt.V_FB;
  const double nu = nuclear_resonance_frequency({c.opt.B}, c.donor, ResonanceVariant::Exact, c.k);
  std::vector<double> v;
  std::vector<double> d;
  for (int i = 0; i <= 20; ++i) {
    g.V = 0.05 * i;
    v.push_back(g.V);
    d.push_back(resonance_detuning(g, nu).delta_nu);
  }
  const auto fit = fit_quadratic(v, d);
  const bool quoted = c.at(2.0) && std::abs(c.opt.V_FB - 0.6) < 1e-12 && c.p31_si();
  char cond[64];
  std::snprintf(cond, sizeof cond, "V_FB = %g V, V in [0, 1], ", c.opt.V_FB);
  return {"flatband",
          cond + conditions(c.opt, false),
          {{"c0", fit[0], "MHz", quote_if(quoted, -6.3), {}},
           {"c1", fit[1], "MHz/V", quote_if(quoted, -21.0), {}},
           {"c2", fit[2], "MHz/V^2", quote_if(quoted, -17.5), {}}}};
}

inline Report report_anticross(const ReportContext& c) {
  auto cfg = two_donor_config(c.opt.B, 0.0, c.donor);
  const double ze = electron_zeeman(c.opt.B, c.k);
  const auto ac = find_anticrossing(cfg, c.k);
  cfg.J = ze;
  const double at_crossing = nu_J(cfg, NuJVariant::Exact, c.k);
  cfg.J = ac.J;
  return {"anticross",
          conditions(c.opt, false),
          {{"J_min_gap", ac.J, "MHz", ze, {}},
           {"min_gap", ac.gap, "MHz", {}, {}},
           {"nu_J_at_2muB_B", at_crossing, "MHz", 0.5 * c.donor.A, {}},
           {"nu_J_at_min_gap", nu_J(cfg, NuJVariant::Exact, c.k), "MHz", 0.5 * c.donor.A, {}}}};
}

inline Report report_contact(const ReportContext& c) {
  const double contact = contact_density_variational(c.material);
  const bool si = c.silicon() && c.p31_si();
  return {"contact",
          "material " + c.opt.material,
          {{"contact_density_variational", contact, "cm^-3", quote_if(si, 0.042e24), {}},
           {"A_fermi_experimental_density",
            hyperfine_constant_fermi(c.donor.contact_density, c.donor.g_N, c.k), "MHz",
            c.donor.A, {}},
           {"A_fermi_variational_density", hyperfine_constant_fermi(contact, c.donor.g_N, c.k),
            "MHz", {}, {}},
           {"F0_sq_experimental", modulation_density_from_experiment(c.donor.contact_density,
                                                                     c.material),
            "cm^-3", quote_if(si, 3.94e20), {}}}};
}

inline Report report_central_cell(const ReportContext& c) {
  const double F0 = modulation_density_from_experiment(c.donor.contact_density, c.material);
  const double r = nm_to_cm(0.42);
  const bool si = c.silicon() && c.p31_si();
  return {"central_cell",
          "material " + c.opt.material,
          {{"dE_d_at_0.42nm", energy_shift_potential_deviation(F0, r * r, c.material.eps_s, c.k),
            "eV", quote_if(si, 0.016), {}},
           {"r_rms_for_0.016eV", deviation_radius_for_shift(F0, 0.016, c.material.eps_s, c.k),
            "nm", quote_if(si, 0.42), {}}}};
}

using ReportFn = Report (*)(const ReportContext&);

inline const std::vector<std::pair<std::string_view, ReportFn>>& report_registry() {
  static const std::vector<std::pair<std::string_view, ReportFn>> r{
      {"nu_A", report_nu_A},         {"crossing", report_crossing},
      {"nu_J", report_nu_J},         {"stark", report_stark},
      {"flatband", report_flatband}, {"anticross", report_anticross},
      {"contact", report_contact},   {"central_cell", report_central_cell},
  };
  return r;
}

}  // namespace detail

inline std::vector<std::string> report_topics() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : detail::report_registry()) out.emplace_back(name);
  return out;
}

/// Throws RegistryError for an unknown topic.
inline Report make_report(std::string_view topic, const ReportOptions& opt = {}) {
  for (const auto& [name, fn] : detail::report_registry()) {
    if (name != topic) continue;
    const auto& material = material_params(opt.material);
    const auto& donor =
        opt.donor.empty() ? donor_for_host(material.host) : donor_params(opt.donor);
    return fn({constants_by_name(opt.constants), material, donor, opt});
  }
  throw RegistryError("unknown report topic '" + std::string(topic) + "'");
}

inline void write_report_text(const Report& r, std::ostream& out) {
  out << "report " << r.topic << " (" << r.conditions << ")\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-30s %18s %18s %12s  %s\n", "quantity", "computed", "published",
                "deviation", "unit");
  out << buf;
  for (const auto& l : r.lines) {
    std::string quoted = "-";
    if (l.quoted) {
      quoted = format_value(*l.quoted);
    } else if (l.quoted_range) {
      quoted = "[" + format_value(l.quoted_range->first) + ", " +
               format_value(l.quoted_range->second) + "]";
    }
    const double dev = l.deviation();
    char devbuf[32] = "-";
    if (!std::isnan(dev)) std::snprintf(devbuf, sizeof devbuf, "%+.2f%%", 100.0 * dev);
    std::snprintf(buf, sizeof buf, "%-30s %18s %18s %12s  %s\n", l.quantity.c_str(),
                  format_value(l.computed).c_str(), quoted.c_str(), devbuf, l.unit.c_str());
    out << buf;
  }
}

inline nlohmann::ordered_json report_to_json(const Report& r) {
  auto lines = nlohmann::ordered_json::array();
  for (const auto& l : r.lines) {
    nlohmann::ordered_json j;
    j["quantity"] = l.quantity;
    j["computed"] = round_to_precision(l.computed);
    j["unit"] = l.unit;
    j["published"] = l.quoted ? nlohmann::ordered_json(*l.quoted) : nlohmann::ordered_json(nullptr);
    j["published_range"] = l.quoted_range ? nlohmann::ordered_json::array(
                                            {l.quoted_range->first, l.quoted_range->second})
                                      : nlohmann::ordered_json(nullptr);
    const double dev = l.deviation();
    j["deviation"] = std::isnan(dev) ? nlohmann::ordered_json(nullptr)
                                     : nlohmann::ordered_json(round_to_precision(dev));
    lines.push_back(j);
  }
  return {{"topic", r.topic}, {"conditions", r.conditions}, {"lines", lines}};
}

inline void write_report_csv(const Report& r, std::ostream& out) {
  out << "quantity,computed,published,deviation,unit\n";
  for (const auto& l : r.lines) {
    out << l.quantity << "," << format_value(l.computed) << ","
        << (l.quoted ? format_value(*l.quoted) : std::string()) << ","
        << (std::isnan(l.deviation()) ? std::string() : format_value(l.deviation())) << ","
        << l.unit << "\n";
  }
}

}  // namespace donorspin
